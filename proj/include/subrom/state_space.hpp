#pragma once

#include "subrom/core.hpp"

#include <vector>

namespace subrom {

/// Strictly proper unless D is set; dimensions follow the members.
struct StateSpace {
    MatX A, B, C, D;

    int order() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }

    static StateSpace strictly_proper(MatX A, MatX B, MatX C);
};

/// Solve A^T P + P A = -Q for symmetric positive definite Q (dense
/// Kronecker formulation, adequate for the model orders used here).
MatX lyapunov_solve(const MatX& A, const MatX& Q);

/// Symmetric square root of an SPD matrix.
MatX symmetric_sqrt(const MatX& P);

/// Orthonormal rows spanning the null space of M (possibly 0 rows).
MatX null_space_rows(const MatX& M, double tol = 1e-12);

/// Matrix exponential e^A (dense Pade, via Eigen).
MatX expm(const MatX& A);

/// integral_0^T e^{A s} ds computed with the block matrix-exponential
/// formula; valid for singular A as well.
MatX integral_expm(const MatX& A, double T);

bool is_hurwitz(const MatX& A, double margin = 0.0);
bool is_controllable(const MatX& A, const MatX& B, double tol = 1e-9);
bool is_observable(const MatX& A, const MatX& C, double tol = 1e-9);

/// Finite transmission zeros of (A, B, C, D) from the generalized
/// eigenvalues of the Rosenbrock pencil.
std::vector<std::complex<double>> transmission_zeros(const MatX& A, const MatX& B, const MatX& C,
                                                     const MatX& D);

/// Exact Kalman reduction to the controllable-and-observable part
/// (orthonormal staircase bases, SVD rank decisions at `tol` relative).
StateSpace minimal_realization(const StateSpace& sys, double tol = 1e-9);

/// Zero-order-hold discretization pair (Ad, Bd) for step T:
/// x+ = Ad x + Bd u with Ad = e^{AT}, Bd = integral e^{As} ds B.
struct DiscretePair {
    MatX Ad, Bd;
};
DiscretePair discretize_zoh(const MatX& A, const MatX& B, double T);

}  // namespace subrom
