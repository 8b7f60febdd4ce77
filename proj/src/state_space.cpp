#include "subrom/state_space.hpp"

#include "subrom/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>

namespace subrom {

StateSpace StateSpace::strictly_proper(MatX A, MatX B, MatX C) {
    StateSpace s;
    s.D = MatX::Zero(C.rows(), B.cols());
    s.A = std::move(A);
    s.B = std::move(B);
    s.C = std::move(C);
    return s;
}

MatX lyapunov_solve(const MatX& A, const MatX& Q) {
    const Eigen::Index n = A.rows();
    const MatX I = MatX::Identity(n, n);
    // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P) = -vec(Q)
    const MatX K = Eigen::kroneckerProduct(I, A.transpose()).eval() +
                   Eigen::kroneckerProduct(A.transpose(), I).eval();
    const Eigen::Map<const VecX> q(Q.data(), n * n);
    const VecX p = K.fullPivLu().solve(-q);
    MatX P = Eigen::Map<const MatX>(p.data(), n, n);
    return 0.5 * (P + P.transpose());
}

MatX symmetric_sqrt(const MatX& P) {
    Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (P + P.transpose()));
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw Error(errc::l1_design_infeasible, "matrix square root requires an SPD argument");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

MatX null_space_rows(const MatX& M, double tol) {
    Eigen::JacobiSVD<MatX> svd(M, Eigen::ComputeFullV);
    const Eigen::Index n = M.cols();
    const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * std::max(smax, 1.0)) ++rank;
    return svd.matrixV().rightCols(n - rank).transpose();
}

MatX expm(const MatX& A) { return A.exp(); }

MatX integral_expm(const MatX& A, double T) {
    const Eigen::Index n = A.rows();
    MatX block = MatX::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = A;
    block.topRightCorner(n, n) = MatX::Identity(n, n);
    const MatX E = (block * T).exp();
    return E.topRightCorner(n, n);
}

bool is_hurwitz(const MatX& A, double margin) {
    const Eigen::VectorXcd ev = A.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i).real() >= -margin) return false;
    return true;
}

namespace {

MatX krylov(const MatX& A, const MatX& B) {
    const Eigen::Index n = A.rows();
    MatX K(n, n * B.cols());
    MatX term = B;
    for (Eigen::Index k = 0; k < n; ++k) {
        K.middleCols(k * B.cols(), B.cols()) = term;
        term = A * term;
    }
    return K;
}

Eigen::Index svd_rank(const Eigen::JacobiSVD<MatX>& svd, double tol) {
    const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * std::max(smax, 1e-300)) ++r;
    return r;
}

}  // namespace

bool is_controllable(const MatX& A, const MatX& B, double tol) {
    Eigen::JacobiSVD<MatX> svd(krylov(A, B));
    return svd_rank(svd, tol) == A.rows();
}

bool is_observable(const MatX& A, const MatX& C, double tol) {
    return is_controllable(A.transpose(), C.transpose(), tol);
}

std::vector<std::complex<double>> transmission_zeros(const MatX& A, const MatX& B, const MatX& C,
                                                     const MatX& D) {
    const Eigen::Index n = A.rows(), m = B.cols(), p = C.rows();
    MatX F(n + p, n + m), E(n + p, n + m);
    F << A, B,
         C, D;
    E.setZero();
    E.topLeftCorner(n, n).setIdentity();
    if (F.rows() != F.cols())
        throw Error(errc::l1_design_infeasible,
                    "transmission zeros defined here for square systems only");
    Eigen::GeneralizedEigenSolver<MatX> ges(F, E);
    std::vector<std::complex<double>> zeros;
    for (Eigen::Index i = 0; i < ges.alphas().size(); ++i) {
        const std::complex<double> alpha = ges.alphas()(i);
        const double beta = ges.betas()(i);
        if (std::abs(beta) > 1e-9 * (1.0 + std::abs(alpha)))
            zeros.push_back(alpha / beta);
    }
    return zeros;
}

StateSpace minimal_realization(const StateSpace& sys, double tol) {
    // Controllable subspace (A-invariant, contains range(B)).
    Eigen::JacobiSVD<MatX> svd_c(krylov(sys.A, sys.B), Eigen::ComputeFullU);
    const Eigen::Index rc = svd_rank(svd_c, tol);
    const MatX V = svd_c.matrixU().leftCols(rc);
    const MatX A1 = V.transpose() * sys.A * V;
    const MatX B1 = V.transpose() * sys.B;
    const MatX C1 = sys.C * V;

    // Observable part: restrict to the orthogonal complement of the
    // unobservable (A-invariant) subspace.
    Eigen::JacobiSVD<MatX> svd_o(krylov(A1.transpose(), C1.transpose()), Eigen::ComputeFullU);
    const Eigen::Index ro = svd_rank(svd_o, tol);
    const MatX W = svd_o.matrixU().leftCols(ro);

    StateSpace out;
    out.A = W.transpose() * A1 * W;
    out.B = W.transpose() * B1;
    out.C = C1 * W;
    out.D = sys.D.size() > 0 ? sys.D : MatX::Zero(sys.C.rows(), sys.B.cols());
    return out;
}

DiscretePair discretize_zoh(const MatX& A, const MatX& B, double T) {
    DiscretePair d;
    d.Ad = (A * T).exp();
    d.Bd = integral_expm(A, T) * B;
    return d;
}

}  // namespace subrom
