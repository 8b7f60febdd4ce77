#include "subrom/l1_adaptive.hpp"

#include "subrom/errors.hpp"

#include <cmath>

namespace subrom {

void PlantModel::validate() const {
    if (A_p.rows() != A_p.cols() || B_p.rows() != A_p.rows() || C_p.cols() != A_p.cols())
        throw Error(errc::l1_plant_not_minimal, "plant matrix dimensions are inconsistent");
    if (!is_controllable(A_p, B_p))
        throw Error(errc::l1_plant_not_minimal, "(A_p, B_p) is not controllable");
    if (!is_observable(A_p, C_p))
        throw Error(errc::l1_plant_not_minimal, "(A_p, C_p) is not observable");
}

DesiredModel DesiredModel::from_matrices(MatX A_m, MatX B_m, MatX C_m, double T_s) {
    DesiredModel d;
    d.A_m = std::move(A_m);
    d.B_m = std::move(B_m);
    d.C_m = std::move(C_m);
    d.T_s = T_s;
    d.validate();
    d.K_g = -(d.C_m * d.A_m.inverse() * d.B_m).inverse();
    return d;
}

DesiredModel DesiredModel::second_order_channels(double wn_pitch, double zeta_pitch,
                                                 double wn_yaw, double zeta_yaw, double T_s) {
    // Balanced-scale realization (states x1' = wn x1) so C_m entries are
    // O(wn) rather than O(wn^2); keeps Lambda well conditioned for slow
    // desired models.
    MatX A = MatX::Zero(4, 4), B = MatX::Zero(4, 2), C = MatX::Zero(2, 4);
    const double wz[2][2] = {{wn_pitch, zeta_pitch}, {wn_yaw, zeta_yaw}};
    for (int ch = 0; ch < 2; ++ch) {
        const double wn = wz[ch][0], zeta = wz[ch][1];
        const int k = 2 * ch;
        A(k, k + 1) = wn;
        A(k + 1, k) = -wn;
        A(k + 1, k + 1) = -2.0 * zeta * wn;
        B(k + 1, ch) = 1.0;
        C(ch, k) = wn;
        C(ch, k + 1) = 2.0 * zeta * wn;
    }
    return from_matrices(std::move(A), std::move(B), std::move(C), T_s);
}

void DesiredModel::validate() const {
    if (!(T_s > 0.0)) throw Error(errc::l1_design_infeasible, "sample time must be positive");
    if (A_m.rows() != A_m.cols() || B_m.rows() != A_m.rows() || C_m.cols() != A_m.cols() ||
        B_m.cols() != C_m.rows())
        throw Error(errc::l1_design_infeasible, "desired-model dimensions are inconsistent");
    if (!is_hurwitz(A_m))
        throw Error(errc::l1_not_hurwitz, "A_m must be Hurwitz");
    const MatX CB = C_m * B_m;
    if (std::abs(CB.determinant()) < 1e-12)
        throw Error(errc::l1_cb_singular, "C_m B_m must be nonsingular");
    for (const auto& z : transmission_zeros(A_m, B_m, C_m, MatX::Zero(C_m.rows(), B_m.cols())))
        if (z.real() >= -1e-9)
            throw Error(errc::l1_nonminimum_phase,
                        "M(s) has a non-minimum-phase transmission zero");
}

MatX DesiredModel::dc_gain() const { return -C_m * A_m.inverse() * B_m; }

AdaptationMatrices build_adaptation_matrices(const DesiredModel& desired, const MatX& Q) {
    desired.validate();
    const int n = desired.order();
    const int m = desired.channels();
    if (Q.rows() != n || Q.cols() != n)
        throw Error(errc::l1_design_infeasible, "Q dimension does not match the desired model");

    AdaptationMatrices mats;
    mats.Q = Q;
    mats.P = lyapunov_solve(desired.A_m, Q);
    const double residual =
        (desired.A_m.transpose() * mats.P + mats.P * desired.A_m + Q).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * Q.cwiseAbs().maxCoeff())
        throw Error(errc::l1_design_infeasible, "Lyapunov solve residual too large");
    mats.sqrtP = symmetric_sqrt(mats.P);

    const MatX N = desired.C_m * mats.sqrtP.inverse();
    mats.D = null_space_rows(N);
    if (mats.D.rows() != n - m)
        throw Error(errc::l1_design_infeasible, "null-space completion has unexpected rank");
    if (mats.D.rows() > 0 &&
        (mats.D * N.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error(errc::l1_design_infeasible, "D (C_m sqrtP^-1)^T != 0");

    mats.Lambda = MatX(n, n);
    mats.Lambda.topRows(m) = desired.C_m;
    if (n > m) mats.Lambda.bottomRows(n - m) = mats.D * mats.sqrtP;
    Eigen::FullPivLU<MatX> lu(mats.Lambda);
    if (!lu.isInvertible())
        throw Error(errc::l1_design_infeasible, "Lambda = [C_m; D sqrtP] is singular");

    const MatX Abar = mats.Lambda * desired.A_m * lu.inverse();
    mats.Phi = integral_expm(Abar, desired.T_s) * mats.Lambda;
    mats.propagator = expm(Abar * desired.T_s);
    Eigen::FullPivLU<MatX> phi_lu(mats.Phi);
    if (!phi_lu.isInvertible())
        throw Error(errc::l1_design_infeasible, "Phi(T_s) is singular");
    mats.neg_gain = -phi_lu.inverse() * mats.propagator;

    mats.exp_Am_Ts = expm(desired.A_m * desired.T_s);
    mats.int_exp_Am = integral_expm(desired.A_m, desired.T_s);
    mats.exp_minus_Am_Ts = expm(-desired.A_m * desired.T_s);
    return mats;
}

VecX output_error_embedding(const VecX& output_error, int order) {
    VecX embedded = VecX::Zero(order);
    embedded.head(output_error.size()) = output_error;
    return embedded;
}

VecX adaptation_step(const AdaptationMatrices& mats, const VecX& y_hat, const VecX& y) {
    return mats.neg_gain *
           output_error_embedding(y_hat - y, static_cast<int>(mats.Lambda.rows()));
}

PredictorStep predictor_step(const AdaptationMatrices& mats, const DesiredModel& desired,
                             const VecX& x_hat, const VecX& u_d, const VecX& sigma) {
    PredictorStep out;
    out.x_next = mats.exp_Am_Ts * x_hat + mats.int_exp_Am * (desired.B_m * u_d + sigma);
    out.y_next = desired.C_m * out.x_next;
    return out;
}

StateSpace first_order_lowpass(double bandwidth, int channels) {
    const MatX I = MatX::Identity(channels, channels);
    return StateSpace::strictly_proper(-bandwidth * I, bandwidth * I, I);
}

FilterModel build_filter(const DesiredModel& desired, const StateSpace& C_filter) {
    desired.validate();
    const int n = desired.order();
    const int m = desired.channels();
    if (C_filter.D.size() > 0 && C_filter.D.cwiseAbs().maxCoeff() > 0.0)
        throw Error(errc::l1_design_infeasible, "C(s) must be strictly proper");
    if (!is_hurwitz(C_filter.A))
        throw Error(errc::l1_design_infeasible, "C(s) must be stable");
    const MatX C0 = -C_filter.C * C_filter.A.inverse() * C_filter.B;
    if ((C0 - MatX::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
        throw Error(errc::l1_design_infeasible, "C(0) must equal the identity");

    // O(s) = C(s) M^{-1}(s) C_m (sI - A_m)^{-1}. The relative-degree-one
    // inverse of M cancels analytically: with K = (C_m B_m)^{-1} and
    // Pi_B = I - B_m K C_m, the map sigma -> w = M^{-1} C_m (sI-A_m)^{-1} sigma
    // has the realization x_e' = Pi_B (A_m x_e + sigma),
    // w = K C_m (A_m x_e + sigma); C(s) then filters w.
    const MatX K = (desired.C_m * desired.B_m).inverse();
    const MatX Pi_B = MatX::Identity(n, n) - desired.B_m * K * desired.C_m;
    const int nc = C_filter.order();

    MatX A_full = MatX::Zero(n + nc, n + nc);
    A_full.topLeftCorner(n, n) = Pi_B * desired.A_m;
    A_full.bottomLeftCorner(nc, n) = C_filter.B * K * desired.C_m * desired.A_m;
    A_full.bottomRightCorner(nc, nc) = C_filter.A;
    MatX B_full(n + nc, n);
    B_full.topRows(n) = Pi_B;
    B_full.bottomRows(nc) = C_filter.B * K * desired.C_m;
    MatX C_full = MatX::Zero(m, n + nc);
    C_full.rightCols(nc) = C_filter.C;

    FilterModel fm;
    fm.O = minimal_realization(StateSpace::strictly_proper(A_full, B_full, C_full));
    if (fm.O.order() > 0 && !is_hurwitz(fm.O.A))
        throw Error(errc::l1_design_infeasible, "reduced O(s) is not stable");
    fm.exp_Ao_Ts = expm(fm.O.A * desired.T_s);
    fm.int_exp_Ao = integral_expm(fm.O.A, desired.T_s);
    return fm;
}

ControlStep control_step(const FilterModel& filter, const AdaptationMatrices& mats,
                         const DesiredModel& desired, const VecX& omega_c, const VecX& sigma,
                         const VecX& x_u) {
    ControlStep out;
    out.u_d = desired.K_g * omega_c - filter.O.C * x_u;
    out.x_u_next =
        filter.exp_Ao_Ts * x_u + filter.int_exp_Ao * (filter.O.B * (mats.exp_minus_Am_Ts * sigma));
    return out;
}

L1Controller::L1Controller(DesiredModel desired, MatX Q, StateSpace C_filter,
                           bool adaptation_enabled)
    : desired_(std::move(desired)),
      mats_(build_adaptation_matrices(desired_, Q)),
      filter_(build_filter(desired_, C_filter)),
      adaptation_on_(adaptation_enabled) {
    x_hat_ = VecX::Zero(desired_.order());
    x_u_ = VecX::Zero(filter_.O.order());
    sigma_ = VecX::Zero(desired_.order());
}

void L1Controller::initialize(const VecX& y0) {
    x_hat_ = desired_.C_m.completeOrthogonalDecomposition().pseudoInverse() * y0;
    x_u_ = VecX::Zero(filter_.O.order());
    sigma_ = VecX::Zero(desired_.order());
    initialized_ = true;
}

VecX L1Controller::step(const VecX& omega_c, const VecX& y) {
    if (!initialized_) initialize(y);
    const VecX y_hat = desired_.C_m * x_hat_;
    sigma_ = adaptation_on_ ? adaptation_step(mats_, y_hat, y)
                            : VecX::Zero(desired_.order());
    const ControlStep ctrl = control_step(filter_, mats_, desired_, omega_c, sigma_, x_u_);
    x_u_ = ctrl.x_u_next;
    x_hat_ = predictor_step(mats_, desired_, x_hat_, ctrl.u_d, sigma_).x_next;
    return ctrl.u_d;
}

}  // namespace subrom
