#pragma once

#include "subrom/core.hpp"
#include "subrom/state_space.hpp"

namespace subrom {

/// Autopilot-vehicle linear model used for L1 design studies; must be a
/// controllable-observable triple.
struct PlantModel {
    MatX A_p, B_p, C_p;
    void validate() const;
};

/// Desired closed-loop model M(s) = C_m (sI - A_m)^{-1} B_m with the
/// feed-forward gain K_g = -(C_m A_m^{-1} B_m)^{-1} and the L1 sample time.
struct DesiredModel {
    MatX A_m, B_m, C_m;
    MatX K_g;
    double T_s = 0.01;

    int order() const { return static_cast<int>(A_m.rows()); }
    int channels() const { return static_cast<int>(C_m.rows()); }

    /// Validates (Hurwitz, C_m B_m nonsingular, zeros strictly minimum
    /// phase) and fills K_g.
    static DesiredModel from_matrices(MatX A_m, MatX B_m, MatX C_m, double T_s);

    /// Default design: decoupled pitch/yaw channels, each
    /// M(s) = (2 zeta wn s + wn^2) / (s^2 + 2 zeta wn s + wn^2)
    /// (the numerator zero keeps C_m B_m nonsingular, DC gain 1).
    static DesiredModel second_order_channels(double wn_pitch, double zeta_pitch, double wn_yaw,
                                              double zeta_yaw, double T_s);

    void validate() const;
    MatX dc_gain() const;  // M(0) = -C_m A_m^{-1} B_m
};

/// Matrices of the piecewise-constant adaptation law, built once per design.
struct AdaptationMatrices {
    MatX Q, P, sqrtP, D, Lambda;
    MatX Phi;               // integral_0^{Ts} e^{Lam Am Lam^-1 (Ts-tau)} Lam dtau
    MatX propagator;        // e^{Lam Am Lam^-1 Ts}
    MatX neg_gain;          // -Phi^{-1} propagator, applied to the embedded error
    MatX exp_Am_Ts;         // e^{Am Ts}
    MatX int_exp_Am;        // integral_0^{Ts} e^{Am s} ds
    MatX exp_minus_Am_Ts;   // e^{-Am Ts}
};

AdaptationMatrices build_adaptation_matrices(const DesiredModel& desired, const MatX& Q);

/// Embedding of the m-dimensional output error into the n_m-dimensional
/// transformed coordinates: [error; 0]. Isolated so the embedding
/// convention can be swapped in one place.
VecX output_error_embedding(const VecX& output_error, int order);

/// sigma_hat[i] = -Phi^{-1} e^{Lam Am Lam^-1 Ts} [y_hat - y; 0].
VecX adaptation_step(const AdaptationMatrices& mats, const VecX& y_hat, const VecX& y);

struct PredictorStep {
    VecX x_next;
    VecX y_next;
};

/// x_hat[i+1] = e^{Am Ts} x_hat[i] + Am^{-1}(e^{Am Ts} - I)(B_m u_d + sigma).
PredictorStep predictor_step(const AdaptationMatrices& mats, const DesiredModel& desired,
                             const VecX& x_hat, const VecX& u_d, const VecX& sigma);

/// Minimal realization {A_o, B_o, C_o} of O(s) = C(s) M^{-1}(s) C_m (sI - A_m)^{-1}
/// with cached ZOH discretization at T_s.
struct FilterModel {
    StateSpace O;
    MatX exp_Ao_Ts;
    MatX int_exp_Ao;
};

/// Diagonal first-order low-pass C(s) = bw/(s + bw) I: the minimal
/// structure satisfying the strictly-proper, stable, C(0) = I requirements.
StateSpace first_order_lowpass(double bandwidth, int channels = 2);

/// C_filter must be strictly proper, stable, with C(0) = I. The improper
/// M^{-1} factor is absorbed analytically (relative-degree-one inversion),
/// then the cascade is reduced to a minimal realization.
FilterModel build_filter(const DesiredModel& desired, const StateSpace& C_filter);

struct ControlStep {
    VecX u_d;       // held over [i Ts, (i+1) Ts)
    VecX x_u_next;
};

/// u_d[i] = K_g omega_c[i] - C_o x_u[i];
/// x_u[i+1] = e^{Ao Ts} x_u[i] + Ao^{-1}(e^{Ao Ts} - I) B_o e^{-Am Ts} sigma[i].
ControlStep control_step(const FilterModel& filter, const AdaptationMatrices& mats,
                         const DesiredModel& desired, const VecX& omega_c, const VecX& sigma,
                         const VecX& x_u);

/// Sample-clocked L1 augmentation: call step() once per T_s with the sampled
/// plant output and the current rate command; the returned u_d is held
/// between samples.
class L1Controller {
public:
    L1Controller(DesiredModel desired, MatX Q, StateSpace C_filter, bool adaptation_enabled = true);

    void initialize(const VecX& y0);  // x_hat[0] = pinv(C_m) y0, x_u[0] = 0
    VecX step(const VecX& omega_c, const VecX& y);

    const DesiredModel& desired() const { return desired_; }
    const AdaptationMatrices& matrices() const { return mats_; }
    const FilterModel& filter() const { return filter_; }
    double sample_time() const { return desired_.T_s; }
    bool adaptation_enabled() const { return adaptation_on_; }
    const VecX& sigma() const { return sigma_; }
    const VecX& predictor_state() const { return x_hat_; }
    VecX predicted_output() const { return desired_.C_m * x_hat_; }

private:
    DesiredModel desired_;
    AdaptationMatrices mats_;
    FilterModel filter_;
    bool adaptation_on_;
    VecX x_hat_, x_u_, sigma_;
    bool initialized_ = false;
};

}  // namespace subrom
