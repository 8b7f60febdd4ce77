#pragma once

#include "subrom/core.hpp"
#include "subrom/events.hpp"
#include "subrom/path_geometry.hpp"

namespace subrom {

/// Outer-loop path-following parameters. The inequality constraints on
/// (c, c1, lambda) are checked by audit_pf_config against a concrete path
/// and nominal speed using conservative bounds.
struct PFConfig {
    double k_gamma = 1.0;
    double k_R = 1.0;
    double d = 20.0;              // aim-point approach distance, m
    double c = 0.5;               // domain-of-attraction level
    double c1 = 20.0;             // position-error scale, m
    double lambda = 0.01;
    double delta_lambda = 0.5;
    double v_min = 1.0;           // m/s
    double omega_c_max = 0.5;     // rad/s
    double omega_T_max = 0.05;    // rad/s allowance for the transport frame

    void validate() const;  // positivity and range checks
};

struct PFAuditReport {
    double c_bound = 0.0;          // right-hand side of the c inequality
    double lambda_bound = 0.0;     // right-hand side of the lambda inequality
    double gamma_rate_bound = 0.0;
    double omega_dt_sup = 0.0;
    bool ok = false;
};

/// Conservative feasibility audit of the parameter inequalities for a given
/// path and nominal speed. Throws Error(guidance/infeasible-parameters) when
/// a bound is violated.
PFAuditReport audit_pf_config(const PFConfig& config, const FramedPath& path, double v_nominal);

/// p_T = (R_T^I)^T (p - p_d(gamma)).
Vec3 position_error(const Vec3& p, const FramedPath& path, double gamma);

struct AttitudeError {
    Mat3 R_tilde;  // relative rotation between the D and W frames
    double Psi;    // projected trace error, >= 0
    Vec2 e_R;      // projected attitude error
};

/// R_tilde = (R_D^I)^T R_W^I with the projected error function
/// Psi = 1/2 tr[(I - Pi^T Pi)(I - R_tilde)] and
/// e_R = 1/2 Pi ((I - Pi^T Pi) R_tilde - R_tilde^T (I - Pi^T Pi))^vee,
/// Pi = [[0,1,0],[0,0,1]]. The operand order is fixed by requiring the
/// error dynamics Psi_dot = e_R^T ([q;r] - Pi R_tilde^T (R_T^D w_T + w_DT^D)),
/// which makes the -2 k_R e_R command stabilizing.
AttitudeError attitude_error(const Mat3& R_W_I, const Mat3& R_D_I);

/// Virtual-time rate: gamma_dot = [v w1 + k_gamma (p - p_d)]^T t1 / ||p_d'||.
double gamma_rate(double v, const Vec3& w1, const Vec3& p, const FramedPath& path, double gamma,
                  double k_gamma);

/// Pitch/yaw-rate commands
/// omega_c = Pi R_tilde^T (R_T^D omega_T + omega_DT^D) - 2 k_R e_R,
/// saturated in norm at omega_c_max with direction preserved.
Vec2 rate_commands(const Mat3& R_tilde, const Vec3& omega_T_rad_s, const Vec3& omega_DT_D,
                   const Mat3& R_T_D, double k_R, const Vec2& e_R, double omega_c_max,
                   EventLog* events = nullptr, double time = 0.0);

/// Domain of attraction: Psi + ||p_T||^2 / c1^2 <= c^2 (boundary inclusive).
bool domain_check(const Vec3& p_T, double Psi, double c, double c1);

struct DesiredFrame {
    Mat3 R_D_I;
    Vec3 omega_DT_D;  // rad/s, finite-differenced against the previous step
    Mat3 R_T_D;
};

/// Aim-point desired frame: D's x-axis points from the vehicle toward
/// p_d(gamma) + d t1(gamma); the remaining axes complete the triad from the
/// transport frame's t2. omega_DT^D is finite-differenced using the previous
/// call's frame held in DesiredFrameState.
struct DesiredFrameState {
    Mat3 prev_R_D_T = Mat3::Identity();
    bool primed = false;
};

DesiredFrame desired_frame(const Vec3& p, const FramedPath& path, double gamma, double d,
                           DesiredFrameState& state, double dt, EventLog* events = nullptr,
                           double time = 0.0);

}  // namespace subrom
