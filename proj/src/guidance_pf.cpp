#include "subrom/guidance_pf.hpp"

#include "subrom/errors.hpp"

#include <algorithm>
#include <cmath>

namespace subrom {

void PFConfig::validate() const {
    if (!(k_gamma > 0.0) || !(k_R > 0.0))
        throw Error(errc::guidance_infeasible, "path-following gains must be positive");
    if (!(d > 0.0) || !(c1 > 0.0) || !(c > 0.0))
        throw Error(errc::guidance_infeasible, "c, c1 and d must be positive");
    if (!(delta_lambda > 0.0) || !(delta_lambda < 1.0))
        throw Error(errc::guidance_infeasible, "delta_lambda must lie in (0, 1)");
    if (!(v_min > 0.0) || !(omega_c_max > 0.0))
        throw Error(errc::guidance_infeasible, "v_min and omega_c_max must be positive");
}

PFAuditReport audit_pf_config(const PFConfig& cfg, const FramedPath& path, double v_nominal) {
    cfg.validate();
    PFAuditReport rep;

    // Worst-case position error inside the domain of attraction.
    const double e_max = cfg.c * cfg.c1;
    rep.gamma_rate_bound = (v_nominal + cfg.k_gamma * e_max) / path.min_path_speed();

    // Conservative bound on the desired-frame rate: transverse relative
    // motion between vehicle and aim point over the aim reach, plus the
    // transport-frame feed-through. Inside Omega_PF the heading error obeys
    // Psi <= c^2, so the transverse speed is at most ~2 v c plus the
    // k_gamma pull on the worst-case offset.
    const double transverse_speed = 2.0 * v_nominal * cfg.c + cfg.k_gamma * e_max;
    const double aim_reach = std::max(cfg.d - e_max, 0.1 * cfg.d);
    rep.omega_dt_sup = transverse_speed / aim_reach + cfg.omega_T_max * rep.gamma_rate_bound;

    rep.c_bound = std::min(1.0 / std::sqrt(2.0),
                           (cfg.omega_c_max - cfg.omega_T_max * rep.gamma_rate_bound -
                            rep.omega_dt_sup) /
                               (2.0 * cfg.k_R));
    rep.lambda_bound =
        cfg.v_min / (cfg.c1 * cfg.c1 * std::sqrt(cfg.d * cfg.d + cfg.c * cfg.c * cfg.c1 * cfg.c1));

    rep.ok = cfg.c < rep.c_bound && cfg.lambda < rep.lambda_bound;
    if (!rep.ok)
        throw Error(errc::guidance_infeasible,
                    "path-following parameters violate the feasibility inequalities (c < " +
                        std::to_string(rep.c_bound) + ", lambda < " +
                        std::to_string(rep.lambda_bound) + ")");
    return rep;
}

Vec3 position_error(const Vec3& p, const FramedPath& path, double gamma) {
    const PathSample s = path.eval(gamma);
    return path.frame(gamma).rotation.transpose() * (p - s.position);
}

namespace {
void require_orthonormal(const Mat3& R, const char* name) {
    if ((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6)
        throw Error(errc::guidance_not_orthonormal, std::string(name) + " is not orthonormal");
}
}  // namespace

AttitudeError attitude_error(const Mat3& R_W_I, const Mat3& R_D_I) {
    require_orthonormal(R_W_I, "R_W^I");
    require_orthonormal(R_D_I, "R_D^I");
    AttitudeError e;
    // Orientation of the flow frame in D coordinates; this ordering is the
    // one that makes the error dynamics
    // Psi_dot = e_R^T ([q; r] - Pi R~^T (R_T^D w_T + w_DT^D)) hold, so the
    // -2 k e_R feedback is stabilizing.
    e.R_tilde = R_D_I.transpose() * R_W_I;
    e.Psi = 0.5 * (1.0 - e.R_tilde(0, 0));
    // vee of (E R - R^T E) with E = diag(1,0,0) is (0, R(0,2), -R(0,1)).
    e.e_R = 0.5 * Vec2(e.R_tilde(0, 2), -e.R_tilde(0, 1));
    return e;
}

double gamma_rate(double v, const Vec3& w1, const Vec3& p, const FramedPath& path, double gamma,
                  double k_gamma) {
    const PathSample s = path.eval(gamma);
    const double speed = s.first_derivative.norm();
    if (speed <= kMinPathSpeed) throw Error(errc::path_degenerate, "path speed below threshold");
    const Vec3 t1 = s.first_derivative / speed;
    return (v * w1 + k_gamma * (p - s.position)).dot(t1) / speed;
}

Vec2 rate_commands(const Mat3& R_tilde, const Vec3& omega_T_rad_s, const Vec3& omega_DT_D,
                   const Mat3& R_T_D, double k_R, const Vec2& e_R, double omega_c_max,
                   EventLog* events, double time) {
    Eigen::Matrix<double, 2, 3> Pi;
    Pi << 0, 1, 0,
          0, 0, 1;
    Vec2 omega_c =
        Pi * (R_tilde.transpose() * (R_T_D * omega_T_rad_s + omega_DT_D)) - 2.0 * k_R * e_R;
    const double n = omega_c.norm();
    if (n > omega_c_max) {
        record_event(events, evc::rate_command_saturated, "", time);
        omega_c *= omega_c_max / n;
    }
    return omega_c;
}

bool domain_check(const Vec3& p_T, double Psi, double c, double c1) {
    return Psi + p_T.squaredNorm() / (c1 * c1) <= c * c;
}

DesiredFrame desired_frame(const Vec3& p, const FramedPath& path, double gamma, double d,
                           DesiredFrameState& state, double dt, EventLog* events, double time) {
    const PathSample s = path.eval(gamma);
    const TransportFrame tf = path.frame(gamma);
    const Vec3 t1 = tf.rotation.col(0);

    const Vec3 aim = s.position + d * t1;
    Vec3 dir = aim - p;
    if (dir.norm() < 1e-9) {
        record_event(events, evc::aim_point_fallback, "aim point coincides with the vehicle",
                     time);
        dir = t1;
    }
    const Vec3 x_d = dir.normalized();

    Vec3 y_raw = tf.rotation.col(1) - tf.rotation.col(1).dot(x_d) * x_d;
    if (y_raw.norm() < 1e-9) y_raw = tf.rotation.col(2) - tf.rotation.col(2).dot(x_d) * x_d;
    const Vec3 y_d = y_raw.normalized();

    DesiredFrame out;
    out.R_D_I.col(0) = x_d;
    out.R_D_I.col(1) = y_d;
    out.R_D_I.col(2) = x_d.cross(y_d);
    out.R_T_D = out.R_D_I.transpose() * tf.rotation;

    const Mat3 R_D_T = out.R_T_D.transpose();
    if (state.primed && dt > 0.0) {
        const Mat3 rel = state.prev_R_D_T.transpose() * R_D_T;
        const Eigen::AngleAxisd aa(rel);
        out.omega_DT_D = aa.angle() / dt * aa.axis();
    } else {
        out.omega_DT_D = Vec3::Zero();
    }
    state.prev_R_D_T = R_D_T;
    state.primed = true;
    return out;
}

}  // namespace subrom
