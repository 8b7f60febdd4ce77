#pragma once

// Kinematic closed-loop runner for the path-following outer loop: a point
// vehicle moving at constant speed whose pitch/yaw rates track the commands
// exactly (perfect inner loop). Shared by the guidance unit tests and the
// acceptance suite.

#include "subrom/guidance_pf.hpp"
#include "subrom/path_geometry.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <vector>

namespace subrom::testsupport {

struct PFRun {
    std::vector<double> time;
    std::vector<double> composite_error;  // Psi + ||p_T||^2 / c1^2
    std::vector<double> gamma;
    bool domain_ok_initial = false;
};

struct PFDisturbance {
    Vec2 rate_offset = Vec2::Zero();  // added to the commanded (q, r)
};

inline PFRun run_pf_kinematic(const FramedPath& path, const PFConfig& cfg, Vec3 p, Mat3 R_W,
                              double v, double dt, double duration,
                              const PFDisturbance& disturbance = {}) {
    PFRun out;
    double gamma = 0.0;
    DesiredFrameState dstate;
    const int steps = static_cast<int>(duration / dt);
    out.time.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const TransportFrame tf = path.frame(gamma);
        const double gdot = gamma_rate(v, R_W.col(0), p, path, gamma, cfg.k_gamma);
        const DesiredFrame df = desired_frame(p, path, gamma, cfg.d, dstate, dt);
        const AttitudeError ae = attitude_error(R_W, df.R_D_I);
        const Vec3 p_T = position_error(p, path, gamma);
        const Vec2 wc = rate_commands(ae.R_tilde, tf.angular_velocity * gdot, df.omega_DT_D,
                                      df.R_T_D, cfg.k_R, ae.e_R, cfg.omega_c_max);

        out.time.push_back(t);
        out.composite_error.push_back(ae.Psi + p_T.squaredNorm() / (cfg.c1 * cfg.c1));
        out.gamma.push_back(gamma);
        if (k == 0) out.domain_ok_initial = domain_check(p_T, ae.Psi, cfg.c, cfg.c1);

        // Perfect inner loop: body rates equal the commands (roll untouched).
        const Vec3 omega(0.0, wc(0) + disturbance.rate_offset(0),
                         wc(1) + disturbance.rate_offset(1));
        p += v * R_W.col(0) * dt;
        R_W = R_W * (skew(omega) * dt).exp();
        gamma = std::min(std::max(gamma + gdot * dt, 0.0), path.final_time());
    }
    return out;
}

}  // namespace subrom::testsupport
