#include "subrom/hydro_model.hpp"

#include "subrom/errors.hpp"

#include <algorithm>
#include <cmath>

namespace subrom {

FlowState FlowState::from_velocity(const Vec3& uvw, double sail_top_depth) {
    FlowState f;
    f.u = uvw.x();
    f.v = uvw.y();
    f.w = uvw.z();
    f.U = uvw.norm();
    f.alpha = (f.u == 0.0 && f.w == 0.0) ? 0.0 : std::atan2(f.w, f.u);
    f.beta = (f.u == 0.0 && f.v == 0.0) ? 0.0 : std::atan2(f.v, f.u);
    f.depth = sail_top_depth;
    return f;
}

namespace {

double clamp_angle(double angle, double limit, EventLog* events, double time, const char* which) {
    if (std::abs(angle) > limit) {
        record_event(events, evc::angle_extrapolation,
                     std::string(which) + " clamped to calibrated range", time);
        return std::clamp(angle, -limit, limit);
    }
    return angle;
}

double checked_depth(double depth, double grid_min, EventLog* events, double time) {
    if (depth < grid_min) {
        record_event(events, evc::depth_below_table,
                     "depth below minimum tabulated sail-top depth; results unreliable", time);
        return grid_min;
    }
    return depth;  // above-range clamping (constant for deep water) is done by the table
}

}  // namespace

Vec6 hull_drift_loads(const FlowState& flow, const HullTable& tables, double L, double rho,
                      const UvwNormalization& norm, EventLog* events, double time) {
    const double alpha = clamp_angle(flow.alpha, tables.max_angle, events, time, "alpha");
    const double beta = clamp_angle(flow.beta, tables.max_angle, events, time, "beta");
    const double U2 = flow.U * flow.U;

    Vec6 loads = Vec6::Zero();
    for (int ch = 0; ch < 6; ++ch) {
        const auto& beta_table = tables.beta_tables[static_cast<std::size_t>(ch)];
        const auto& alpha_table = tables.alpha_tables[static_cast<std::size_t>(ch)];
        double coeff = 0.0;
        if (!beta_table.empty()) {
            const double depth = checked_depth(flow.depth, beta_table.axis2().front(), events, time);
            // Lateral symmetry closure: tables cover beta >= 0.
            const double b = std::abs(beta);
            const double sign = (beta < 0.0 && HullTable::channel_odd_in_beta(ch)) ? -1.0 : 1.0;
            coeff += sign * beta_table(flow.U, b, depth);
        }
        if (!alpha_table.empty()) {
            const double depth = checked_depth(flow.depth, alpha_table.axis2().front(), events, time);
            coeff += alpha_table(flow.U, alpha, depth);
        }
        if (ch == kX && !tables.base_resistance.empty()) {
            const double depth =
                checked_depth(flow.depth, tables.base_resistance.axis1().front(), events, time);
            coeff += tables.base_resistance(flow.U, depth);
        }
        loads(ch) = norm.factor(ch, rho, L) * coeff * U2;
    }
    return loads;
}

Vec6 motion_coupling_loads(const Vec6& s, const MotionDerivativeSet& c, double L, double rho) {
    const double u = s(0), v = s(1), w = s(2), p = s(3), q = s(4), r = s(5);
    const double L3 = rho * L * L * L / 2.0;
    const double L4 = L3 * L;
    const double L5 = L4 * L;
    const double vw = std::sqrt(v * v + w * w);

    Vec6 f;
    f(kX) = L3 * (c.X_vr * v * r + c.X_wq * w * q) +
            L4 * (c.X_qq * q * q + c.X_rr * r * r + c.X_rp * r * p);
    f(kY) = L3 * (c.Y_up * u * p + c.Y_ur * u * r + c.Y_vq * v * q + c.Y_wp * w * p +
                  c.Y_wr * w * r + c.Y_v_abs_r * sgn0(v) * vw * std::abs(r)) +
            L4 * (c.Y_abs_p_p * std::abs(p) * p + c.Y_pq * p * q + c.Y_pr * p * r);
    f(kZ) = L3 * (c.Z_vp * v * p + c.Z_vr * v * r + c.Z_uq * u * q +
                  c.Z_w_abs_q * sgn0(w) * vw * std::abs(q)) +
            L4 * (c.Z_pp * p * p + c.Z_rr * r * r + c.Z_pr * p * r);
    f(kK) = L4 * (c.K_up * u * p + c.K_ur * u * r + c.K_vq * v * q + c.K_wp * w * p +
                  c.K_wr * w * r) +
            L5 * (c.K_qr * q * r + c.K_pq * p * q + c.K_abs_p_p * std::abs(p) * p);
    f(kM) = L4 * (c.M_uq * u * q + c.M_vp * v * p + c.M_vr * v * r + c.M_absvw_q * q * vw) +
            L5 * (c.M_pp * p * p + c.M_rr * r * r + c.M_rp * r * p +
                  c.M_abs_q_q * std::abs(q) * q);
    f(kN) = L4 * (c.N_up * u * p + c.N_ur * u * r + c.N_vq * v * q + c.N_wp * w * p +
                  c.N_absvw_r * r * vw) +
            L5 * (c.N_pq * p * q + c.N_qr * q * r + c.N_abs_r_r * std::abs(r) * r);
    return f;
}

Mat6 added_mass_matrix(const MotionDerivativeSet& c, double L, double rho) {
    const double L3 = rho * L * L * L / 2.0;
    const double L4 = L3 * L;
    const double L5 = L4 * L;
    Mat6 A = Mat6::Zero();
    A(kX, 0) = L3 * c.X_udot;
    A(kY, 1) = L3 * c.Y_vdot;
    A(kY, 3) = L4 * c.Y_pdot;
    A(kY, 5) = L4 * c.Y_rdot;
    A(kZ, 2) = L3 * c.Z_wdot;
    A(kZ, 4) = L4 * c.Z_qdot;
    A(kK, 1) = L4 * c.K_vdot;
    A(kK, 3) = L5 * c.K_pdot;
    A(kK, 5) = L5 * c.K_rdot;
    A(kM, 2) = L4 * c.M_wdot;
    A(kM, 4) = L5 * c.M_qdot;
    A(kN, 1) = L4 * c.N_vdot;
    A(kN, 3) = L5 * c.N_pdot;
    A(kN, 5) = L5 * c.N_rdot;
    return A;
}

Vec6 control_surface_loads(const Vec5& deflections, double u, double depth,
                           const ControlSurfaceSet& tables, double L, double rho,
                           const UvwNormalization& norm, EventLog* events, double time) {
    Vec5 defl = deflections;
    for (int l = 0; l < 5; ++l) {
        if (std::abs(defl(l)) > tables.hard_stop) {
            record_event(events, evc::deflection_saturated,
                         "surface " + std::to_string(l + 1) + " beyond hard stop", time);
            defl(l) = std::clamp(defl(l), -tables.hard_stop, tables.hard_stop);
        }
    }
    const double u2 = u * u;
    Vec6 loads = Vec6::Zero();
    for (int ch = 0; ch < 6; ++ch) {
        double sum = 0.0;
        for (int l = 0; l < 5; ++l)
            sum += tables.coeffs[static_cast<std::size_t>(l)][static_cast<std::size_t>(ch)]
                       .evaluate(defl(l), u, depth);
        loads(ch) = norm.factor(ch, rho, L) * u2 * sum;
    }
    return loads;
}

void PropellerModel::validate() const {
    if (!(diameter > 0.0)) throw Error(errc::coeffs_schema, "propeller diameter must be positive");
    if (!(kt[0] > 0.0))
        throw Error(errc::coeffs_schema, "propeller bollard thrust coefficient must be positive");
}

PropellerLoads propeller_loads(double u, double n, const FlowState& flow,
                               const PropellerModel& prop, double rho, EventLog* events,
                               double time) {
    if (!(n > 0.0))
        throw Error(errc::sim_invalid_config, "propeller_loads requires n > 0");
    prop.validate();
    double J = u / (n * prop.diameter);
    if (J < 0.0) {
        record_event(events, evc::advance_ratio_clamped, "negative inflow, J clamped to 0", time);
        J = 0.0;
    } else if (J > prop.j_max) {
        record_event(events, evc::advance_ratio_clamped, "J beyond fitted validity interval", time);
        J = prop.j_max;
    }
    PropellerLoads out;
    out.advance_ratio = J;
    const double d4 = std::pow(prop.diameter, 4);
    out.thrust = prop.kt_at(J) * rho * n * n * d4;
    out.shaft_torque = prop.kq_at(J) * rho * n * n * d4 * prop.diameter;
    out.thrust_deduction =
        prop.thrust_deduction.empty() ? 0.0 : prop.thrust_deduction(flow.U, flow.depth);
    out.force(kX) = (1.0 - out.thrust_deduction) * out.thrust;
    return out;
}

HydrodynamicLoads total_hydrodynamic(const Vec6& s, const FlowState& flow,
                                     const Vec5& deflections, double n,
                                     const CoefficientSet& coeffs, double rho, EventLog* events,
                                     double time) {
    const double L = coeffs.reference_length;
    HydrodynamicLoads out;
    out.force = hull_drift_loads(flow, coeffs.hull, L, rho, coeffs.normalization, events, time);
    out.force += motion_coupling_loads(s, coeffs.motion, L, rho);
    out.force += control_surface_loads(deflections, flow.u, flow.depth, coeffs.control_surfaces, L,
                                       rho, coeffs.normalization, events, time);
    if (n > 0.0) {
        out.propeller = propeller_loads(flow.u, n, flow, coeffs.propeller, rho, events, time);
        out.force += out.propeller.force;
    }
    out.added_mass = added_mass_matrix(coeffs.motion, L, rho);
    return out;
}

}  // namespace subrom
