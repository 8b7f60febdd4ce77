#pragma once

#include "subrom/core.hpp"
#include "subrom/events.hpp"
#include "subrom/tables.hpp"

#include <array>
#include <string>
#include <vector>

namespace subrom {

enum Channel { kX = 0, kY = 1, kZ = 2, kK = 3, kM = 4, kN = 5 };

/// Instantaneous flow condition used to query the coefficient tables.
/// alpha = atan2(w, u) is the vertical incidence angle, beta = atan2(v, u)
/// the horizontal drift angle; depth is sail-top depth D0.
struct FlowState {
    double U = 0.0;
    double u = 0.0, v = 0.0, w = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double depth = 0.0;

    static FlowState from_velocity(const Vec3& uvw, double sail_top_depth);
};

/// Per-channel normalization of the uvw and control-surface brackets:
/// N_i = rho * L^length_exponent[i] / divisor[i]. Defaults are rho L^2/2
/// for forces and rho L^2/3 for moments; the moment form is dimensionally
/// odd, so the exponent and divisor stay configurable per channel.
struct UvwNormalization {
    std::array<int, 6> length_exponent{2, 2, 2, 2, 2, 2};
    std::array<double, 6> divisor{2.0, 2.0, 2.0, 3.0, 3.0, 3.0};

    double factor(int channel, double rho, double L) const {
        double Ln = 1.0;
        for (int k = 0; k < length_exponent[static_cast<std::size_t>(channel)]; ++k) Ln *= L;
        return rho * Ln / divisor[static_cast<std::size_t>(channel)];
    }
};

/// Hull drift-load tables. Each channel stores the difference from the
/// straight-ahead, even-keel value on (U, angle, D0) grids: one sweep in beta
/// at alpha = 0, one in alpha at beta = 0, superposed at query time. The beta
/// grid covers beta >= 0; negative drift is closed by lateral symmetry
/// (Y, K, N odd in beta; X, Z, M even). base_resistance holds the
/// straight-ahead resistance coefficient R0(U, D0) for the X channel.
struct HullTable {
    std::array<Grid3, 6> beta_tables;
    std::array<Grid3, 6> alpha_tables;
    Grid2 base_resistance;
    double max_angle = deg2rad(12.0);  // calibrated sweep limit

    static constexpr bool channel_odd_in_beta(int channel) {
        return channel == kY || channel == kK || channel == kN;
    }
};

/// Scalar motion derivatives: every non-table, non-deflection coefficient of
/// the six load equations. Anything not supplied by the coefficient file
/// stays zero; the loader reports which ones were defaulted.
struct MotionDerivativeSet {
    // X equation
    double X_udot = 0, X_vr = 0, X_wq = 0, X_qq = 0, X_rr = 0, X_rp = 0;
    // Y equation
    double Y_vdot = 0, Y_up = 0, Y_ur = 0, Y_vq = 0, Y_wp = 0, Y_wr = 0, Y_v_abs_r = 0;
    double Y_rdot = 0, Y_pdot = 0, Y_abs_p_p = 0, Y_pq = 0, Y_pr = 0;
    // Z equation
    double Z_wdot = 0, Z_vp = 0, Z_vr = 0, Z_uq = 0, Z_w_abs_q = 0;
    double Z_qdot = 0, Z_pp = 0, Z_rr = 0, Z_pr = 0;
    // K equation
    double K_vdot = 0, K_up = 0, K_ur = 0, K_vq = 0, K_wp = 0, K_wr = 0;
    double K_pdot = 0, K_rdot = 0, K_qr = 0, K_pq = 0, K_abs_p_p = 0;
    // M equation
    double M_wdot = 0, M_uq = 0, M_vp = 0, M_vr = 0, M_absvw_q = 0;
    double M_qdot = 0, M_pp = 0, M_rr = 0, M_rp = 0, M_abs_q_q = 0;
    // N equation
    double N_vdot = 0, N_up = 0, N_ur = 0, N_vq = 0, N_wp = 0, N_absvw_r = 0;
    double N_rdot = 0, N_pdot = 0, N_pq = 0, N_qr = 0, N_abs_r_r = 0;
};

/// Per-surface deflection coefficient: either a lookup table over
/// (deflection, U, D0) absorbing stall behavior, or the strict quadratic
/// form C = coeff * delta^2 from the general load equation.
struct DeflectionCoeff {
    enum class Kind { Zero, Table, Quadratic };
    Kind kind = Kind::Zero;
    Grid3 table;          // axes: deflection (rad), U (m/s), D0 (m)
    double quadratic = 0.0;

    double evaluate(double deflection, double u, double depth) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Table: return table(deflection, u, depth);
            case Kind::Quadratic: return quadratic * deflection * deflection;
        }
        return 0.0;
    }
};

/// All five control surfaces (four X-configured stern planes + sail plane),
/// six channels each.
struct ControlSurfaceSet {
    std::array<std::array<DeflectionCoeff, 6>, 5> coeffs;  // [surface][channel]
    double hard_stop = deg2rad(30.0);
    double max_tabulated = deg2rad(30.0);
};

/// Open-water propeller model: KT/KQ quadratics in the advance coefficient J
/// plus a thrust-deduction table t(U, D0).
struct PropellerModel {
    double diameter = 0.0;                      // m
    std::array<double, 3> kt{0, 0, 0};          // KT(J) = kt0 + kt1 J + kt2 J^2
    std::array<double, 3> kq{0, 0, 0};
    Grid2 thrust_deduction;                     // t(U, D0)
    double j_max = 1.2;                         // fitted validity limit

    double kt_at(double J) const { return kt[0] + kt[1] * J + kt[2] * J * J; }
    double kq_at(double J) const { return kq[0] + kq[1] * J + kq[2] * J * J; }
    void validate() const;
};

/// Everything Eqs-of-motion evaluation needs, immutable after load.
struct CoefficientSet {
    std::string provenance;
    double reference_length = 0.0;   // L, m
    double sail_top_above_origin = 0.0;  // D0 = z_origin - this offset
    UvwNormalization normalization;
    HullTable hull;
    MotionDerivativeSet motion;
    ControlSurfaceSet control_surfaces;
    PropellerModel propeller;
    std::vector<std::string> defaulted_motion_coefficients;
};

/// Hull drift loads from the tabulated coefficients:
/// channel_i = N_i * [R0 (X only) + dT_beta + dT_alpha] * U^2.
Vec6 hull_drift_loads(const FlowState& flow, const HullTable& tables, double L, double rho,
                      const UvwNormalization& norm = {}, EventLog* events = nullptr,
                      double time = 0.0);

/// Velocity-product coupling terms (everything except the acceleration
/// terms, which added_mass_matrix reports).
Vec6 motion_coupling_loads(const Vec6& s, const MotionDerivativeSet& coeffs, double L, double rho);

/// Constant matrix A with the acceleration-proportional hydrodynamic loads:
/// the s_dot-dependent part of the load vector equals A * s_dot.
Mat6 added_mass_matrix(const MotionDerivativeSet& coeffs, double L, double rho);

/// Control-surface loads: channel_i = N_i * u^2 * sum_l C_il(delta_l, u, D0).
Vec6 control_surface_loads(const Vec5& deflections, double u, double depth,
                           const ControlSurfaceSet& tables, double L, double rho,
                           const UvwNormalization& norm = {}, EventLog* events = nullptr,
                           double time = 0.0);

struct PropellerLoads {
    Vec6 force = Vec6::Zero();
    double advance_ratio = 0.0;
    double thrust = 0.0;            // N, before thrust deduction
    double shaft_torque = 0.0;      // N m, diagnostic
    double thrust_deduction = 0.0;
};

/// Propeller thrust with thrust deduction; n in rev/s (must be positive).
PropellerLoads propeller_loads(double u, double n, const FlowState& flow,
                               const PropellerModel& prop, double rho,
                               EventLog* events = nullptr, double time = 0.0);

struct HydrodynamicLoads {
    Vec6 force = Vec6::Zero();
    Mat6 added_mass = Mat6::Zero();
    PropellerLoads propeller;
};

/// Sum of hull drift, motion coupling, control surface and propeller loads,
/// plus the constant added-mass matrix. Pure composition of the four parts.
HydrodynamicLoads total_hydrodynamic(const Vec6& s, const FlowState& flow,
                                     const Vec5& deflections, double n,
                                     const CoefficientSet& coeffs, double rho,
                                     EventLog* events = nullptr, double time = 0.0);

}  // namespace subrom
