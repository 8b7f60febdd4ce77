#include "subrom/synthetic_assets.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace subrom::synthetic {

namespace {

const std::vector<double> kSpeeds = {3.0 * kKnotsToMs, 6.0 * kKnotsToMs, 10.0 * kKnotsToMs};
const std::vector<double> kDepths = {2.5, 4.0, 7.0, 25.0};

// Near-surface amplification factor: 1 at D0 = 2.5 m, 0 at D0 = 25 m.
double depth_factor(double d0) {
    if (d0 <= 2.5) return 1.0;
    if (d0 <= 4.0) return 1.0 + (0.6 - 1.0) * (d0 - 2.5) / 1.5;
    if (d0 <= 7.0) return 0.6 + (0.25 - 0.6) * (d0 - 4.0) / 3.0;
    if (d0 <= 25.0) return 0.25 * (25.0 - d0) / 18.0;
    return 0.0;
}

// Saturating normal-force shape: unit slope at zero, stalls beyond ~12 deg.
double fin_shape(double deflection) {
    const double stall = deg2rad(12.0);
    const double mag = stall * std::tanh(std::abs(deflection) / stall);
    return deflection < 0.0 ? -mag : mag;
}

Grid3 fill3(const std::vector<double>& a0, const std::vector<double>& a1,
            const std::vector<double>& a2, const std::function<double(double, double, double)>& f) {
    std::vector<double> values;
    values.reserve(a0.size() * a1.size() * a2.size());
    for (double x : a0)
        for (double y : a1)
            for (double z : a2) values.push_back(f(x, y, z));
    return Grid3({a0}, {a1}, {a2}, values);
}

Grid2 fill2(const std::vector<double>& a0, const std::vector<double>& a1,
            const std::function<double(double, double)>& f) {
    std::vector<double> values;
    values.reserve(a0.size() * a1.size());
    for (double x : a0)
        for (double y : a1) values.push_back(f(x, y));
    return Grid2({a0}, {a1}, values);
}

HullTable make_hull_tables() {
    std::vector<double> betas, alphas;
    for (int d = 0; d <= 12; d += 4) betas.push_back(deg2rad(d));
    for (int d = -12; d <= 12; d += 4) alphas.push_back(deg2rad(d));

    HullTable hull;
    // Forces on rho L^2/2 normalization, moments on the printed rho L^2/3.
    // Odd channels are exactly odd in the angle so the lateral symmetry
    // closure reproduces them; even channels are quadratic in the angle.
    auto zero3 = Grid3::zero();
    hull.beta_tables[kX] = fill3(kSpeeds, betas, kDepths, [](double, double b, double d) {
        return -0.010 * b * b * (1.0 + 0.2 * depth_factor(d));
    });
    hull.beta_tables[kY] = fill3(kSpeeds, betas, kDepths, [](double, double b, double d) {
        return -0.035 * b * (1.0 + 0.33 * depth_factor(d));
    });
    hull.beta_tables[kZ] = fill3(kSpeeds, betas, kDepths, [](double, double b, double d) {
        return 0.004 * b * b * (1.0 + 0.1 * depth_factor(d));
    });
    hull.beta_tables[kK] = fill3(kSpeeds, betas, kDepths, [](double, double b, double d) {
        return -0.10 * b * (1.0 + 0.2 * depth_factor(d));
    });
    hull.beta_tables[kM] = fill3(kSpeeds, betas, kDepths, [](double, double b, double) {
        return -0.05 * b * b;
    });
    hull.beta_tables[kN] = fill3(kSpeeds, betas, kDepths, [](double, double b, double d) {
        return 0.30 * b * (1.0 + 0.15 * depth_factor(d));
    });

    hull.alpha_tables[kX] = fill3(kSpeeds, alphas, kDepths, [](double U, double a, double) {
        // Sail asymmetry shows up as a small odd-in-alpha resistance term
        // with a mild speed trend.
        return -0.010 * a * a + 0.004 * a * a * a * (1.0 + 0.1 * (U / 5.144 - 1.0));
    });
    hull.alpha_tables[kY] = zero3;
    hull.alpha_tables[kZ] = fill3(kSpeeds, alphas, kDepths, [](double, double a, double d) {
        return -0.035 * a * (1.0 + 0.2 * depth_factor(d)) - 0.002 * a * a;
    });
    hull.alpha_tables[kK] = zero3;
    hull.alpha_tables[kM] = fill3(kSpeeds, alphas, kDepths, [](double, double a, double d) {
        return 0.15 * a * (1.0 + 0.1 * depth_factor(d)) - 0.004 * a * a;
    });
    hull.alpha_tables[kN] = zero3;

    hull.base_resistance = fill2(kSpeeds, kDepths, [](double, double d) {
        return -8.6e-4 * (1.0 + 0.10 * depth_factor(d));
    });
    return hull;
}

ControlSurfaceSet make_control_surfaces() {
    std::vector<double> deflections;
    for (int d = -30; d <= 30; d += 10) deflections.push_back(deg2rad(d));

    // X-plane allocation sign patterns: delta_l = sH(l) dH + sV(l) dV,
    // sail plane delta_5 = -dV.
    const double sV[5] = {-1, -1, 1, 1, -1};
    const double sH[5] = {-1, 1, 1, -1, 0};
    const double stern_arm = -30.0;  // m aft of origin
    const double sail_arm = 8.0;     // m forward of origin
    const double slope = 0.004;      // per-plane force coefficient slope, 1/rad

    ControlSurfaceSet set;
    for (int l = 0; l < 5; ++l) {
        const bool sail = (l == 4);
        const double zeta = sail ? -slope : -slope * sV[l];
        // Lateral effectiveness is stronger than vertical: the rudder-like
        // projection of all four planes plus hull interaction.
        const double ypsilon = sail ? 0.0 : -2.5 * slope * sH[l];
        const double arm = sail ? sail_arm : stern_arm;
        auto& surf = set.coeffs[static_cast<std::size_t>(l)];
        auto depth_gain = [](double d) { return 1.0 + 0.1 * depth_factor(d); };

        surf[kX].kind = DeflectionCoeff::Kind::Table;
        surf[kX].table = fill3(deflections, kSpeeds, kDepths, [&](double del, double, double d) {
            return -0.002 * del * del * depth_gain(d);
        });
        surf[kY].kind = DeflectionCoeff::Kind::Table;
        surf[kY].table = fill3(deflections, kSpeeds, kDepths, [&](double del, double, double d) {
            return ypsilon * fin_shape(del) * depth_gain(d);
        });
        surf[kZ].kind = DeflectionCoeff::Kind::Table;
        surf[kZ].table = fill3(deflections, kSpeeds, kDepths, [&](double del, double, double d) {
            return zeta * fin_shape(del) * depth_gain(d);
        });
        surf[kK].kind = DeflectionCoeff::Kind::Zero;
        surf[kM].kind = DeflectionCoeff::Kind::Table;
        surf[kM].table = fill3(deflections, kSpeeds, kDepths, [&](double del, double, double d) {
            return -1.5 * arm * zeta * fin_shape(del) * depth_gain(d);
        });
        surf[kN].kind = DeflectionCoeff::Kind::Table;
        surf[kN].table = fill3(deflections, kSpeeds, kDepths, [&](double del, double, double d) {
            return 1.5 * stern_arm * ypsilon * fin_shape(del) * depth_gain(d);
        });
    }
    return set;
}

PropellerModel make_propeller() {
    PropellerModel prop;
    prop.diameter = 3.5;
    prop.kt = {0.45, -0.38, -0.04};
    prop.kq = {0.068, -0.05, -0.008};
    prop.j_max = 1.2;
    // Thrust deduction rises toward the surface up to D0 = 4 m, then dips at
    // the shallowest depth, most at high speed.
    prop.thrust_deduction = fill2(kSpeeds, kDepths, [](double U, double d) {
        const double base = 0.120 + 0.028 * depth_factor(d);
        double dip = 0.0;
        if (d < 4.0) dip = (4.0 - d) / 1.5 * 0.012 * (U / 5.144);
        return base - dip;
    });
    return prop;
}

MotionDerivativeSet make_motion_derivatives() {
    MotionDerivativeSet c;
    // Added mass
    c.X_udot = -1.25e-3;
    c.Y_vdot = -2.5e-2;
    c.Z_wdot = -2.5e-2;
    c.K_pdot = -6.0e-6;
    c.M_qdot = -1.42e-3;
    c.N_rdot = -1.40e-3;
    c.Y_rdot = -2.0e-4;
    c.Z_qdot = -2.0e-4;
    c.M_wdot = -2.0e-4;
    c.N_vdot = -2.0e-4;
    // Rotary damping and coupling
    c.M_uq = -1.0e-2;
    c.N_ur = -1.2e-2;
    c.Y_ur = 4.0e-3;
    c.Z_uq = -4.0e-3;
    c.K_up = -5.0e-5;
    c.K_ur = -1.0e-3;
    c.M_abs_q_q = -2.0e-2;
    c.N_abs_r_r = -2.0e-2;
    c.K_abs_p_p = -2.0e-4;
    c.X_qq = -2.0e-3;
    c.X_rr = -2.0e-3;
    return c;
}

}  // namespace

CoefficientSet bb2_coefficients() {
    CoefficientSet set;
    set.provenance = "SYNTHETIC";
    set.reference_length = 70.2;
    set.sail_top_above_origin = 11.4;
    set.hull = make_hull_tables();
    set.motion = make_motion_derivatives();
    set.control_surfaces = make_control_surfaces();
    set.propeller = make_propeller();
    return set;
}

MassProperties bb2_mass_properties() {
    const double mass = 4.44e6;  // kg, 4440 t displacement
    const double wb = mass * kGravity;
    return MassProperties::from_particulars(mass, Vec3(2.79, 0.0, 0.0443), Vec3(2.79, 0.0, 0.0),
                                            Vec3(3.433, 17.6, 17.522), wb, wb);
}

BernsteinPath canyon_path() {
    BernsteinPath path;
    path.control_points = {Vec3(0.0, 0.0, 60.0),     Vec3(450.0, 40.0, 72.0),
                           Vec3(900.0, 230.0, 88.0),  Vec3(1250.0, 520.0, 100.0),
                           Vec3(1450.0, 900.0, 112.0), Vec3(1500.0, 1320.0, 120.0)};
    path.final_time = 500.0;
    return path;
}

TerrainGrid canyon_terrain() {
    // Floor deepens along the valley; roughly path depth + 50 m.
    std::vector<double> xs, ys, depth;
    for (int i = 0; i <= 10; ++i) xs.push_back(-200.0 + 140.0 * i);
    for (int j = 0; j <= 10; ++j) ys.push_back(-200.0 + 170.0 * j);
    for (double x : xs)
        for (double y : ys) {
            const double along = std::clamp((x + y) / 1900.0, 0.0, 1.0);
            depth.push_back(110.0 + 60.0 * along);
        }
    TerrainGrid grid;
    grid.floor_depth = Grid2({xs}, {ys}, depth);
    grid.min_clearance = 10.0;
    return grid;
}

CoefficientSet dissipative_coefficients() {
    CoefficientSet set = bb2_coefficients();
    MotionDerivativeSet& c = set.motion;
    // Keep only terms whose power s_i * F_i is non-positive for u > 0, plus
    // the added-mass diagonals; drop sign-indefinite cross couplings and the
    // destabilizing moment tables.
    MotionDerivativeSet d;
    d.X_udot = c.X_udot;
    d.Y_vdot = c.Y_vdot;
    d.Z_wdot = c.Z_wdot;
    d.K_pdot = c.K_pdot;
    d.M_qdot = c.M_qdot;
    d.N_rdot = c.N_rdot;
    d.M_uq = c.M_uq;
    d.N_ur = c.N_ur;
    d.K_up = c.K_up;
    d.M_abs_q_q = c.M_abs_q_q;
    d.N_abs_r_r = c.N_abs_r_r;
    d.K_abs_p_p = c.K_abs_p_p;
    set.motion = d;
    auto zero3 = Grid3::zero();
    set.hull.beta_tables[kK] = zero3;
    set.hull.beta_tables[kM] = zero3;
    set.hull.beta_tables[kN] = zero3;
    set.hull.alpha_tables[kM] = zero3;
    set.hull.alpha_tables[kX] =
        fill3(kSpeeds, {deg2rad(-12), 0.0, deg2rad(12)}, kDepths,
              [](double, double a, double) { return -0.010 * a * a; });
    return set;
}

CoefficientSet smooth_coefficients() {
    CoefficientSet set = bb2_coefficients();
    MotionDerivativeSet& c = set.motion;
    c.M_abs_q_q = 0.0;
    c.N_abs_r_r = 0.0;
    c.K_abs_p_p = 0.0;
    c.Y_v_abs_r = 0.0;
    c.Z_w_abs_q = 0.0;
    c.M_uq *= 1.5;
    c.N_ur *= 1.5;
    c.K_up = -2.0e-4;
    return set;
}

}  // namespace subrom::synthetic
