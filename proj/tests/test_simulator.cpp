#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subrom/errors.hpp"
#include "subrom/mesh_primitives.hpp"
#include "subrom/simulator.hpp"
#include "subrom/synthetic_assets.hpp"

using namespace subrom;

namespace {

VehicleModel stock_model() {
    VehicleModel m;
    m.mass = synthetic::bb2_mass_properties();
    m.coeffs = synthetic::bb2_coefficients();
    return m;
}

FollowConfig sample_follow_path() {
    FollowConfig fc;
    fc.path.control_points = {Vec3(0, 0, 50), Vec3(700, 0, 55), Vec3(1300, 250, 60),
                              Vec3(1900, 300, 55)};
    fc.path.final_time = 500.0;
    return fc;
}

}  // namespace

TEST_CASE("derivative: neutral trim at rest is an equilibrium") {
    VehicleModel model = stock_model();
    model.mass.W = model.mass.B = 1000.0;
    model.mass.cb = model.mass.cg;
    SimConfig cfg;
    PlantDynamics plant(model, cfg);
    VehicleState st;
    st.position.z() = 50.0;
    const Derivative d = plant.evaluate(st, Vec5::Zero(), 0.0, 0.0);
    CHECK(d.s_dot.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.position_rate.norm() == 0.0);

    // Zero dynamics: one RK4 step leaves the state untouched.
    const VehicleState next = plant.step_rk4(st, Vec5::Zero(), 0.0, 0.0, 0.05);
    CHECK((next.position - st.position).norm() == 0.0);
    CHECK((next.velocity - st.velocity).norm() == 0.0);
}

TEST_CASE("derivative: heave acceleration from net weight") {
    VehicleModel model = stock_model();
    model.mass.cg = Vec3::Zero();
    model.mass.cb = Vec3::Zero();
    model.mass.W = model.mass.B + 5.0e4;
    // Remove the heave-pitch added-mass cross terms so the scalar reduction
    // of the linear solve is exact.
    model.coeffs.motion.Z_qdot = 0.0;
    model.coeffs.motion.M_wdot = 0.0;
    SimConfig cfg;
    PlantDynamics plant(model, cfg);
    VehicleState st;
    st.position.z() = 60.0;
    const Derivative d = plant.evaluate(st, Vec5::Zero(), 0.0, 0.0);
    // Hand solve: w_dot = (W - B) / (m - Z_wdot-entry).
    const double z_added = synthetic::kWaterDensity * std::pow(70.2, 3) / 2.0 *
                           model.coeffs.motion.Z_wdot;
    const double expected = 5.0e4 / (model.mass.m - z_added);
    CHECK(d.s_dot(2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("derivative: hydrodynamic forces are linear in density") {
    const VehicleModel model = stock_model();
    SimConfig cfg1, cfg2;
    cfg2.env.rho = 2.0 * cfg1.env.rho;
    PlantDynamics p1(model, cfg1), p2(model, cfg2);
    VehicleState st;
    st.position.z() = 50.0;
    st.velocity << 2.5, 0.2, -0.1, 0.01, 0.02, -0.015;
    Vec5 defl;
    defl << 0.1, -0.1, 0.05, 0.0, 0.1;
    const Derivative d1 = p1.evaluate(st, defl, 1.2, 0.0);
    const Derivative d2 = p2.evaluate(st, defl, 1.2, 0.0);
    for (const auto [a, b] : {std::pair{d1.forces.hull, d2.forces.hull},
                              {d1.forces.motion_coupling, d2.forces.motion_coupling},
                              {d1.forces.control_surface, d2.forces.control_surface},
                              {d1.forces.propeller, d2.forces.propeller}})
        CHECK((2.0 * a - b).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + b.cwiseAbs().maxCoeff()));
}

TEST_CASE("trim: bisection hits zero net surge") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    PlantDynamics plant(model, cfg);
    const double speed = 6.0 * kKnotsToMs;
    const double n = solve_self_propulsion(plant, speed, 50.0);
    VehicleState st;
    st.position.z() = 50.0;
    st.velocity(0) = speed;
    const Derivative d = plant.evaluate(st, Vec5::Zero(), n, 0.0);
    CHECK(std::abs(d.forces.propeller(0) + d.forces.hull(0)) < 1e-6);
}

TEST_CASE("rk4: roll decay converges at fourth order") {
    VehicleModel model = stock_model();
    model.coeffs = synthetic::smooth_coefficients();
    // Stronger metacentric restoring for a faster roll mode.
    model.mass.cg.z() = 0.5;
    SimConfig base;
    base.duration = 20.0;
    RollDecayConfig rd;
    rd.speed = 2.0;
    rd.heel = deg2rad(15.0);

    auto roll_at_end = [&](double dt) {
        SimConfig cfg = base;
        cfg.dt = dt;
        cfg.output_decimation = 1;
        PlantDynamics plant(model, cfg);
        const TrajectoryLog log = run_roll_decay(plant, cfg, rd);
        return log.rows.back().state.roll();
    };
    const double r1 = roll_at_end(0.05);
    const double r2 = roll_at_end(0.025);
    const double r3 = roll_at_end(0.0125);
    const double order = std::log2(std::abs(r1 - r2) / std::abs(r2 - r3));
    CHECK(order >= 3.9);
    CHECK(order < 4.6);
}

TEST_CASE("energy decays without propulsion for dissipative coefficients") {
    VehicleModel model = stock_model();
    model.coeffs = synthetic::dissipative_coefficients();
    model.mass.W = model.mass.B;
    model.mass.cb = model.mass.cg;  // no restoring exchange, pure decay
    SimConfig cfg;
    cfg.duration = 60.0;
    PlantDynamics plant(model, cfg);
    RollDecayConfig rd;
    rd.speed = 2.0;
    rd.heel = 0.0;
    rd.propulsion = false;
    rd.initial_velocity_offset << 0.0, 0.1, 0.1, 0.05, 0.02, 0.02;
    const TrajectoryLog log = run_roll_decay(plant, cfg, rd);
    const Mat6& M = plant.total_mass_matrix();
    double prev = 1e300;
    for (const LogRow& row : log.rows) {
        const double ke = 0.5 * row.state.velocity.dot(M * row.state.velocity);
        CHECK(ke <= prev * (1.0 + 1e-12));
        prev = ke;
    }
    CHECK(prev < 0.5 * log.rows.front().state.velocity.dot(M * log.rows.front().state.velocity));
}

TEST_CASE("turn with zero rudder runs straight") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 120.0;
    PlantDynamics plant(model, cfg);
    TurnConfig tc;
    tc.rudder = 0.0;
    const TrajectoryLog log = run_turn(plant, cfg, tc);
    const double distance = log.rows.back().state.position.x();
    CHECK(distance > 100.0);
    CHECK(std::abs(log.rows.back().state.position.y()) < 1e-6 * distance);
}

TEST_CASE("turn metrics: steady turn reaches 90 and 180 degrees") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 1700.0;
    cfg.output_decimation = 20;
    PlantDynamics plant(model, cfg);
    TurnConfig tc;
    tc.rudder = deg2rad(15.0);
    const TrajectoryLog log = run_turn(plant, cfg, tc);
    const TurnMetrics m = turn_metrics(log);
    CHECK(m.complete);
    CHECK(m.advance > 0.0);
    CHECK(m.tactical_diameter > 0.0);
}

TEST_CASE("vzz: commands alternate at the pitch crossings") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 600.0;
    PlantDynamics plant(model, cfg);
    ZigzagConfig zz;
    zz.speed = 6.0 * kKnotsToMs;
    const TrajectoryLog log = run_zigzag(plant, cfg, zz);

    int reversals = 0;
    for (std::size_t k = 1; k < log.rows.size(); ++k) {
        const double prev = log.rows[k - 1].command_vh(0);
        const double curr = log.rows[k].command_vh(0);
        if (prev == curr) continue;
        ++reversals;
        CHECK(curr == doctest::Approx(-prev));
        // At the reversal instant the pitch has just crossed the switch
        // angle with the sign opposite to the old command.
        const double pitch = log.rows[k].state.pitch();
        CHECK(std::abs(pitch) >= zz.switch_angle - 1e-6);
        CHECK(pitch * prev < 0.0);
    }
    CHECK(reversals >= 2);

    const ZigzagMetrics m = zigzag_metrics(log, zz.switch_angle, false);
    CHECK(m.t_first_peak > 0.0);
    CHECK(m.min_speed < m.initial_speed);  // speed loss
    for (double o : m.overshoot_angles) CHECK(o >= 0.0);
}

TEST_CASE("mirror symmetry: mirrored hzz reproduces the mirrored trajectory") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 60.0;
    PlantDynamics plant(model, cfg);
    ZigzagConfig zz;
    zz.speed = 6.0 * kKnotsToMs;
    zz.horizontal = true;
    zz.initial_attitude = Vec3(0.02, 0.0, 0.05);
    zz.initial_velocity_offset << 0.0, 0.05, 0.0, 0.004, 0.0, 0.003;

    ZigzagConfig mirrored = zz;
    mirrored.command_sign = -1;
    mirrored.initial_attitude = Vec3(-0.02, 0.0, -0.05);
    mirrored.initial_velocity_offset << 0.0, -0.05, 0.0, -0.004, 0.0, -0.003;

    const TrajectoryLog a = run_zigzag(plant, cfg, zz);
    const TrajectoryLog b = run_zigzag(plant, cfg, mirrored);
    REQUIRE(a.rows.size() == b.rows.size());

    double scale[12] = {0};
    auto channels = [](const LogRow& r) {
        return std::array<double, 12>{
            r.state.position.x(), r.state.position.y(), r.state.position.z(),
            r.state.roll(), r.state.pitch(), r.state.yaw(),
            r.state.velocity(0), r.state.velocity(1), r.state.velocity(2),
            r.state.velocity(3), r.state.velocity(4), r.state.velocity(5)};
    };
    for (const LogRow& r : a.rows) {
        const auto c = channels(r);
        for (int i = 0; i < 12; ++i) scale[i] = std::max(scale[i], std::abs(c[i]));
    }
    const bool odd[12] = {false, true, false, true, false, true,
                          false, true, false, true, false, true};
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        const auto ca = channels(a.rows[k]);
        const auto cb = channels(b.rows[k]);
        for (int i = 0; i < 12; ++i) {
            const double expected = odd[i] ? -ca[i] : ca[i];
            CHECK(std::abs(cb[i] - expected) <= 1e-9 * std::max(scale[i], 1e-6));
        }
    }
}

TEST_CASE("wave-free equivalence of mesh and analytic buoyancy") {
    const HullMesh hull = make_revolved_hull();
    const double rho = 1025.0, g = 9.81;
    const double W = neutral_buoyancy_weight(hull, rho, g);
    const Vec3 cb = mesh_buoyancy_center(hull, rho, g);

    VehicleModel analytic = stock_model();
    analytic.mass.m = W / g;
    analytic.mass.inertia = Mat3::Zero();
    analytic.mass.inertia.diagonal() << analytic.mass.m * 3.433 * 3.433,
        analytic.mass.m * 17.6 * 17.6, analytic.mass.m * 17.522 * 17.522;
    analytic.mass.W = analytic.mass.B = W;
    analytic.mass.cg = cb + Vec3(0.0, 0.0, 0.3);  // CG below CB for restoring
    analytic.mass.cb = cb;

    VehicleModel mesh_model = analytic;
    mesh_model.mesh = hull;

    SimConfig acs;
    acs.duration = 40.0;
    SimConfig mcs = acs;
    mcs.mesh_buoyancy = true;

    RollDecayConfig rd;
    rd.speed = 2.0;
    rd.heel = deg2rad(10.0);
    rd.propulsion = false;

    const TrajectoryLog la = run_roll_decay(PlantDynamics(analytic, acs), acs, rd);
    const TrajectoryLog lm = run_roll_decay(PlantDynamics(mesh_model, mcs), mcs, rd);
    REQUIRE(la.rows.size() == lm.rows.size());
    for (std::size_t k = 0; k < la.rows.size(); ++k) {
        CHECK(std::abs(la.rows[k].state.roll() - lm.rows[k].state.roll()) < 1e-6);
        CHECK((la.rows[k].state.position - lm.rows[k].state.position).norm() < 1e-5);
    }
}

TEST_CASE("determinism: identical configs give bitwise identical logs") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 30.0;
    PlantDynamics plant(model, cfg);
    ZigzagConfig zz;
    zz.speed = 6.0 * kKnotsToMs;
    const TrajectoryLog a = run_zigzag(plant, cfg, zz);
    const TrajectoryLog b = run_zigzag(plant, cfg, zz);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        CHECK(a.rows[k].state.position == b.rows[k].state.position);
        CHECK(a.rows[k].state.velocity == b.rows[k].state.velocity);
    }
}

TEST_CASE("follow: on-path start stays on the path") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 400.0;
    PlantDynamics plant(model, cfg);
    FollowConfig fc;
    fc.path.control_points = {Vec3(0, 0, 50), Vec3(800, 0, 50), Vec3(1600, 0, 50)};
    fc.path.final_time = 450.0;
    const TrajectoryLog log = run_follow(plant, cfg, fc);
    const FollowMetrics m = follow_metrics(log);
    CHECK(m.max_vertical_error < 1.0);
    CHECK(m.max_horizontal_error < 1.0);
    CHECK(log.rows.back().gamma > 100.0);
}

TEST_CASE("follow: l1 output is held between sample instants") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 40.0;
    PlantDynamics plant(model, cfg);
    FollowConfig fc = sample_follow_path();
    fc.l1_Ts = 0.2;  // 4 integrator steps per L1 sample
    const TrajectoryLog log = run_follow(plant, cfg, fc);
    int holds = 0;
    for (std::size_t k = 1; k < log.rows.size(); ++k) {
        const double remainder = std::fmod(log.rows[k].t + 1e-9, 0.2);
        if (remainder > 0.05) {  // strictly inside a hold interval
            CHECK(log.rows[k].u_ad == log.rows[k - 1].u_ad);
            ++holds;
        }
    }
    CHECK(holds > 50);
}

TEST_CASE("follow: terrain clearance check only logs") {
    const VehicleModel model = stock_model();
    SimConfig cfg;
    cfg.duration = 60.0;
    PlantDynamics plant(model, cfg);
    FollowConfig fc;
    fc.path.control_points = {Vec3(0, 0, 50), Vec3(800, 0, 50), Vec3(1600, 0, 50)};
    fc.path.final_time = 450.0;
    TerrainGrid terrain;
    terrain.floor_depth = Grid2({{-1e4, 1e4}}, {{-1e4, 1e4}}, {55.0, 55.0, 55.0, 55.0});
    terrain.min_clearance = 10.0;  // floor at 55 m, vehicle at 50 m: violated
    fc.terrain = terrain;
    const TrajectoryLog log = run_follow(plant, cfg, fc);
    CHECK(log.events.count(evc::terrain_clearance) > 0);
    CHECK(follow_metrics(log).clearance_violations > 0);
}

TEST_CASE("config validation errors") {
    const VehicleModel model = stock_model();
    SimConfig bad;
    bad.dt = -0.1;
    CHECK_THROWS_AS(PlantDynamics(model, bad), Error);

    SimConfig mesh_mode;
    mesh_mode.mesh_buoyancy = true;  // no mesh supplied
    CHECK_THROWS_AS(PlantDynamics(model, mesh_mode), Error);

    SimConfig cfg;
    PlantDynamics plant(model, cfg);
    FollowConfig fc = sample_follow_path();
    fc.l1_Ts = 0.07;  // not commensurate with dt = 0.05
    CHECK_THROWS_AS(run_follow(plant, cfg, fc), Error);
}
