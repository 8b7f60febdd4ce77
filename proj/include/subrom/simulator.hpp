#pragma once

#include "subrom/actuation_autopilot.hpp"
#include "subrom/core.hpp"
#include "subrom/events.hpp"
#include "subrom/guidance_pf.hpp"
#include "subrom/hydro_model.hpp"
#include "subrom/l1_adaptive.hpp"
#include "subrom/path_geometry.hpp"
#include "subrom/rigid_body.hpp"
#include "subrom/tables.hpp"
#include "subrom/wave_hydrostatics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subrom {

struct Environment {
    double rho = 1025.0;  // kg/m^3
    double g = 9.81;      // m/s^2
};

/// Everything the plant force evaluation needs, immutable during a run.
struct VehicleModel {
    MassProperties mass;
    CoefficientSet coeffs;
    std::optional<HullMesh> mesh;
    std::optional<WaveField> wave;
    Vec6 external_load = Vec6::Zero();  // constant injected disturbance (body frame)
};

struct SimConfig {
    double dt = 0.05;           // s
    double duration = 60.0;     // s
    int output_decimation = 1;
    Environment env;
    bool mesh_buoyancy = false;
    bool frozen_controls = false;
    double pitch_guard = kDefaultPitchGuard;

    void validate() const;
};

struct ForceBreakdown {
    Vec6 hydrostatic = Vec6::Zero();      // weight(+buoyancy) terms
    Vec6 wave_mesh = Vec6::Zero();        // mesh pressure integration (incl. buoyancy)
    Vec6 hull = Vec6::Zero();
    Vec6 motion_coupling = Vec6::Zero();
    Vec6 control_surface = Vec6::Zero();
    Vec6 propeller = Vec6::Zero();
    Vec6 coupling_b = Vec6::Zero();       // velocity part of b (subtracted)
};

struct Derivative {
    Vec6 s_dot = Vec6::Zero();
    Vec3 position_rate = Vec3::Zero();
    Vec3 attitude_rate = Vec3::Zero();
    ForceBreakdown forces;
};

/// Plant right-hand side with the constant combined mass matrix
/// M_total = M_rigid + B_acc - A_added factorized once per run.
class PlantDynamics {
public:
    PlantDynamics(const VehicleModel& model, const SimConfig& config);

    Derivative evaluate(const VehicleState& state, const Vec5& deflections, double n, double t,
                        EventLog* events = nullptr) const;

    /// One classical RK4 step with deflections and n held constant.
    VehicleState step_rk4(const VehicleState& state, const Vec5& deflections, double n, double t,
                          double dt, EventLog* events = nullptr) const;

    const Mat6& total_mass_matrix() const { return m_total_; }
    const VehicleModel& model() const { return model_; }
    double sail_top_depth(const VehicleState& state) const {
        return state.position.z() - model_.coeffs.sail_top_above_origin;
    }

private:
    VehicleModel model_;
    SimConfig config_;
    Mat6 m_total_;
    Eigen::PartialPivLU<Mat6> lu_;
};

struct LogRow {
    double t = 0.0;
    VehicleState state;
    Vec5 deflections = Vec5::Zero();
    Vec2 command_vh = Vec2::Zero();   // commanded (delta_V, delta_H)
    double n = 0.0;                   // rev/s
    ForceBreakdown forces;
    // Path-following diagnostics (follow scenario only)
    double gamma = 0.0;
    Vec3 p_T = Vec3::Zero();
    double psi = 0.0;
    Vec2 rate_command = Vec2::Zero();  // (q_c, r_c)
    Vec2 u_ad = Vec2::Zero();          // inner-loop reference after L1
    double vertical_error = 0.0;       // inertial z difference to the target point
    double horizontal_error = 0.0;     // inertial xy distance to the target point
    bool rate_saturated = false;       // omega_c hit its norm bound this step
};

struct TrajectoryLog {
    std::vector<LogRow> rows;
    EventLog events;
    std::string scenario;
    double dt = 0.0;
    int decimation = 1;
};

/// Bisection on n in [0.1, 20] rev/s for zero net surge force at the given
/// speed and depth (even keel, neutral planes). Tolerance 1e-6 N.
double solve_self_propulsion(const PlantDynamics& plant, double speed, double depth);

struct RollDecayConfig {
    double speed = 3.0;        // m/s approach speed
    double depth = 50.0;       // m (body origin)
    double heel = deg2rad(15.0);
    bool propulsion = true;
    Vec6 initial_velocity_offset = Vec6::Zero();
};

TrajectoryLog run_roll_decay(const PlantDynamics& plant, const SimConfig& cfg,
                             const RollDecayConfig& rd);

struct TurnConfig {
    double speed = 3.0;
    double depth = 50.0;
    double rudder = deg2rad(10.0);  // held delta_H
    ActuatorState actuators;        // carries position/rate limits
    // Vertical channel of the direction autopilot holds depth and pitch
    // while the rudder is fixed; zero gains leave the planes neutral.
    AutopilotGains autopilot;
};

TrajectoryLog run_turn(const PlantDynamics& plant, const SimConfig& cfg, const TurnConfig& tc);

struct ZigzagConfig {
    double speed = 3.0;
    double depth = 50.0;
    double deflection = deg2rad(10.0);
    double switch_angle = deg2rad(10.0);
    bool horizontal = false;  // false: VZZ on pitch, true: HZZ on yaw
    int command_sign = 1;     // -1 mirrors the command/watch pattern
    // Optional perturbation added to the nominal straight-and-level start.
    Vec3 initial_attitude = Vec3::Zero();
    Vec6 initial_velocity_offset = Vec6::Zero();
    ActuatorState actuators;
};

TrajectoryLog run_zigzag(const PlantDynamics& plant, const SimConfig& cfg, const ZigzagConfig& zz);

/// Optional terrain for the geometric clearance check: seabed depth (m,
/// z-down positive) over an (x, y) grid. Logs a clearance event when the
/// vehicle passes closer than min_clearance above the floor; no forces.
struct TerrainGrid {
    Grid2 floor_depth;
    double min_clearance = 10.0;
};

struct FollowConfig {
    BernsteinPath path;
    PFConfig pf{.k_gamma = 0.05,
                .k_R = 0.05,
                .d = 60.0,
                .c = 0.12,
                .c1 = 50.0,
                .lambda = 1e-5,
                .delta_lambda = 0.5,
                .v_min = 2.0,
                .omega_c_max = 0.05,
                .omega_T_max = 1e-3};
    double speed = 4.0;                // nominal speed for trim, m/s
    double depth_for_trim = 50.0;
    RateAutopilotGains rate_gains{.pitch = {80.0, 0.0, 0.0}, .yaw = {80.0, 0.0, 0.0}};
    // L1 block: desired-model channels matched to the closed rate loop.
    double l1_wn_pitch = 0.15, l1_zeta_pitch = 1.0;
    double l1_wn_yaw = 0.15, l1_zeta_yaw = 1.0;
    double l1_Ts = 0.01;
    double l1_filter_bandwidth = 0.01;
    bool adaptation = true;
    std::optional<TerrainGrid> terrain;
    ActuatorState actuators;
};

TrajectoryLog run_follow(const PlantDynamics& plant, const SimConfig& cfg,
                         const FollowConfig& fc);

struct ZigzagMetrics {
    double t_first_peak = 0.0;             // T1
    std::vector<double> overshoot_angles;  // rad, per half cycle
    std::vector<double> periods;           // s, successive same-sign reversal spacing
    double min_speed = 0.0;
    double initial_speed = 0.0;
    double depth_envelope = 0.0;           // max - min depth
    bool complete = true;                  // enough cycles for period estimates
};

ZigzagMetrics zigzag_metrics(const TrajectoryLog& log, double switch_angle, bool horizontal);

struct FollowMetrics {
    double max_vertical_error = 0.0;
    double mean_vertical_error = 0.0;
    double max_horizontal_error = 0.0;
    double mean_horizontal_error = 0.0;
    double t_max_vertical = 0.0;
    double t_max_horizontal = 0.0;
    std::size_t clearance_violations = 0;
};

FollowMetrics follow_metrics(const TrajectoryLog& log);

struct TurnMetrics {
    double advance = 0.0;            // x travel at 90 deg heading change
    double transfer = 0.0;           // y travel at 90 deg
    double tactical_diameter = 0.0;  // |y| at 180 deg
    bool complete = true;
};

TurnMetrics turn_metrics(const TrajectoryLog& log);

}  // namespace subrom
