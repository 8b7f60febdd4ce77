#pragma once

#include "subrom/simulator.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

// All structured files are JSON with a schema_version field and explicit
// unit annotations ({"value": 10, "unit": "kts"}) on dimensional fields;
// ingestion converts to SI + radians once, unknown keys are rejected.

namespace subrom {

using Json = nlohmann::json;

struct L1Settings {
    double wn_pitch = 0.15, zeta_pitch = 1.0;
    double wn_yaw = 0.15, zeta_yaw = 1.0;
    double sample_time = 0.01;
    double filter_bandwidth = 0.01;
};

enum class ScenarioKind { None, Trim, RollDecay, Turn, Zigzag, Follow };

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::None;
    double speed = 3.0 * kKnotsToMs;  // m/s
    double depth = 50.0;              // m
    // roll decay
    double heel = deg2rad(15.0);
    bool propulsion = true;
    // turn
    double rudder = deg2rad(10.0);
    // zigzag
    double deflection = deg2rad(10.0);
    double switch_angle = deg2rad(10.0);
    bool horizontal = false;
    // follow
    std::string path_file;
    std::optional<BernsteinPath> path;
    bool adaptation = true;
    std::optional<TerrainGrid> terrain;
};

struct AuditFinding {
    std::string code;
    std::string message;
};

struct AuditReport {
    std::vector<AuditFinding> warnings;
    bool ok = true;
};

/// Fully validated runtime configuration: everything the scenario runners
/// need, in SI units.
struct RuntimeConfig {
    VehicleModel model;
    SimConfig sim;
    ActuatorState actuator_limits;
    AutopilotGains autopilot;
    RateAutopilotGains rate_autopilot;
    PFConfig pf;
    L1Settings l1;
    ScenarioSpec scenario;
    std::string coefficient_file;
    std::string mesh_file;
    AuditReport audit;
};

/// Load, validate and cross-audit a configuration document. Hard schema or
/// feasibility violations throw Error with a stable code; soft findings
/// (coefficient coverage, shallow-depth reliability) land in the report.
RuntimeConfig load_and_audit(const std::string& path);

/// Re-emit the audited configuration (SI units, resolved file references
/// kept). load(write(cfg)) must reproduce the same runtime configuration.
Json config_to_json(const RuntimeConfig& cfg);

CoefficientSet load_coefficients(const std::string& path,
                                 std::vector<std::string>* defaulted = nullptr);
Json coefficients_to_json(const CoefficientSet& set);

BernsteinPath load_path(const std::string& path);
Json path_to_json(const BernsteinPath& path);

/// Trajectory CSV: one row per decimated step, 17-significant-digit values,
/// documented column header. read() inverts write() losslessly.
void write_trajectory_csv(const std::string& path, const TrajectoryLog& log);
TrajectoryLog read_trajectory_csv(const std::string& path);

Json zigzag_metrics_to_json(const ZigzagMetrics& m);
Json follow_metrics_to_json(const FollowMetrics& m);
Json turn_metrics_to_json(const TurnMetrics& m);
Json events_to_json(const EventLog& events);

/// Map an error category code (e.g. "mesh/not-closed") to the CLI exit
/// status for that category family.
int exit_code_for(const std::string& error_code);

}  // namespace subrom
