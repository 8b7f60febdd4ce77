#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace subrom {

/// Exception carrying a stable machine-readable category code next to the
/// human-readable message, e.g. code "mesh/not-closed".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
// Configuration / ingestion
inline constexpr const char* config_parse = "config/parse";
inline constexpr const char* config_schema = "config/schema";
inline constexpr const char* config_unknown_key = "config/unknown-key";
inline constexpr const char* config_unit = "config/unit";
inline constexpr const char* config_missing_file = "config/missing-file";
// Vehicle / rigid body
inline constexpr const char* vehicle_invalid_mass = "vehicle/invalid-mass";
inline constexpr const char* vehicle_invalid_inertia = "vehicle/invalid-inertia";
inline constexpr const char* kinematics_singularity = "kinematics/pitch-singularity";
// Coefficient model
inline constexpr const char* coeffs_schema = "coeffs/schema";
inline constexpr const char* coeffs_axis = "coeffs/axis-not-increasing";
inline constexpr const char* coeffs_nan = "coeffs/nan-value";
inline constexpr const char* coeffs_speed_range = "coeffs/speed-out-of-range";
// Mesh / waves
inline constexpr const char* mesh_parse = "mesh/parse";
inline constexpr const char* mesh_not_closed = "mesh/not-closed";
inline constexpr const char* mesh_degenerate = "mesh/degenerate-triangle";
inline constexpr const char* mesh_index = "mesh/index-out-of-range";
inline constexpr const char* wave_invalid = "wave/invalid-parameters";
inline constexpr const char* wave_above_surface = "wave/point-above-surface";
inline constexpr const char* wave_emergence = "wave/partial-emergence";
// Path / guidance
inline constexpr const char* path_invalid = "path/invalid";
inline constexpr const char* path_degenerate = "path/degenerate-speed";
inline constexpr const char* guidance_not_orthonormal = "guidance/not-orthonormal";
inline constexpr const char* guidance_infeasible = "guidance/infeasible-parameters";
// L1 design
inline constexpr const char* l1_not_hurwitz = "l1/desired-not-hurwitz";
inline constexpr const char* l1_cb_singular = "l1/cmbm-singular";
inline constexpr const char* l1_nonminimum_phase = "l1/non-minimum-phase-zero";
inline constexpr const char* l1_design_infeasible = "l1/design-infeasible";
inline constexpr const char* l1_plant_not_minimal = "l1/plant-not-minimal";
// Simulation
inline constexpr const char* sim_invalid_config = "sim/invalid-config";
inline constexpr const char* sim_divergence = "sim/divergence";
inline constexpr const char* sim_trim_bracket = "sim/trim-no-bracket";
inline constexpr const char* sim_insufficient_cycles = "sim/insufficient-cycles";
}  // namespace errc

}  // namespace subrom
