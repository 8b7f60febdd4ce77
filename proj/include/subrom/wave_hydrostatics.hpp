#pragma once

#include "subrom/core.hpp"
#include "subrom/events.hpp"
#include "subrom/rigid_body.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace subrom {

/// Triangulated wetted surface in the body frame with cached per-element
/// area vectors (outward by winding) and edge-midpoint Gauss points.
/// Immutable after build().
struct HullMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> area_vectors;                 // per triangle, m^2
    std::vector<std::array<Vec3, 3>> gauss_points;  // edge midpoints r12, r23, r31
    double total_area = 0.0;

    static HullMesh build(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

    std::size_t element_count() const { return triangles.size(); }

    /// Sum of area vectors relative to total area; ~0 for a closed surface.
    double closure_residual() const;

    /// Throws Error(mesh/not-closed) when the closure residual exceeds tol.
    void validate_closed(double tol = 1e-6) const;
};

/// Progressive regular deep-water wave. The wave frame has z up (z = 0 at
/// the calm surface, negative below); the simulator's inertial frame has z
/// down. wave_frame_z() is the single place that sign conversion lives.
struct WaveField {
    double amplitude = 0.0;     // m
    double wave_number = 1.0;   // rad/m
    double frequency = 1.0;     // rad/s
    double phase_origin = 0.0;  // m, shift along the propagation direction
    double heading = 0.0;       // rad, rotates the propagation axis in the horizontal plane
    double rho = 1025.0;        // kg/m^3
    double g = 9.81;            // m/s^2

    /// Deep-water dispersion from wavelength: omega = sqrt(g k).
    static WaveField from_wavelength(double amplitude, double wavelength, double heading = 0.0,
                                     double rho = 1025.0, double g = 9.81);
    /// Deep-water dispersion from period: k = omega^2 / g.
    static WaveField from_period(double amplitude, double period, double heading = 0.0,
                                 double rho = 1025.0, double g = 9.81);

    /// Validates parameters and the dispersion relation; a deliberate
    /// off-dispersion pair is accepted only with allow_override (logged).
    void validate(bool allow_override = false, EventLog* events = nullptr) const;

    double period() const { return 2.0 * kPi / frequency; }
    double wavelength() const { return 2.0 * kPi / wave_number; }
};

/// Inertial z (down, depth positive) -> wave-frame z (up, negative below
/// the calm surface).
inline double wave_frame_z(double inertial_z_down) { return -inertial_z_down; }

/// Pressure of the regular wave at wave-frame coordinates (x along
/// propagation, z up <= 0): p = -rho g z + rho g A e^{kz} sin(kx - wt).
/// Throws Error(wave/point-above-surface) for z > 0.
double wave_pressure(double x, double z, double t, const WaveField& wf);

/// Integrate an arbitrary pressure field (arguments: inertial position with
/// z down, time) over the mesh at the given pose. Returns body-frame loads
/// about the body origin. Summation order is fixed for determinism.
Vec6 integrate_field_loads(const HullMesh& mesh, const VehicleState& pose,
                           const std::function<double(const Vec3&, double)>& pressure, double t);

/// Pressure integration of the regular-wave field (Gauss-point positions
/// converted to the wave frame internally). Throws
/// Error(wave/partial-emergence) when any Gauss point rises above the calm
/// surface.
Vec6 integrate_pressure_loads(const HullMesh& mesh, const VehicleState& pose, const WaveField& wf,
                              double t);

/// Calm-water buoyancy magnitude for the neutrally buoyant start:
/// integrate with zero wave amplitude and return |F|.
double neutral_buoyancy_weight(const HullMesh& mesh, double rho, double g);

/// Center of buoyancy recovered from calm-water integrations at two poses.
Vec3 mesh_buoyancy_center(const HullMesh& mesh, double rho, double g);

/// ASCII STL ingestion; normals are recomputed from winding, a stored
/// normal disagreeing with the winding is a logged warning, not an error.
HullMesh load_stl_mesh(const std::string& path, EventLog* events = nullptr);
void write_stl_mesh(const std::string& path, const HullMesh& mesh,
                    const std::string& solid_name = "hull");

}  // namespace subrom
