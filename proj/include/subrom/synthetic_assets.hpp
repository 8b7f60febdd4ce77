#pragma once

#include "subrom/hydro_model.hpp"
#include "subrom/path_geometry.hpp"
#include "subrom/rigid_body.hpp"
#include "subrom/simulator.hpp"

namespace subrom::synthetic {

/// Sample coefficient set for a BB2-like generic submarine at full scale.
/// SYNTHETIC: values are shaped on the qualitative trends of published
/// CFD sweeps (linear lateral force/moments in drift angle, stall
/// saturation of plane forces, thrust deduction rising toward the surface
/// then dipping at the shallowest depth) but are not measured data.
CoefficientSet bb2_coefficients();

/// Full-scale BB2-like mass properties (Table-of-particulars style inputs:
/// displacement, CG, gyration radii), neutrally buoyant.
MassProperties bb2_mass_properties();

/// Variant used by dissipativity-sensitive tests: indefinite cross
/// coupling terms zeroed so every retained hydrodynamic term extracts
/// energy for forward speed.
CoefficientSet dissipative_coefficients();

/// Smooth variant for step-size convergence studies: signum/absolute-value
/// damping terms replaced by linear-in-rate equivalents.
CoefficientSet smooth_coefficients();

inline constexpr double kWaterDensity = 1025.0;  // kg/m^3
inline constexpr double kGravity = 9.81;         // m/s^2

/// SYNTHETIC approximation of a canyon thalweg-following path: about one
/// mile end to end with a sustained main turn and a gentle dive, 500 s of
/// virtual time.
BernsteinPath canyon_path();

/// Coarse seabed grid sitting roughly 50 m below the canyon path.
TerrainGrid canyon_terrain();

}  // namespace subrom::synthetic
