#pragma once

#include "subrom/core.hpp"

namespace subrom {

/// Mass, buoyancy and inertia bookkeeping for the body-frame equations of
/// motion. The body frame is x forward, y starboard, z down; the origin sits
/// on the propeller-shaft axis, so cg/cb are generally nonzero. Weight W and
/// buoyancy B are carried independently of m so that ballast-style changes
/// can be injected without touching the inertia.
struct MassProperties {
    double m = 0.0;                   // kg
    Vec3 cg = Vec3::Zero();           // (x_G, y_G, z_G), m
    Vec3 cb = Vec3::Zero();           // (x_B, y_B, z_B), m
    Mat3 inertia = Mat3::Zero();      // about body origin, kg m^2
    double W = 0.0;                   // weight, N
    double B = 0.0;                   // buoyancy, N

    /// Build from vehicle particulars: gyration radii give the diagonal
    /// inertia I_ii = m*r_i^2; products of inertia default to zero.
    static MassProperties from_particulars(double mass, const Vec3& cg, const Vec3& cb,
                                           const Vec3& gyration_radii, double weight,
                                           double buoyancy);

    /// Throws Error on non-positive mass or non-SPD inertia.
    void validate() const;
};

/// Vehicle state: inertial position (z down, so depth > 0 below the calm
/// surface), Euler attitude (roll, pitch, yaw) and the body-frame generalized
/// velocity s = [u, v, w, p, q, r].
struct VehicleState {
    Vec3 position = Vec3::Zero();
    Vec3 attitude = Vec3::Zero();  // (phi, theta, psi), rad
    Vec6 velocity = Vec6::Zero();

    double roll() const { return attitude.x(); }
    double pitch() const { return attitude.y(); }
    double yaw() const { return attitude.z(); }
    double depth() const { return position.z(); }

    /// Wrap roll and yaw to (-pi, pi].
    void normalize_angles() {
        attitude.x() = wrap_pi(attitude.x());
        attitude.z() = wrap_pi(attitude.z());
    }
};

/// Default margin to the theta = +-pi/2 kinematic singularity (1 degree).
inline constexpr double kDefaultPitchGuard = kPi / 180.0;

/// 6x6 rigid-body mass matrix including the CG coupling blocks.
Mat6 build_mass_matrix(const MassProperties& mp);

/// Velocity-only part of the non-inertial coupling vector b.
Vec6 coupling_velocity_part(const MassProperties& mp, const Vec6& s);

/// Constant matrix collecting the acceleration-dependent terms of b, so that
/// coupling_vector(s, s_dot) == coupling_velocity_part(s) + B_acc * s_dot.
/// The simulator moves B_acc to the left-hand side of the linear system.
Mat6 coupling_acceleration_matrix(const MassProperties& mp);

/// Full coupling vector b evaluated at (s, s_dot).
Vec6 coupling_vector(const MassProperties& mp, const Vec6& s, const Vec6& s_dot);

/// Hydrostatic force/moment from weight and buoyancy at the given attitude.
/// Rows 1-3: (W - B) resolved along the body axes; rows 4-6: the moment
/// (W*cg - B*cb) x g_b about the body origin.
Vec6 hydrostatic_restoring(const MassProperties& mp, double roll, double pitch);

/// Weight-only variant used when buoyancy comes from mesh pressure
/// integration instead.
Vec6 weight_load(const MassProperties& mp, double roll, double pitch);

/// Body-to-inertial rotation for ZYX Euler angles (phi, theta, psi).
Mat3 body_to_inertial(const Vec3& attitude);

struct KinematicRates {
    Vec3 position_rate;  // inertial frame, m/s
    Vec3 attitude_rate;  // (phi_dot, theta_dot, psi_dot), rad/s
};

/// Marine-convention Euler kinematics. Throws Error when |theta| is within
/// `pitch_guard` of pi/2.
KinematicRates euler_kinematics(const VehicleState& state, double pitch_guard = kDefaultPitchGuard);

}  // namespace subrom
