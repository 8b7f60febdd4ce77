#include "subrom/rigid_body.hpp"

#include "subrom/errors.hpp"

#include <cmath>

namespace subrom {

MassProperties MassProperties::from_particulars(double mass, const Vec3& cg, const Vec3& cb,
                                                const Vec3& gyration_radii, double weight,
                                                double buoyancy) {
    MassProperties mp;
    mp.m = mass;
    mp.cg = cg;
    mp.cb = cb;
    mp.inertia = Mat3::Zero();
    mp.inertia(0, 0) = mass * gyration_radii.x() * gyration_radii.x();
    mp.inertia(1, 1) = mass * gyration_radii.y() * gyration_radii.y();
    mp.inertia(2, 2) = mass * gyration_radii.z() * gyration_radii.z();
    mp.W = weight;
    mp.B = buoyancy;
    mp.validate();
    return mp;
}

void MassProperties::validate() const {
    if (!(m > 0.0) || !std::isfinite(m))
        throw Error(errc::vehicle_invalid_mass, "mass must be positive and finite");
    if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-9 * inertia.cwiseAbs().maxCoeff())
        throw Error(errc::vehicle_invalid_inertia, "inertia tensor must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw Error(errc::vehicle_invalid_inertia, "inertia tensor must be positive definite");
}

Mat6 build_mass_matrix(const MassProperties& mp) {
    mp.validate();
    const double m = mp.m;
    const double xg = mp.cg.x(), yg = mp.cg.y(), zg = mp.cg.z();
    Mat6 M = Mat6::Zero();
    M.topLeftCorner<3, 3>() = m * Mat3::Identity();
    // CG coupling blocks: m * S(cg)^T upper right, m * S(cg) lower left.
    M(0, 4) = m * zg;
    M(0, 5) = -m * yg;
    M(1, 3) = -m * zg;
    M(1, 5) = m * xg;
    M(2, 3) = m * yg;
    M(2, 4) = -m * xg;
    M(3, 1) = -m * zg;
    M(3, 2) = m * yg;
    M(4, 0) = m * zg;
    M(4, 2) = -m * xg;
    M(5, 0) = -m * yg;
    M(5, 1) = m * xg;
    // Inertia block with negated products of inertia.
    M(3, 3) = mp.inertia(0, 0);
    M(4, 4) = mp.inertia(1, 1);
    M(5, 5) = mp.inertia(2, 2);
    M(3, 4) = M(4, 3) = -mp.inertia(0, 1);
    M(3, 5) = M(5, 3) = -mp.inertia(0, 2);
    M(4, 5) = M(5, 4) = -mp.inertia(1, 2);
    return M;
}

Vec6 coupling_velocity_part(const MassProperties& mp, const Vec6& s) {
    const double m = mp.m;
    const double xg = mp.cg.x(), yg = mp.cg.y(), zg = mp.cg.z();
    const double Ixx = mp.inertia(0, 0), Iyy = mp.inertia(1, 1), Izz = mp.inertia(2, 2);
    const double u = s(0), v = s(1), w = s(2), p = s(3), q = s(4), r = s(5);
    Vec6 b;
    b(0) = m * (w * q - v * r - xg * (q * q + r * r) + yg * p * q + zg * p * r);
    b(1) = m * (u * r - w * p - yg * (r * r + p * p) + zg * q * r + xg * q * p);
    b(2) = m * (v * p - u * q - zg * (p * p + q * q) + xg * r * p + yg * r * q);
    b(3) = (Izz - Iyy) * q * r + m * (yg * (-u * q + v * p) - zg * (-w * p + u * r));
    b(4) = (Ixx - Izz) * r * p + m * (zg * (-v * r + w * q) - xg * (-u * q + v * p));
    b(5) = (Iyy - Ixx) * p * q + m * (xg * (-w * p + u * r) - yg * (-v * r + w * q));
    return b;
}

Mat6 coupling_acceleration_matrix(const MassProperties& mp) {
    const double m = mp.m;
    const double xg = mp.cg.x(), yg = mp.cg.y(), zg = mp.cg.z();
    Mat6 B = Mat6::Zero();
    B(0, 4) = m * zg;
    B(0, 5) = -m * yg;
    B(1, 3) = -m * zg;
    B(1, 5) = m * xg;
    B(2, 3) = m * yg;
    B(2, 4) = -m * xg;
    B(3, 1) = -m * zg;
    B(3, 2) = m * yg;
    B(4, 0) = m * zg;
    B(4, 2) = -m * xg;
    B(5, 0) = -m * yg;
    B(5, 1) = m * xg;
    return B;
}

Vec6 coupling_vector(const MassProperties& mp, const Vec6& s, const Vec6& s_dot) {
    return coupling_velocity_part(mp, s) + coupling_acceleration_matrix(mp) * s_dot;
}

namespace {

// Inertial down direction resolved in body axes.
Vec3 gravity_direction_body(double roll, double pitch) {
    return Vec3(-std::sin(pitch), std::cos(pitch) * std::sin(roll),
                std::cos(pitch) * std::cos(roll));
}

Vec6 restoring_from(const Vec3& weighted_arm, double net_force, double roll, double pitch) {
    const Vec3 g_b = gravity_direction_body(roll, pitch);
    Vec6 f;
    f.head<3>() = net_force * g_b;
    f.tail<3>() = weighted_arm.cross(g_b);
    return f;
}

}  // namespace

Vec6 hydrostatic_restoring(const MassProperties& mp, double roll, double pitch) {
    return restoring_from(mp.W * mp.cg - mp.B * mp.cb, mp.W - mp.B, roll, pitch);
}

Vec6 weight_load(const MassProperties& mp, double roll, double pitch) {
    return restoring_from(mp.W * mp.cg, mp.W, roll, pitch);
}

Mat3 body_to_inertial(const Vec3& attitude) {
    const double cphi = std::cos(attitude.x()), sphi = std::sin(attitude.x());
    const double cth = std::cos(attitude.y()), sth = std::sin(attitude.y());
    const double cpsi = std::cos(attitude.z()), spsi = std::sin(attitude.z());
    Mat3 R;
    R << cpsi * cth, cpsi * sth * sphi - spsi * cphi, cpsi * sth * cphi + spsi * sphi,
         spsi * cth, spsi * sth * sphi + cpsi * cphi, spsi * sth * cphi - cpsi * sphi,
         -sth, cth * sphi, cth * cphi;
    return R;
}

KinematicRates euler_kinematics(const VehicleState& state, double pitch_guard) {
    const double theta = state.pitch();
    if (std::abs(theta) >= kPi / 2.0 - pitch_guard)
        throw Error(errc::kinematics_singularity,
                    "pitch within guard margin of +-90 deg: theta = " + std::to_string(theta));
    const double phi = state.roll();
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double cth = std::cos(theta), tth = std::tan(theta);
    const double p = state.velocity(3), q = state.velocity(4), r = state.velocity(5);

    KinematicRates rates;
    rates.position_rate = body_to_inertial(state.attitude) * state.velocity.head<3>();
    rates.attitude_rate = Vec3(p + (q * sphi + r * cphi) * tth,
                               q * cphi - r * sphi,
                               (q * sphi + r * cphi) / cth);
    return rates;
}

}  // namespace subrom
