#include "subrom/path_geometry.hpp"

#include "subrom/errors.hpp"

#include <algorithm>
#include <cmath>

namespace subrom {

void BernsteinPath::validate() const {
    if (control_points.size() < 2)
        throw Error(errc::path_invalid, "a path needs at least two control points");
    if (!(final_time > 0.0)) throw Error(errc::path_invalid, "final virtual time must be positive");
    for (const Vec3& p : control_points)
        if (!p.allFinite()) throw Error(errc::path_invalid, "non-finite control point");
}

namespace {

Vec3 de_casteljau(std::vector<Vec3> pts, double tau) {
    for (std::size_t level = pts.size() - 1; level > 0; --level)
        for (std::size_t i = 0; i < level; ++i) pts[i] = (1.0 - tau) * pts[i] + tau * pts[i + 1];
    return pts[0];
}

std::vector<Vec3> hodograph(const std::vector<Vec3>& pts) {
    std::vector<Vec3> d;
    const double n = static_cast<double>(pts.size() - 1);
    d.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) d.push_back(n * (pts[i + 1] - pts[i]));
    return d;
}

}  // namespace

PathSample eval_path(const BernsteinPath& path, double gamma, EventLog* events) {
    path.validate();
    if (gamma < 0.0 || gamma > path.final_time) {
        record_event(events, evc::gamma_clamped, "virtual time clamped to [0, T_f]");
        gamma = std::clamp(gamma, 0.0, path.final_time);
    }
    const double tau = gamma / path.final_time;

    PathSample s;
    s.position = de_casteljau(path.control_points, tau);
    const std::vector<Vec3> d1 = hodograph(path.control_points);
    s.first_derivative = de_casteljau(d1, tau) / path.final_time;
    if (d1.size() >= 2) {
        s.second_derivative =
            de_casteljau(hodograph(d1), tau) / (path.final_time * path.final_time);
    } else {
        s.second_derivative = Vec3::Zero();
    }
    return s;
}

namespace {

// One step of the double-reflection method: propagate the reference vector
// (t2) from (x0, t1_0) to (x1, t1_1).
Vec3 double_reflect(const Vec3& x0, const Vec3& t1_0, const Vec3& t2_0, const Vec3& x1,
                    const Vec3& t1_1) {
    const Vec3 v1 = x1 - x0;
    const double c1 = v1.squaredNorm();
    if (c1 < 1e-28) return t2_0;
    const Vec3 r_l = t2_0 - (2.0 / c1) * v1.dot(t2_0) * v1;
    const Vec3 t_l = t1_0 - (2.0 / c1) * v1.dot(t1_0) * v1;
    const Vec3 v2 = t1_1 - t_l;
    const double c2 = v2.squaredNorm();
    if (c2 < 1e-28) return r_l;
    return r_l - (2.0 / c2) * v2.dot(r_l) * v2;
}

Mat3 assemble(const Vec3& t1, const Vec3& t2_raw) {
    // Orthonormalize t2 against t1 and complete the right-handed triad.
    const Vec3 t2 = (t2_raw - t2_raw.dot(t1) * t1).normalized();
    Mat3 R;
    R.col(0) = t1;
    R.col(1) = t2;
    R.col(2) = t1.cross(t2);
    return R;
}

}  // namespace

FramedPath::FramedPath(BernsteinPath path, int grid_resolution)
    : path_(std::move(path)), resolution_(std::max(grid_resolution, 8)) {
    path_.validate();
    step_ = path_.final_time / (resolution_ - 1);

    grid_frames_.reserve(static_cast<std::size_t>(resolution_));
    min_speed_ = 1e300;

    Vec3 prev_t1, prev_t2, prev_x;
    for (int k = 0; k < resolution_; ++k) {
        const double gamma = step_ * k;
        const PathSample s = eval_path(path_, gamma);
        const double speed = s.first_derivative.norm();
        min_speed_ = std::min(min_speed_, speed);
        if (speed <= kMinPathSpeed)
            throw Error(errc::path_degenerate,
                        "path speed below threshold at gamma = " + std::to_string(gamma));
        const Vec3 t1 = s.first_derivative / speed;
        Vec3 t2;
        if (k == 0) {
            // Initial t2: projection of the inertial vertical, else east.
            const Vec3 vertical(0.0, 0.0, 1.0);
            Vec3 proj = vertical - vertical.dot(t1) * t1;
            if (proj.norm() < 1e-6) {
                const Vec3 east(0.0, 1.0, 0.0);
                proj = east - east.dot(t1) * t1;
            }
            t2 = proj.normalized();
        } else {
            t2 = double_reflect(prev_x, prev_t1, prev_t2, s.position, t1);
        }
        const Mat3 R = assemble(t1, t2);
        grid_frames_.push_back(R);
        prev_t1 = R.col(0);
        prev_t2 = R.col(1);
        prev_x = s.position;
    }

    // omega_T per unit gamma by central differences; one-sided at the ends.
    grid_omega_.assign(static_cast<std::size_t>(resolution_), Vec3::Zero());
    max_omega_ = 0.0;
    auto omega_between = [&](int a, int b) {
        const Mat3 dR = (grid_frames_[static_cast<std::size_t>(b)] -
                         grid_frames_[static_cast<std::size_t>(a)]) /
                        (step_ * (b - a));
        const Mat3 W = grid_frames_[static_cast<std::size_t>((a + b) / 2)].transpose() * dR;
        return unskew(0.5 * (W - W.transpose()));
    };
    for (int k = 0; k < resolution_; ++k) {
        const int lo = std::max(0, k - 1), hi = std::min(resolution_ - 1, k + 1);
        grid_omega_[static_cast<std::size_t>(k)] = omega_between(lo, hi);
        max_omega_ = std::max(max_omega_, grid_omega_[static_cast<std::size_t>(k)].norm());
    }
}

PathSample FramedPath::eval(double gamma, EventLog* events) const {
    return eval_path(path_, gamma, events);
}

TransportFrame FramedPath::frame(double gamma, EventLog* events) const {
    if (gamma < 0.0 || gamma > path_.final_time) {
        record_event(events, evc::gamma_clamped, "frame query clamped to [0, T_f]");
        gamma = std::clamp(gamma, 0.0, path_.final_time);
    }
    const int k = std::min(static_cast<int>(gamma / step_), resolution_ - 1);
    const PathSample here = eval_path(path_, gamma);
    const double speed = here.first_derivative.norm();
    if (speed <= kMinPathSpeed) throw Error(errc::path_degenerate, "path speed below threshold");
    const Vec3 t1 = here.first_derivative / speed;

    const Mat3& base = grid_frames_[static_cast<std::size_t>(k)];
    const PathSample anchor = eval_path(path_, step_ * k);
    const Vec3 t2 =
        double_reflect(anchor.position, base.col(0), base.col(1), here.position, t1);

    TransportFrame f;
    f.rotation = assemble(t1, t2);
    // Linear interpolation of the gridded angular rate.
    const int k1 = std::min(k + 1, resolution_ - 1);
    const double w = std::clamp((gamma - step_ * k) / step_, 0.0, 1.0);
    f.angular_velocity = (1.0 - w) * grid_omega_[static_cast<std::size_t>(k)] +
                         w * grid_omega_[static_cast<std::size_t>(k1)];
    return f;
}

}  // namespace subrom
