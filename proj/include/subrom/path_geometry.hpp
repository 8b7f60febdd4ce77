#pragma once

#include "subrom/core.hpp"
#include "subrom/events.hpp"

#include <vector>

namespace subrom {

/// Single Bernstein-polynomial segment p_d : [0, T_f] -> R^3 given by its
/// control points in the inertial frame.
struct BernsteinPath {
    std::vector<Vec3> control_points;
    double final_time = 0.0;  // T_f, s (virtual time span)

    int degree() const { return static_cast<int>(control_points.size()) - 1; }
    void validate() const;  // >= 2 points, T_f > 0
};

struct PathSample {
    Vec3 position;
    Vec3 first_derivative;   // per unit gamma
    Vec3 second_derivative;  // per unit gamma^2
};

/// De Casteljau evaluation of the path and its first two hodographs.
/// gamma outside [0, T_f] is clamped with a logged event.
PathSample eval_path(const BernsteinPath& path, double gamma, EventLog* events = nullptr);

struct TransportFrame {
    Mat3 rotation;           // R_T^I = [t1 t2 t3]
    Vec3 angular_velocity;   // omega_T per unit gamma, T-frame components
};

inline constexpr double kMinPathSpeed = 1e-6;

/// Path with a cached rotation-minimizing frame, propagated by the
/// double-reflection method over a uniform gamma grid at construction.
/// Queries between grid samples run one exact double-reflection step from
/// the nearest cached sample; omega_T comes from central finite differences
/// on the grid. Immutable after construction.
class FramedPath {
public:
    explicit FramedPath(BernsteinPath path, int grid_resolution = 512);

    PathSample eval(double gamma, EventLog* events = nullptr) const;
    TransportFrame frame(double gamma, EventLog* events = nullptr) const;

    const BernsteinPath& path() const { return path_; }
    double final_time() const { return path_.final_time; }
    /// Smallest ||p_d'|| seen on the frame grid (configuration audits).
    double min_path_speed() const { return min_speed_; }
    /// Largest ||omega_T|| (per unit gamma) on the grid.
    double max_frame_rate() const { return max_omega_; }

private:
    BernsteinPath path_;
    int resolution_;
    double step_;
    std::vector<Mat3> grid_frames_;
    std::vector<Vec3> grid_omega_;
    double min_speed_ = 0.0;
    double max_omega_ = 0.0;
};

}  // namespace subrom
