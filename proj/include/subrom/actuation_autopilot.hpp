#pragma once

#include "subrom/core.hpp"
#include "subrom/events.hpp"
#include "subrom/rigid_body.hpp"

namespace subrom {

/// X-plane allocation: vertical and horizontal commands combined onto the
/// four stern planes (1 lower starboard, 2 upper starboard, 3 upper port,
/// 4 lower port) and the sail planes (5).
Vec5 allocate(double delta_v, double delta_h);

/// Plane positions with position and rate limits. Small value type owned by
/// the simulation step.
struct ActuatorState {
    Vec5 deflections = Vec5::Zero();  // rad
    Vec5 commands = Vec5::Zero();     // rad, last commanded values
    double position_limit = deg2rad(30.0);
    double rate_limit = deg2rad(10.0);  // rad/s
};

/// Move each plane toward its (position-clamped) command by at most
/// rate_limit * dt.
ActuatorState actuator_update(const ActuatorState& actuators, const Vec5& commands, double dt,
                              EventLog* events = nullptr, double time = 0.0);

struct PidGains {
    double kp = 0.0, ki = 0.0, kd = 0.0;
};

/// Scalar PID with conditional integral clamping (integral contribution is
/// kept inside the output saturation) and derivative on the error signal.
class Pid {
public:
    Pid() = default;
    Pid(const PidGains& gains, double output_limit) : gains_(gains), limit_(output_limit) {}

    double step(double error, double dt);
    void reset();
    double integral() const { return integral_; }

private:
    PidGains gains_;
    double limit_ = 1e300;
    double integral_ = 0.0;
    double prev_error_ = 0.0;
    bool primed_ = false;
};

struct AutopilotChannel {
    double weight_primary = 1.0;   // depth / lateral error weight
    double weight_attitude = 1.0;  // pitch / yaw error weight
    PidGains gains;
};

/// Direction autopilot: depth+pitch combined into delta_V, lateral+yaw into
/// delta_H. Positive delta_V commands bow-down (dive), positive delta_H a
/// starboard turn; error weights and gains assume that convention.
struct AutopilotGains {
    AutopilotChannel vertical;
    AutopilotChannel horizontal;
    double saturation = deg2rad(30.0);
};

struct AutopilotTargets {
    double depth = 0.0;    // m, inertial z
    double pitch = 0.0;    // rad
    double lateral = 0.0;  // m, inertial y
    double yaw = 0.0;      // rad
};

class Autopilot {
public:
    Autopilot() = default;
    explicit Autopilot(const AutopilotGains& gains);

    /// Returns (delta_V, delta_H).
    Vec2 step(const VehicleState& state, const AutopilotTargets& targets, double dt);
    void reset();

private:
    AutopilotGains gains_;
    Pid vertical_, horizontal_;
};

/// Inner-loop autopilot tracking pitch- and yaw-rate references by
/// manipulating delta_V and delta_H (negative delta_V raises the bow, so the
/// pitch channel is sign-flipped internally).
struct RateAutopilotGains {
    PidGains pitch{};
    PidGains yaw{};
    double saturation = deg2rad(30.0);
};

class RateAutopilot {
public:
    RateAutopilot() = default;
    explicit RateAutopilot(const RateAutopilotGains& gains);

    Vec2 step(const Vec2& rate_reference, double q, double r, double dt);
    void reset();

private:
    Pid pitch_, yaw_;
};

/// Two-state zigzag command machine: starts at -deflection, flips each time
/// the watched attitude crosses the switch angle with the sign opposite to
/// the current command.
class ZigzagScheduler {
public:
    ZigzagScheduler(double deflection, double switch_angle)
        : deflection_(deflection), switch_angle_(switch_angle), command_(-deflection) {}

    /// Feed the watched attitude (pitch for VZZ, yaw for HZZ); returns the
    /// current command after any reversal.
    double step(double attitude);

    double command() const { return command_; }
    int reversal_count() const { return reversals_; }

private:
    double deflection_;
    double switch_angle_;
    double command_;
    int reversals_ = 0;
};

}  // namespace subrom
