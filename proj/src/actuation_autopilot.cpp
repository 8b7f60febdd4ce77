#include "subrom/actuation_autopilot.hpp"

#include <algorithm>
#include <cmath>

namespace subrom {

Vec5 allocate(double delta_v, double delta_h) {
    Vec5 d;
    d << -delta_h - delta_v,
          delta_h - delta_v,
          delta_h + delta_v,
         -delta_h + delta_v,
         -delta_v;
    return d;
}

ActuatorState actuator_update(const ActuatorState& actuators, const Vec5& commands, double dt,
                              EventLog* events, double time) {
    ActuatorState next = actuators;
    next.commands = commands;
    for (int l = 0; l < 5; ++l) {
        double target = commands(l);
        if (std::abs(target) > actuators.position_limit) {
            record_event(events, evc::deflection_saturated,
                         "command for surface " + std::to_string(l + 1) + " beyond position limit",
                         time);
            target = std::clamp(target, -actuators.position_limit, actuators.position_limit);
        }
        const double max_step = actuators.rate_limit * dt;
        const double delta = std::clamp(target - actuators.deflections(l), -max_step, max_step);
        next.deflections(l) =
            std::clamp(actuators.deflections(l) + delta, -actuators.position_limit,
                       actuators.position_limit);
    }
    return next;
}

double Pid::step(double error, double dt) {
    const double d = primed_ ? (error - prev_error_) / dt : 0.0;
    prev_error_ = error;
    primed_ = true;

    integral_ += error * dt;
    if (gains_.ki != 0.0) {
        // Keep the integral contribution inside the saturation band.
        const double bound = limit_ / std::abs(gains_.ki);
        integral_ = std::clamp(integral_, -bound, bound);
    }
    const double out = gains_.kp * error + gains_.ki * integral_ + gains_.kd * d;
    return std::clamp(out, -limit_, limit_);
}

void Pid::reset() {
    integral_ = 0.0;
    prev_error_ = 0.0;
    primed_ = false;
}

Autopilot::Autopilot(const AutopilotGains& gains)
    : gains_(gains),
      vertical_(gains.vertical.gains, gains.saturation),
      horizontal_(gains.horizontal.gains, gains.saturation) {}

Vec2 Autopilot::step(const VehicleState& state, const AutopilotTargets& targets, double dt) {
    const double e_v = gains_.vertical.weight_primary * (targets.depth - state.depth()) +
                       gains_.vertical.weight_attitude * (state.pitch() - targets.pitch);
    const double e_h = gains_.horizontal.weight_primary * (targets.lateral - state.position.y()) +
                       gains_.horizontal.weight_attitude * wrap_pi(targets.yaw - state.yaw());
    return Vec2(vertical_.step(e_v, dt), horizontal_.step(e_h, dt));
}

void Autopilot::reset() {
    vertical_.reset();
    horizontal_.reset();
}

RateAutopilot::RateAutopilot(const RateAutopilotGains& gains)
    : pitch_(gains.pitch, gains.saturation), yaw_(gains.yaw, gains.saturation) {}

Vec2 RateAutopilot::step(const Vec2& rate_reference, double q, double r, double dt) {
    // Negative delta_V pitches the bow up, so a positive pitch-rate demand
    // maps to a negative vertical command.
    const double dv = -pitch_.step(rate_reference(0) - q, dt);
    const double dh = yaw_.step(rate_reference(1) - r, dt);
    return Vec2(dv, dh);
}

void RateAutopilot::reset() {
    pitch_.reset();
    yaw_.reset();
}

double ZigzagScheduler::step(double attitude) {
    const double watch_sign = command_ > 0.0 ? -1.0 : 1.0;
    if (watch_sign * attitude >= switch_angle_) {
        command_ = watch_sign * deflection_;
        ++reversals_;
    }
    return command_;
}

}  // namespace subrom
