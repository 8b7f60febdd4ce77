#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subrom/actuation_autopilot.hpp"

#include <limits>
#include <random>

using namespace subrom;

TEST_CASE("allocation: basis inputs match the five-plane pattern") {
    Vec5 v;
    v << -1, -1, 1, 1, -1;
    CHECK((allocate(1.0, 0.0) - v).cwiseAbs().maxCoeff() == 0.0);
    Vec5 h;
    h << -1, 1, 1, -1, 0;
    CHECK((allocate(0.0, 1.0) - h).cwiseAbs().maxCoeff() == 0.0);
    CHECK(allocate(0.0, 0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("allocation: linear, stern-plane sum is zero") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-0.6, 0.6);
    for (int k = 0; k < 100; ++k) {
        const double dv = dist(rng), dh = dist(rng), a = dist(rng);
        const Vec5 scaled = allocate(a * dv, a * dh);
        const Vec5 base = allocate(dv, dh);
        CHECK((scaled - a * base).cwiseAbs().maxCoeff() <
              4.0 * std::numeric_limits<double>::epsilon());
        CHECK(base.head<4>().sum() == 0.0);
    }
}

TEST_CASE("actuator update: hold, rate limit, settle at position limit") {
    ActuatorState act;
    act.deflections.setConstant(0.1);
    const ActuatorState held = actuator_update(act, act.deflections, 0.05);
    CHECK((held.deflections - act.deflections).cwiseAbs().maxCoeff() == 0.0);

    Vec5 far = Vec5::Constant(deg2rad(25.0));
    const ActuatorState stepped = actuator_update(act, far, 0.05);
    CHECK(stepped.deflections(0) == doctest::Approx(0.1 + act.rate_limit * 0.05));

    ActuatorState runaway;
    EventLog log;
    for (int i = 0; i < 500; ++i)
        runaway = actuator_update(runaway, Vec5::Constant(deg2rad(90.0)), 0.05, &log);
    CHECK(runaway.deflections(2) == doctest::Approx(runaway.position_limit));
    CHECK(log.count(evc::deflection_saturated) == 500 * 5);
}

TEST_CASE("actuator update: trajectories stay within limits for random commands") {
    ActuatorState act;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> cmd(-1.2, 1.2);
    const double dt = 0.05;
    Vec5 prev = act.deflections;
    for (int k = 0; k < 400; ++k) {
        Vec5 c;
        for (int i = 0; i < 5; ++i) c(i) = cmd(rng);
        act = actuator_update(act, c, dt);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(act.deflections(i)) <= act.position_limit + 1e-15);
            CHECK(std::abs(act.deflections(i) - prev(i)) <= act.rate_limit * dt + 1e-15);
        }
        prev = act.deflections;
    }
}

TEST_CASE("autopilot: zero error gives zero command") {
    AutopilotGains gains;
    gains.vertical.gains = {0.5, 0.1, 0.2};
    gains.horizontal.gains = {0.5, 0.1, 0.2};
    Autopilot ap(gains);
    VehicleState st;
    const Vec2 out = ap.step(st, AutopilotTargets{}, 0.05);
    CHECK(out.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("autopilot: proportional-only depth error") {
    AutopilotGains gains;
    gains.vertical.weight_primary = 1.0;
    gains.vertical.gains = {0.1, 0.0, 0.0};
    Autopilot ap(gains);
    VehicleState st;
    st.position.z() = 40.0;
    AutopilotTargets t;
    t.depth = 43.0;  // deeper target: dive, positive delta_V
    const Vec2 out = ap.step(st, t, 0.05);
    CHECK(out(0) == doctest::Approx(0.1 * 3.0));  // below saturation
    CHECK(out(1) == 0.0);
}

TEST_CASE("pid: three-step hand simulation") {
    // Hand oracle: kp e + ki sum(e dt) + kd (e-e_prev)/dt, derivative zero on
    // the first sample.
    const PidGains g{2.0, 0.5, 0.1};
    Pid pid(g, 100.0);
    const double dt = 0.1;
    const double e[3] = {1.0, 0.7, 0.4};
    double integral = 0.0;
    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        integral += e[i] * dt;
        const double expected =
            2.0 * e[i] + 0.5 * integral + (i == 0 ? 0.0 : 0.1 * (e[i] - prev) / dt);
        prev = e[i];
        CHECK(pid.step(e[i], dt) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("pid: anti-windup pins output and keeps the integral bounded") {
    Pid pid({1.0, 0.4, 0.0}, 0.5);
    double out = 0.0;
    for (int i = 0; i < 2000; ++i) out = pid.step(2.0, 0.05);
    CHECK(out == doctest::Approx(0.5));
    CHECK(std::abs(pid.integral()) <= 0.5 / 0.4 + 1e-12);
    // With a clamped integral the output must unwind promptly.
    for (int i = 0; i < 40; ++i) out = pid.step(-2.0, 0.05);
    CHECK(out < 0.0);
}

TEST_CASE("rate autopilot: sign conventions") {
    RateAutopilotGains g;
    g.pitch = {1.0, 0.0, 0.0};
    g.yaw = {1.0, 0.0, 0.0};
    RateAutopilot ap(g);
    // Positive pitch-rate demand -> negative (bow-up) vertical command.
    const Vec2 out = ap.step(Vec2(0.1, 0.2), 0.0, 0.0, 0.05);
    CHECK(out(0) == doctest::Approx(-0.1));
    CHECK(out(1) == doctest::Approx(0.2));
}

TEST_CASE("zigzag scheduler: protocol and hysteresis") {
    const double A = deg2rad(10.0), S = deg2rad(10.0);
    ZigzagScheduler zz(A, S);
    CHECK(zz.command() == doctest::Approx(-A));

    // Oscillation below the threshold: no switch.
    for (double pitch : {0.02, 0.05, -0.03, 0.08, 0.1})
        CHECK(zz.step(pitch) == doctest::Approx(-A));
    CHECK(zz.reversal_count() == 0);

    CHECK(zz.step(S + 0.001) == doctest::Approx(+A));
    CHECK(zz.reversal_count() == 1);
    // Still above the old threshold: the new watch side is negative pitch.
    CHECK(zz.step(S + 0.01) == doctest::Approx(+A));
    CHECK(zz.step(-S) == doctest::Approx(-A));
    CHECK(zz.reversal_count() == 2);
}

TEST_CASE("zigzag scheduler: consecutive reversals alternate sign") {
    ZigzagScheduler zz(deg2rad(10.0), deg2rad(10.0));
    double prev_command = zz.command();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    double pitch = 0.0;
    for (int k = 0; k < 4000; ++k) {
        // Crude servo: pitch chases the opposite of the command.
        pitch += 0.01 * (-zz.command() - pitch) + 0.002 * noise(rng);
        const double cmd = zz.step(pitch);
        if (cmd != prev_command) {
            CHECK(cmd == doctest::Approx(-prev_command));
            prev_command = cmd;
        }
    }
    CHECK(zz.reversal_count() >= 3);
}
