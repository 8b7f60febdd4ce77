#include "subrom/simulator.hpp"

#include "subrom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subrom {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw Error(errc::sim_invalid_config, "integrator step must be positive");
    if (duration < dt)
        throw Error(errc::sim_invalid_config, "duration must cover at least one step");
    if (output_decimation < 1)
        throw Error(errc::sim_invalid_config, "output decimation must be >= 1");
    if (!(env.rho > 0.0) || !(env.g > 0.0))
        throw Error(errc::sim_invalid_config, "environment constants must be positive");
}

PlantDynamics::PlantDynamics(const VehicleModel& model, const SimConfig& config)
    : model_(model), config_(config) {
    config_.validate();
    model_.mass.validate();
    if (config_.mesh_buoyancy && !model_.mesh)
        throw Error(errc::sim_invalid_config, "mesh buoyancy mode requires a hull mesh");
    if (model_.wave && !config_.mesh_buoyancy)
        throw Error(errc::sim_invalid_config,
                    "wave loads require the mesh pressure-integration mode");
    const Mat6 rigid = build_mass_matrix(model_.mass);
    const Mat6 b_acc = coupling_acceleration_matrix(model_.mass);
    const Mat6 added = added_mass_matrix(model_.coeffs.motion, model_.coeffs.reference_length,
                                         config_.env.rho);
    m_total_ = rigid + b_acc - added;
    lu_.compute(m_total_);
    if (std::abs(lu_.determinant()) < 1e-6)
        throw Error(errc::sim_invalid_config, "combined mass matrix is singular");
}

Derivative PlantDynamics::evaluate(const VehicleState& state, const Vec5& deflections, double n,
                                   double t, EventLog* events) const {
    const double L = model_.coeffs.reference_length;
    const double rho = config_.env.rho;
    const FlowState flow =
        FlowState::from_velocity(state.velocity.head<3>(), sail_top_depth(state));

    Derivative d;
    d.forces.hull = hull_drift_loads(flow, model_.coeffs.hull, L, rho,
                                     model_.coeffs.normalization, events, t);
    d.forces.motion_coupling = motion_coupling_loads(state.velocity, model_.coeffs.motion, L, rho);
    d.forces.control_surface =
        control_surface_loads(deflections, flow.u, flow.depth, model_.coeffs.control_surfaces, L,
                              rho, model_.coeffs.normalization, events, t);
    if (n > 0.0)
        d.forces.propeller =
            propeller_loads(flow.u, n, flow, model_.coeffs.propeller, rho, events, t).force;

    if (config_.mesh_buoyancy) {
        d.forces.hydrostatic = weight_load(model_.mass, state.roll(), state.pitch());
        WaveField wf;
        if (model_.wave) {
            wf = *model_.wave;
        } else {
            wf.amplitude = 0.0;
            wf.rho = rho;
            wf.g = config_.env.g;
        }
        d.forces.wave_mesh = integrate_pressure_loads(*model_.mesh, state, wf, t);
    } else {
        d.forces.hydrostatic = hydrostatic_restoring(model_.mass, state.roll(), state.pitch());
    }
    d.forces.coupling_b = coupling_velocity_part(model_.mass, state.velocity);

    const Vec6 rhs = d.forces.hydrostatic + d.forces.wave_mesh + d.forces.hull +
                     d.forces.motion_coupling + d.forces.control_surface + d.forces.propeller +
                     model_.external_load - d.forces.coupling_b;
    d.s_dot = lu_.solve(rhs);

    const KinematicRates rates = euler_kinematics(state, config_.pitch_guard);
    d.position_rate = rates.position_rate;
    d.attitude_rate = rates.attitude_rate;
    return d;
}

namespace {

VehicleState advance(const VehicleState& s, const Derivative& d, double h) {
    VehicleState next = s;
    next.position += h * d.position_rate;
    next.attitude += h * d.attitude_rate;
    next.velocity += h * d.s_dot;
    return next;
}

}  // namespace

VehicleState PlantDynamics::step_rk4(const VehicleState& state, const Vec5& deflections, double n,
                                     double t, double dt, EventLog* events) const {
    const Derivative k1 = evaluate(state, deflections, n, t, events);
    const Derivative k2 = evaluate(advance(state, k1, dt / 2.0), deflections, n, t + dt / 2.0,
                                   events);
    const Derivative k3 = evaluate(advance(state, k2, dt / 2.0), deflections, n, t + dt / 2.0,
                                   events);
    const Derivative k4 = evaluate(advance(state, k3, dt), deflections, n, t + dt, events);

    VehicleState next = state;
    next.position += dt / 6.0 * (k1.position_rate + 2.0 * k2.position_rate +
                                 2.0 * k3.position_rate + k4.position_rate);
    next.attitude += dt / 6.0 * (k1.attitude_rate + 2.0 * k2.attitude_rate +
                                 2.0 * k3.attitude_rate + k4.attitude_rate);
    next.velocity +=
        dt / 6.0 * (k1.s_dot + 2.0 * k2.s_dot + 2.0 * k3.s_dot + k4.s_dot);

    if (!next.position.allFinite() || !next.attitude.allFinite() || !next.velocity.allFinite()) {
        std::ostringstream dump;
        dump << "divergence at t = " << t << "; state: pos [" << state.position.transpose()
             << "] att [" << state.attitude.transpose() << "] vel ["
             << state.velocity.transpose() << "]";
        throw Error(errc::sim_divergence, dump.str());
    }
    return next;
}

double solve_self_propulsion(const PlantDynamics& plant, double speed, double depth) {
    VehicleState st;
    st.position.z() = depth;
    st.velocity(0) = speed;
    auto net_surge = [&](double n) {
        return plant.evaluate(st, Vec5::Zero(), n, 0.0).forces.propeller(0) +
               plant.evaluate(st, Vec5::Zero(), n, 0.0).forces.hull(0);
    };
    double lo = 0.1, hi = 20.0;
    double f_lo = net_surge(lo), f_hi = net_surge(hi);
    if (f_lo * f_hi > 0.0)
        throw Error(errc::sim_trim_bracket,
                    "self-propulsion bisection cannot bracket a zero net surge force");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = net_surge(mid);
        if (std::abs(f_mid) < 1e-6) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

struct Recorder {
    TrajectoryLog log;
    int decimation;
    int counter = 0;

    explicit Recorder(const SimConfig& cfg, std::string name) : decimation(cfg.output_decimation) {
        log.scenario = std::move(name);
        log.dt = cfg.dt;
        log.decimation = cfg.output_decimation;
    }

    void push(LogRow row) {
        if (counter++ % decimation == 0) log.rows.push_back(std::move(row));
    }
};

}  // namespace

TrajectoryLog run_roll_decay(const PlantDynamics& plant, const SimConfig& cfg,
                             const RollDecayConfig& rd) {
    cfg.validate();
    const double n = rd.propulsion ? solve_self_propulsion(plant, rd.speed, rd.depth) : 0.0;
    VehicleState st;
    st.position.z() = rd.depth;
    st.attitude.x() = rd.heel;
    st.velocity(0) = rd.speed;
    st.velocity += rd.initial_velocity_offset;

    Recorder rec(cfg, "roll_decay");
    const int steps = static_cast<int>(std::round(cfg.duration / cfg.dt));
    for (int k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt;
        LogRow row;
        row.t = t;
        row.state = st;
        row.n = n;
        row.forces = plant.evaluate(st, Vec5::Zero(), n, t).forces;
        rec.push(std::move(row));
        if (k < steps) st = plant.step_rk4(st, Vec5::Zero(), n, t, cfg.dt, &rec.log.events);
    }
    return rec.log;
}

TrajectoryLog run_turn(const PlantDynamics& plant, const SimConfig& cfg, const TurnConfig& tc) {
    cfg.validate();
    const double n = solve_self_propulsion(plant, tc.speed, tc.depth);
    VehicleState st;
    st.position.z() = tc.depth;
    st.velocity(0) = tc.speed;
    ActuatorState act = tc.actuators;
    Autopilot depth_hold(tc.autopilot);
    AutopilotTargets targets;
    targets.depth = tc.depth;

    Recorder rec(cfg, "turn");
    const int steps = static_cast<int>(std::round(cfg.duration / cfg.dt));
    for (int k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt;
        Vec2 vh = Vec2::Zero();
        if (!cfg.frozen_controls) {
            vh(0) = depth_hold.step(st, targets, cfg.dt)(0);
            vh(1) = tc.rudder;
        }
        act = actuator_update(act, allocate(vh(0), vh(1)), cfg.dt, &rec.log.events, t);
        LogRow row;
        row.t = t;
        row.state = st;
        row.deflections = act.deflections;
        row.command_vh = vh;
        row.n = n;
        rec.push(std::move(row));
        if (k < steps)
            st = plant.step_rk4(st, act.deflections, n, t, cfg.dt, &rec.log.events);
    }
    return rec.log;
}

TrajectoryLog run_zigzag(const PlantDynamics& plant, const SimConfig& cfg,
                         const ZigzagConfig& zz) {
    cfg.validate();
    const double n = solve_self_propulsion(plant, zz.speed, zz.depth);
    VehicleState st;
    st.position.z() = zz.depth;
    st.attitude = zz.initial_attitude;
    st.velocity(0) = zz.speed;
    st.velocity += zz.initial_velocity_offset;
    ActuatorState act = zz.actuators;
    ZigzagScheduler scheduler(zz.deflection, zz.switch_angle);
    const double sign = zz.command_sign >= 0 ? 1.0 : -1.0;

    Recorder rec(cfg, zz.horizontal ? "hzz" : "vzz");
    const int steps = static_cast<int>(std::round(cfg.duration / cfg.dt));
    for (int k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt;
        const double watched = zz.horizontal ? st.yaw() : st.pitch();
        const double command = sign * scheduler.step(sign * watched);
        const Vec2 vh = zz.horizontal ? Vec2(0.0, command) : Vec2(command, 0.0);
        act = actuator_update(act, allocate(vh(0), vh(1)), cfg.dt, &rec.log.events, t);

        LogRow row;
        row.t = t;
        row.state = st;
        row.deflections = act.deflections;
        row.command_vh = vh;
        row.n = n;
        rec.push(std::move(row));
        if (k < steps)
            st = plant.step_rk4(st, act.deflections, n, t, cfg.dt, &rec.log.events);
    }
    return rec.log;
}

namespace {

Mat3 flow_frame(const VehicleState& st) {
    const Mat3 R = body_to_inertial(st.attitude);
    const Vec3 vel_inertial = R * st.velocity.head<3>();
    const Vec3 w1 = vel_inertial.normalized();
    Vec3 y_raw = R.col(1) - R.col(1).dot(w1) * w1;
    if (y_raw.norm() < 1e-9) y_raw = R.col(2) - R.col(2).dot(w1) * w1;
    const Vec3 w2 = y_raw.normalized();
    Mat3 W;
    W.col(0) = w1;
    W.col(1) = w2;
    W.col(2) = w1.cross(w2);
    return W;
}

}  // namespace

TrajectoryLog run_follow(const PlantDynamics& plant, const SimConfig& cfg,
                         const FollowConfig& fc) {
    cfg.validate();
    fc.pf.validate();
    const FramedPath path(fc.path);

    // L1 sample clock must be commensurate with the integrator step.
    const double ratio = fc.l1_Ts >= cfg.dt ? fc.l1_Ts / cfg.dt : cfg.dt / fc.l1_Ts;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw Error(errc::sim_invalid_config,
                    "L1 sample time must be an integer multiple or divisor of dt");

    const double n = solve_self_propulsion(plant, fc.speed, fc.depth_for_trim);

    const PathSample start = path.eval(0.0);
    const Mat3 R_T0 = path.frame(0.0).rotation;
    VehicleState st;
    st.position = start.position;
    // Initial attitude: level, heading along the path tangent.
    st.attitude = Vec3(0.0, 0.0, std::atan2(R_T0.col(0).y(), R_T0.col(0).x()));
    st.velocity(0) = fc.speed;

    DesiredModel desired = DesiredModel::second_order_channels(
        fc.l1_wn_pitch, fc.l1_zeta_pitch, fc.l1_wn_yaw, fc.l1_zeta_yaw, fc.l1_Ts);
    L1Controller l1(desired, MatX::Identity(desired.order(), desired.order()),
                    first_order_lowpass(fc.l1_filter_bandwidth), fc.adaptation);
    RateAutopilot rate_ap(fc.rate_gains);
    ActuatorState act = fc.actuators;
    DesiredFrameState dstate;

    double gamma = 0.0;
    double next_sample = 0.0;
    Vec2 u_ad = Vec2::Zero();

    Recorder rec(cfg, "follow");
    const int steps = static_cast<int>(std::round(cfg.duration / cfg.dt));
    for (int k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt;
        const double v = st.velocity.head<3>().norm();
        const Mat3 R_W = flow_frame(st);
        const double gdot = gamma_rate(v, R_W.col(0), st.position, path, gamma, fc.pf.k_gamma);
        const DesiredFrame df =
            desired_frame(st.position, path, gamma, fc.pf.d, dstate, cfg.dt, &rec.log.events, t);
        const AttitudeError ae = attitude_error(R_W, df.R_D_I);
        const TransportFrame tf = path.frame(gamma);
        const Vec2 wc = rate_commands(ae.R_tilde, tf.angular_velocity * gdot, df.omega_DT_D,
                                      df.R_T_D, fc.pf.k_R, ae.e_R, fc.pf.omega_c_max,
                                      &rec.log.events, t);

        while (t >= next_sample - 1e-9) {
            const Vec2 y(st.velocity(4), st.velocity(5));  // measured (q, r), held between
            u_ad = l1.step(wc, y);                         // plant updates when T_s < dt
            next_sample += fc.l1_Ts;
        }
        const Vec2 vh = rate_ap.step(u_ad, st.velocity(4), st.velocity(5), cfg.dt);
        act = actuator_update(act, allocate(vh(0), vh(1)), cfg.dt, &rec.log.events, t);

        LogRow row;
        row.t = t;
        row.state = st;
        row.deflections = act.deflections;
        row.command_vh = vh;
        row.n = n;
        row.gamma = gamma;
        row.p_T = position_error(st.position, path, gamma);
        row.psi = ae.Psi;
        row.rate_command = wc;
        row.u_ad = u_ad;
        row.rate_saturated = wc.norm() >= fc.pf.omega_c_max * (1.0 - 1e-12);
        const Vec3 target = path.eval(gamma).position;
        row.vertical_error = st.position.z() - target.z();
        row.horizontal_error = (st.position.head<2>() - target.head<2>()).norm();
        if (fc.terrain) {
            const double floor = fc.terrain->floor_depth(st.position.x(), st.position.y());
            if (floor - st.position.z() < fc.terrain->min_clearance)
                record_event(&rec.log.events, evc::terrain_clearance,
                             "clearance below minimum", t);
        }
        rec.push(std::move(row));

        if (k < steps) {
            st = plant.step_rk4(st, act.deflections, n, t, cfg.dt, &rec.log.events);
            st.normalize_angles();
            gamma = std::clamp(gamma + gdot * cfg.dt, 0.0, path.final_time());
            if (gamma >= path.final_time() - 1e-9) break;  // reached the end of the path
        }
    }
    return rec.log;
}

namespace {

double watched_attitude(const LogRow& row, bool horizontal) {
    return horizontal ? row.state.yaw() : row.state.pitch();
}

}  // namespace

ZigzagMetrics zigzag_metrics(const TrajectoryLog& log, double switch_angle, bool horizontal) {
    ZigzagMetrics m;
    if (log.rows.size() < 3) {
        m.complete = false;
        return m;
    }
    m.initial_speed = log.rows.front().state.velocity(0);
    m.min_speed = m.initial_speed;
    double min_depth = log.rows.front().state.depth(), max_depth = min_depth;

    // Reversal instants from the recorded command channel.
    std::vector<std::size_t> reversals;
    const int cmd_col = horizontal ? 1 : 0;
    for (std::size_t k = 1; k < log.rows.size(); ++k) {
        const double prev = log.rows[k - 1].command_vh(cmd_col);
        const double curr = log.rows[k].command_vh(cmd_col);
        if (prev != curr && prev != 0.0) reversals.push_back(k);
        m.min_speed = std::min(m.min_speed, log.rows[k].state.velocity(0));
        min_depth = std::min(min_depth, log.rows[k].state.depth());
        max_depth = std::max(max_depth, log.rows[k].state.depth());
    }
    m.depth_envelope = max_depth - min_depth;

    // First positive peak of the watched attitude.
    for (std::size_t k = 1; k + 1 < log.rows.size(); ++k) {
        const double a0 = watched_attitude(log.rows[k - 1], horizontal);
        const double a1 = watched_attitude(log.rows[k], horizontal);
        const double a2 = watched_attitude(log.rows[k + 1], horizontal);
        if (a1 > 0.0 && a1 >= a0 && a1 >= a2) {
            m.t_first_peak = log.rows[k].t;
            break;
        }
    }

    // Overshoot beyond the switch angle after each reversal.
    for (std::size_t r = 0; r < reversals.size(); ++r) {
        const std::size_t from = reversals[r];
        const std::size_t to = r + 1 < reversals.size() ? reversals[r + 1] : log.rows.size();
        double extremum = 0.0;
        for (std::size_t k = from; k < to; ++k)
            extremum = std::max(extremum, std::abs(watched_attitude(log.rows[k], horizontal)));
        m.overshoot_angles.push_back(extremum - switch_angle);
    }

    // Periods between same-direction reversals.
    for (std::size_t r = 0; r + 2 < reversals.size(); ++r)
        m.periods.push_back(log.rows[reversals[r + 2]].t - log.rows[reversals[r]].t);
    m.complete = reversals.size() >= 4;
    return m;
}

FollowMetrics follow_metrics(const TrajectoryLog& log) {
    FollowMetrics m;
    if (log.rows.empty()) return m;
    double sum_v = 0.0, sum_h = 0.0;
    for (const LogRow& row : log.rows) {
        const double v = std::abs(row.vertical_error);
        const double h = row.horizontal_error;
        sum_v += v;
        sum_h += h;
        if (v > m.max_vertical_error) {
            m.max_vertical_error = v;
            m.t_max_vertical = row.t;
        }
        if (h > m.max_horizontal_error) {
            m.max_horizontal_error = h;
            m.t_max_horizontal = row.t;
        }
    }
    m.mean_vertical_error = sum_v / static_cast<double>(log.rows.size());
    m.mean_horizontal_error = sum_h / static_cast<double>(log.rows.size());
    m.clearance_violations = log.events.count(evc::terrain_clearance);
    return m;
}

TurnMetrics turn_metrics(const TrajectoryLog& log) {
    TurnMetrics m;
    if (log.rows.empty()) {
        m.complete = false;
        return m;
    }
    const double psi0 = log.rows.front().state.yaw();
    bool got90 = false, got180 = false;
    for (const LogRow& row : log.rows) {
        const double turned = std::abs(wrap_pi(row.state.yaw() - psi0));
        if (!got90 && turned >= kPi / 2.0) {
            m.advance = row.state.position.x() - log.rows.front().state.position.x();
            m.transfer = std::abs(row.state.position.y() - log.rows.front().state.position.y());
            got90 = true;
        }
        if (!got180 && turned >= kPi - 1e-3) {
            m.tactical_diameter =
                std::abs(row.state.position.y() - log.rows.front().state.position.y());
            got180 = true;
        }
    }
    m.complete = got90 && got180;
    return m;
}

}  // namespace subrom
