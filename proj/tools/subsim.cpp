// Command-line front end: scenario runs, mesh validation and coefficient
// inspection on top of the library.

#include "subrom/cli_io.hpp"
#include "subrom/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace subrom;

namespace {

void print_audit(const RuntimeConfig& cfg) {
    if (!cfg.model.coeffs.defaulted_motion_coefficients.empty())
        std::cerr << "info: " << cfg.model.coeffs.defaulted_motion_coefficients.size()
                  << " motion derivatives not in the coefficient file (defaulted to zero)\n";
    if (cfg.audit.warnings.empty()) {
        std::cerr << "audit: ok, zero warnings\n";
        return;
    }
    std::cerr << "audit: ok with " << cfg.audit.warnings.size() << " warning(s)\n";
    for (const auto& w : cfg.audit.warnings)
        std::cerr << "  [" << w.code << "] " << w.message << "\n";
}

void write_outputs(const std::string& prefix, const TrajectoryLog& log, const Json& metrics) {
    write_trajectory_csv(prefix + ".csv", log);
    Json summary;
    summary["scenario"] = log.scenario;
    summary["metrics"] = metrics;
    summary["events"] = events_to_json(log.events);
    std::ofstream out(prefix + "_metrics.json");
    out << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    std::cerr << "wrote " << prefix << ".csv and " << prefix << "_metrics.json\n";
}

FollowConfig follow_config_from(const RuntimeConfig& cfg) {
    FollowConfig fc;
    fc.path = *cfg.scenario.path;
    fc.pf = cfg.pf;
    fc.speed = cfg.scenario.speed;
    fc.depth_for_trim = cfg.scenario.depth;
    fc.rate_gains = cfg.rate_autopilot;
    fc.l1_wn_pitch = cfg.l1.wn_pitch;
    fc.l1_zeta_pitch = cfg.l1.zeta_pitch;
    fc.l1_wn_yaw = cfg.l1.wn_yaw;
    fc.l1_zeta_yaw = cfg.l1.zeta_yaw;
    fc.l1_Ts = cfg.l1.sample_time;
    fc.l1_filter_bandwidth = cfg.l1.filter_bandwidth;
    fc.adaptation = cfg.scenario.adaptation;
    fc.terrain = cfg.scenario.terrain;
    fc.actuators = cfg.actuator_limits;
    return fc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-order submarine maneuvering simulator"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string config_path, output_prefix, mesh_path, path_file;
    std::string axis = "vertical", adaptation = "on", table;
    double deflection_deg = 10.0, switch_deg = 10.0, speed = -1.0, depth = -1.0;
    double duration = -1.0, heel_deg = -1.0, rudder_deg = -1.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration document")->required();
        cmd->add_option("-o,--output", output_prefix, "output file prefix");
        cmd->add_option("--duration", duration, "override duration (s)");
        cmd->add_option("--speed", speed, "override approach speed (m/s)");
        cmd->add_option("--depth", depth, "override depth (m)");
    };

    CLI::App* trim = app.add_subcommand("trim", "solve the self-propulsion point");
    add_common(trim);

    CLI::App* roll = app.add_subcommand("roll-decay", "release from an initial heel");
    add_common(roll);
    roll->add_option("--heel", heel_deg, "initial heel (deg)");

    CLI::App* turn = app.add_subcommand("turn", "fixed-rudder turning circle");
    add_common(turn);
    turn->add_option("--rudder", rudder_deg, "held horizontal command (deg)");

    CLI::App* zigzag = app.add_subcommand("zigzag", "vertical or horizontal zigzag");
    add_common(zigzag);
    zigzag->add_option("--axis", axis, "vertical|horizontal")
        ->check(CLI::IsMember({"vertical", "horizontal"}));
    zigzag->add_option("--deflection", deflection_deg, "command deflection (deg)");
    zigzag->add_option("--switch-angle", switch_deg, "reversal threshold (deg)");

    CLI::App* follow = app.add_subcommand("follow", "path following with the full stack");
    add_common(follow);
    follow->add_option("--path", path_file, "Bernstein control-point file");
    follow->add_option("--adaptation", adaptation, "on|off")
        ->check(CLI::IsMember({"on", "off"}));

    CLI::App* vmesh = app.add_subcommand("validate-mesh", "check a hull mesh");
    vmesh->add_option("--mesh", mesh_path, "ASCII triangle mesh file")->required();

    CLI::App* inspect = app.add_subcommand("inspect-coeffs", "dump an interpolated table slice");
    inspect->add_option("--config", config_path, "configuration document")->required();
    inspect->add_option("--table", table,
                        "hull.beta.<X..N> | hull.alpha.<X..N> | hull.r0 | surface.<1-5>.<X..N> | "
                        "propeller.kt | propeller.kq | propeller.t")
        ->required();
    inspect->add_option("--speed", speed, "slice speed (m/s)");
    inspect->add_option("--depth", depth, "slice depth (m)");
    inspect->add_option("-o,--output", output_prefix, "output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (vmesh->parsed()) {
            EventLog events;
            const HullMesh mesh = load_stl_mesh(mesh_path, &events);
            mesh.validate_closed();
            Json report{{"elements", mesh.element_count()},
                        {"closure_residual", mesh.closure_residual()},
                        {"total_area_m2", mesh.total_area},
                        {"warnings", events_to_json(events)["counts"]}};
            std::cout << report.dump(2) << "\n";
            return 0;
        }

        RuntimeConfig cfg = load_and_audit(config_path);
        print_audit(cfg);

        if (inspect->parsed()) {
            const double u = speed > 0 ? speed : 3.0 * kKnotsToMs;
            const double d0 = depth > 0 ? depth : 25.0;
            std::ostringstream csv;
            csv.precision(10);
            const CoefficientSet& set = cfg.model.coeffs;
            auto channel_index = [](const std::string& name) {
                const std::string channels = "XYZKMN";
                const auto pos = channels.find(name);
                if (pos == std::string::npos)
                    throw Error(errc::config_schema, "unknown channel '" + name + "'");
                return static_cast<int>(pos);
            };
            if (table.rfind("hull.beta.", 0) == 0 || table.rfind("hull.alpha.", 0) == 0) {
                const bool beta = table.rfind("hull.beta.", 0) == 0;
                const int ch = channel_index(table.substr(table.find_last_of('.') + 1));
                const Grid3& t = beta ? set.hull.beta_tables[static_cast<std::size_t>(ch)]
                                      : set.hull.alpha_tables[static_cast<std::size_t>(ch)];
                csv << (beta ? "beta_deg" : "alpha_deg") << ",coefficient\n";
                const double lo = beta ? -set.hull.max_angle : t.axis1().front();
                const double hi = beta ? set.hull.max_angle : t.axis1().back();
                for (int k = 0; k <= 100; ++k) {
                    const double ang = lo + (hi - lo) * k / 100.0;
                    double value;
                    if (beta) {
                        const double sign =
                            (ang < 0.0 && HullTable::channel_odd_in_beta(ch)) ? -1.0 : 1.0;
                        value = sign * t(u, std::abs(ang), d0);
                    } else {
                        value = t(u, ang, d0);
                    }
                    csv << rad2deg(ang) << "," << value << "\n";
                }
            } else if (table == "hull.r0") {
                csv << "speed_mps,coefficient\n";
                const GridAxis& sp = set.hull.base_resistance.axis0();
                for (int k = 0; k <= 100; ++k) {
                    const double s = sp.front() + (sp.back() - sp.front()) * k / 100.0;
                    csv << s << "," << set.hull.base_resistance(s, d0) << "\n";
                }
            } else if (table.rfind("surface.", 0) == 0) {
                const int l = std::stoi(table.substr(8, 1)) - 1;
                const int ch = channel_index(table.substr(table.find_last_of('.') + 1));
                if (l < 0 || l > 4) throw Error(errc::config_schema, "surface index 1..5");
                const auto& coeff =
                    set.control_surfaces.coeffs[static_cast<std::size_t>(l)]
                                               [static_cast<std::size_t>(ch)];
                csv << "deflection_deg,coefficient\n";
                const double lim = set.control_surfaces.max_tabulated;
                for (int k = 0; k <= 100; ++k) {
                    const double del = -lim + 2.0 * lim * k / 100.0;
                    csv << rad2deg(del) << "," << coeff.evaluate(del, u, d0) << "\n";
                }
            } else if (table == "propeller.kt" || table == "propeller.kq") {
                csv << "J,coefficient\n";
                for (int k = 0; k <= 100; ++k) {
                    const double jj = set.propeller.j_max * k / 100.0;
                    csv << jj << ","
                        << (table == "propeller.kt" ? set.propeller.kt_at(jj)
                                                    : set.propeller.kq_at(jj))
                        << "\n";
                }
            } else if (table == "propeller.t") {
                csv << "depth_m,thrust_deduction\n";
                const GridAxis& dep = set.propeller.thrust_deduction.axis1();
                for (int k = 0; k <= 100; ++k) {
                    const double dd = dep.front() + (dep.back() - dep.front()) * k / 100.0;
                    csv << dd << "," << set.propeller.thrust_deduction(u, dd) << "\n";
                }
            } else {
                throw Error(errc::config_schema, "unknown table selector '" + table + "'");
            }
            if (output_prefix.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(output_prefix);
                out << csv.str();
            }
            return 0;
        }

        // Scenario overrides from flags.
        if (speed > 0) cfg.scenario.speed = speed;
        if (depth > 0) cfg.scenario.depth = depth;
        if (duration > 0) cfg.sim.duration = duration;

        PlantDynamics plant(cfg.model, cfg.sim);

        if (trim->parsed()) {
            const double n = solve_self_propulsion(plant, cfg.scenario.speed, cfg.scenario.depth);
            Json out{{"speed_mps", cfg.scenario.speed},
                     {"depth_m", cfg.scenario.depth},
                     {"n_revps", n},
                     {"advance_ratio", cfg.scenario.speed / (n * cfg.model.coeffs.propeller.diameter)}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (roll->parsed()) {
            RollDecayConfig rd;
            rd.speed = cfg.scenario.speed;
            rd.depth = cfg.scenario.depth;
            rd.heel = heel_deg > 0 ? deg2rad(heel_deg) : cfg.scenario.heel;
            rd.propulsion = cfg.scenario.propulsion;
            const TrajectoryLog log = run_roll_decay(plant, cfg.sim, rd);
            write_outputs(output_prefix.empty() ? "roll_decay" : output_prefix, log,
                          Json{{"final_roll_rad", log.rows.back().state.roll()}});
            return 0;
        }
        if (turn->parsed()) {
            TurnConfig tc;
            tc.speed = cfg.scenario.speed;
            tc.depth = cfg.scenario.depth;
            tc.rudder = rudder_deg > 0 ? deg2rad(rudder_deg) : cfg.scenario.rudder;
            tc.actuators = cfg.actuator_limits;
            tc.autopilot = cfg.autopilot;
            const TrajectoryLog log = run_turn(plant, cfg.sim, tc);
            write_outputs(output_prefix.empty() ? "turn" : output_prefix, log,
                          turn_metrics_to_json(turn_metrics(log)));
            return 0;
        }
        if (zigzag->parsed()) {
            ZigzagConfig zz;
            zz.speed = cfg.scenario.speed;
            zz.depth = cfg.scenario.depth;
            zz.deflection = zigzag->count("--deflection") ? deg2rad(deflection_deg)
                                                          : cfg.scenario.deflection;
            zz.switch_angle = zigzag->count("--switch-angle") ? deg2rad(switch_deg)
                                                              : cfg.scenario.switch_angle;
            zz.horizontal = zigzag->count("--axis") ? axis == "horizontal"
                                                    : cfg.scenario.horizontal;
            zz.actuators = cfg.actuator_limits;
            const TrajectoryLog log = run_zigzag(plant, cfg.sim, zz);
            const ZigzagMetrics m = zigzag_metrics(log, zz.switch_angle, zz.horizontal);
            write_outputs(output_prefix.empty() ? (zz.horizontal ? "hzz" : "vzz") : output_prefix,
                          log, zigzag_metrics_to_json(m));
            return 0;
        }
        if (follow->parsed()) {
            if (!path_file.empty()) {
                cfg.scenario.path = load_path(path_file);
                cfg.scenario.path_file = path_file;
            }
            if (!cfg.scenario.path)
                throw Error(errc::config_schema,
                            "follow needs --path or a scenario path in the config");
            if (follow->count("--adaptation")) cfg.scenario.adaptation = adaptation == "on";
            if (cfg.scenario.kind != ScenarioKind::Follow) {
                cfg.scenario.kind = ScenarioKind::Follow;
                const FramedPath framed(*cfg.scenario.path);
                audit_pf_config(cfg.pf, framed, cfg.scenario.speed);
            }
            const FollowConfig fc = follow_config_from(cfg);
            const TrajectoryLog log = run_follow(plant, cfg.sim, fc);
            write_outputs(output_prefix.empty() ? "follow" : output_prefix, log,
                          follow_metrics_to_json(follow_metrics(log)));
            return 0;
        }
    } catch (const Error& e) {
        Json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        Json err{{"error", {{"code", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
