// Writes the bundled sample assets (SYNTHETIC coefficient set, hull mesh,
// canyon path, ready-to-run scenario configs) into a target directory.

#include "subrom/cli_io.hpp"
#include "subrom/mesh_primitives.hpp"
#include "subrom/synthetic_assets.hpp"

#include <fstream>
#include <iostream>

using namespace subrom;

namespace {

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

Json unit(double v, const char* u) { return Json{{"value", v}, {"unit", u}}; }

Json base_config(const std::string& scenario_kind) {
    const MassProperties mp = synthetic::bb2_mass_properties();
    Json j;
    j["schema_version"] = 1;
    j["vehicle"] = {
        {"length", unit(70.2, "m")},
        {"mass", unit(4440.0, "t")},
        {"cg", Json{{"value", {mp.cg.x(), mp.cg.y(), mp.cg.z()}}, {"unit", "m"}}},
        {"cb", Json{{"value", {mp.cb.x(), mp.cb.y(), mp.cb.z()}}, {"unit", "m"}}},
        {"gyration_radii", Json{{"value", {3.433, 17.6, 17.522}}, {"unit", "m"}}},
    };
    j["coefficients"] = "coefficients_bb2_synthetic.json";
    j["environment"] = {{"density", unit(1025.0, "kg/m^3")}, {"gravity", unit(9.81, "m/s^2")}};
    j["simulation"] = {{"dt", unit(0.05, "s")}, {"duration", unit(600.0, "s")},
                       {"output_decimation", 4}};
    j["actuators"] = {{"position_limit", unit(30.0, "deg")}, {"rate_limit", unit(10.0, "deg/s")}};
    j["rate_autopilot"] = {{"pitch", {{"kp", 80.0}, {"ki", 0.0}, {"kd", 0.0}}},
                           {"yaw", {{"kp", 80.0}, {"ki", 0.0}, {"kd", 0.0}}},
                           {"saturation", unit(30.0, "deg")}};
    j["autopilot"] = {{"vertical",
                       {{"weight_primary", 1.0},
                        {"weight_attitude", 40.0},
                        {"gains", {{"kp", 0.002}, {"ki", 0.0}, {"kd", 0.04}}}}},
                      {"horizontal",
                       {{"weight_primary", 1.0},
                        {"weight_attitude", 40.0},
                        {"gains", {{"kp", 0.002}, {"ki", 0.0}, {"kd", 0.04}}}}},
                      {"saturation", unit(25.0, "deg")}};
    j["pf"] = {{"k_gamma", 0.05}, {"k_R", 0.05},     {"d", unit(60.0, "m")},
               {"c", 0.12},       {"c1", unit(50.0, "m")}, {"lambda", 1e-5},
               {"delta_lambda", 0.5}, {"v_min", unit(2.0, "m/s")},
               {"omega_c_max", unit(0.05, "rad/s")}, {"omega_T_max", unit(0.001, "rad/s")}};
    j["l1"] = {{"wn_pitch", unit(0.15, "rad/s")}, {"zeta_pitch", 1.0},
               {"wn_yaw", unit(0.15, "rad/s")},   {"zeta_yaw", 1.0},
               {"sample_time", unit(0.01, "s")},  {"filter_bandwidth", unit(0.01, "rad/s")}};
    if (scenario_kind == "zigzag") {
        j["scenario"] = {{"kind", "zigzag"},
                         {"axis", "vertical"},
                         {"speed", unit(6.0, "kts")},
                         {"depth", unit(50.0, "m")},
                         {"deflection", unit(10.0, "deg")},
                         {"switch_angle", unit(10.0, "deg")}};
    } else if (scenario_kind == "follow") {
        const TerrainGrid terrain = synthetic::canyon_terrain();
        j["scenario"] = {{"kind", "follow"},
                         {"speed", unit(4.0, "m/s")},
                         {"depth", unit(60.0, "m")},
                         {"path", "path_canyon.json"},
                         {"adaptation", true},
                         {"terrain",
                          {{"x_axis", Json{{"value", terrain.floor_depth.axis0().values},
                                           {"unit", "m"}}},
                           {"y_axis", Json{{"value", terrain.floor_depth.axis1().values},
                                           {"unit", "m"}}},
                           {"floor_depth",
                            [&] {
                                Json rows = Json::array();
                                for (std::size_t i = 0; i < terrain.floor_depth.axis0().size(); ++i) {
                                    Json row = Json::array();
                                    for (std::size_t k = 0; k < terrain.floor_depth.axis1().size();
                                         ++k)
                                        row.push_back(terrain.floor_depth.at(i, k));
                                    rows.push_back(row);
                                }
                                return rows;
                            }()},
                           {"min_clearance", unit(10.0, "m")}}}};
    } else if (scenario_kind == "roll_decay") {
        j["scenario"] = {{"kind", "roll_decay"},
                         {"speed", unit(4.0, "kts")},
                         {"depth", unit(50.0, "m")},
                         {"heel", unit(15.0, "deg")},
                         {"propulsion", true}};
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = (argc > 1 ? std::string(argv[1]) : std::string("assets")) + "/";
    try {
        Json coeffs = coefficients_to_json(synthetic::bb2_coefficients());
        coeffs["provenance"] =
            "SYNTHETIC: shaped on published qualitative trends (linear lateral force and "
            "moments in drift angle, plane stall saturation, near-surface thrust-deduction "
            "rise with a shallow dip), not measured data";
        write_json(dir + "coefficients_bb2_synthetic.json", coeffs);

        Json path = path_to_json(synthetic::canyon_path());
        path["provenance"] = "SYNTHETIC approximation of a canyon thalweg-following path";
        write_json(dir + "path_canyon.json", path);

        write_stl_mesh(dir + "hull_bb2.stl", make_revolved_hull(), "bb2_hull_synthetic");

        write_json(dir + "config_vzz.json", base_config("zigzag"));
        write_json(dir + "config_follow_canyon.json", base_config("follow"));
        write_json(dir + "config_roll_decay.json", base_config("roll_decay"));

        // Variant exercising the out-of-range speed warning (15 kts > table).
        Json fast = base_config("zigzag");
        fast["scenario"]["speed"] = Json{{"value", 15.0}, {"unit", "kts"}};
        write_json(dir + "config_vzz_15kts.json", fast);

        // Mesh-buoyancy variant with the neutral-buoyant start and a seaway.
        Json meshcfg = base_config("roll_decay");
        meshcfg["mesh"] = "hull_bb2.stl";
        meshcfg["vehicle"]["buoyancy_mode"] = "neutral_from_mesh";
        meshcfg["simulation"]["mesh_buoyancy"] = true;
        meshcfg["wave"] = {{"amplitude", unit(1.0, "m")},
                           {"wavelength", unit(150.0, "m")},
                           {"heading", unit(0.0, "deg")}};
        write_json(dir + "config_waves.json", meshcfg);
    } catch (const std::exception& e) {
        std::cerr << "asset generation failed: " << e.what() << "\n";
        return 1;
    }
    std::cout << "assets written to " << dir << "\n";
    return 0;
}
