#include "subrom/cli_io.hpp"

#include "subrom/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace subrom {

namespace {

constexpr int kSchemaVersion = 1;

enum class Dim { Length, Mass, Force, Time, Speed, Angle, AngularRate, Rotation, Density, Accel };

const std::map<Dim, std::map<std::string, double>>& unit_table() {
    static const std::map<Dim, std::map<std::string, double>> table = {
        {Dim::Length, {{"m", 1.0}, {"km", 1000.0}}},
        {Dim::Mass, {{"kg", 1.0}, {"t", 1000.0}}},
        {Dim::Force, {{"N", 1.0}, {"kN", 1000.0}, {"MN", 1e6}}},
        {Dim::Time, {{"s", 1.0}, {"min", 60.0}, {"h", 3600.0}}},
        {Dim::Speed, {{"m/s", 1.0}, {"kts", kKnotsToMs}, {"km/h", 1.0 / 3.6}}},
        {Dim::Angle, {{"rad", 1.0}, {"deg", kPi / 180.0}}},
        {Dim::AngularRate, {{"rad/s", 1.0}, {"deg/s", kPi / 180.0}}},
        {Dim::Rotation, {{"rev/s", 1.0}, {"Hz", 1.0}, {"rpm", 1.0 / 60.0}}},
        {Dim::Density, {{"kg/m^3", 1.0}}},
        {Dim::Accel, {{"m/s^2", 1.0}}},
    };
    return table;
}

std::string si_unit(Dim dim) {
    switch (dim) {
        case Dim::Length: return "m";
        case Dim::Mass: return "kg";
        case Dim::Force: return "N";
        case Dim::Time: return "s";
        case Dim::Speed: return "m/s";
        case Dim::Angle: return "rad";
        case Dim::AngularRate: return "rad/s";
        case Dim::Rotation: return "rev/s";
        case Dim::Density: return "kg/m^3";
        case Dim::Accel: return "m/s^2";
    }
    return "";
}

[[noreturn]] void schema_error(const std::string& context, const std::string& what) {
    throw Error(errc::config_schema, context + ": " + what);
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& context) {
    if (!j.is_object()) schema_error(context, "expected an object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw Error(errc::config_unknown_key, context + ": unknown key '" + item.key() + "'");
}

double unit_factor(Dim dim, const std::string& unit, const std::string& context) {
    const auto& dims = unit_table().at(dim);
    auto it = dims.find(unit);
    if (it == dims.end())
        throw Error(errc::config_unit, context + ": unsupported unit '" + unit + "'");
    return it->second;
}

// {"value": x | [x...], "unit": "..."} -> SI scalar / vector.
double quantity(const Json& j, Dim dim, const std::string& context) {
    check_keys(j, {"value", "unit"}, context);
    if (!j.contains("value") || !j.contains("unit"))
        schema_error(context, "dimensional field needs 'value' and 'unit'");
    if (!j["value"].is_number()) schema_error(context, "'value' must be a number");
    return j["value"].get<double>() * unit_factor(dim, j["unit"].get<std::string>(), context);
}

std::vector<double> quantity_vector(const Json& j, Dim dim, const std::string& context) {
    check_keys(j, {"value", "unit"}, context);
    if (!j.contains("value") || !j["value"].is_array())
        schema_error(context, "dimensional field needs an array 'value' and 'unit'");
    const double f = unit_factor(dim, j["unit"].get<std::string>(), context);
    std::vector<double> out;
    for (const auto& v : j["value"]) {
        if (!v.is_number()) schema_error(context, "array entries must be numbers");
        out.push_back(v.get<double>() * f);
    }
    return out;
}

Vec3 quantity_vec3(const Json& j, Dim dim, const std::string& context) {
    const std::vector<double> v = quantity_vector(j, dim, context);
    if (v.size() != 3) schema_error(context, "expected exactly 3 components");
    return Vec3(v[0], v[1], v[2]);
}

double plain_number(const Json& j, const std::string& context) {
    if (!j.is_number()) schema_error(context, "expected a plain (dimensionless) number");
    return j.get<double>();
}

Json quantity_json(double si_value, Dim dim) {
    return Json{{"value", si_value}, {"unit", si_unit(dim)}};
}

Json quantity_json(const std::vector<double>& si_values, Dim dim) {
    return Json{{"value", si_values}, {"unit", si_unit(dim)}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::config_missing_file, "cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errc::config_parse, path + ": " + e.what());
    }
    return j;
}

void check_schema_version(const Json& j, const std::string& context) {
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kSchemaVersion)
        schema_error(context, "missing or unsupported schema_version (expected " +
                                  std::to_string(kSchemaVersion) + ")");
}

std::string directory_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

std::string resolve(const std::string& base_dir, const std::string& ref) {
    if (ref.empty() || ref.front() == '/') return ref;
    return base_dir + ref;
}

// --- coefficient file -----------------------------------------------------

const char* const kChannelNames[6] = {"X", "Y", "Z", "K", "M", "N"};

std::vector<double> flatten3(const Json& j, std::size_t n0, std::size_t n1, std::size_t n2,
                             const std::string& context) {
    if (!j.is_array() || j.size() != n0) schema_error(context, "bad outer dimension");
    std::vector<double> out;
    out.reserve(n0 * n1 * n2);
    for (const auto& plane : j) {
        if (!plane.is_array() || plane.size() != n1) schema_error(context, "bad middle dimension");
        for (const auto& row : plane) {
            if (!row.is_array() || row.size() != n2) schema_error(context, "bad inner dimension");
            for (const auto& v : row) out.push_back(plain_number(v, context));
        }
    }
    return out;
}

std::vector<double> flatten2(const Json& j, std::size_t n0, std::size_t n1,
                             const std::string& context) {
    if (!j.is_array() || j.size() != n0) schema_error(context, "bad outer dimension");
    std::vector<double> out;
    out.reserve(n0 * n1);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != n1) schema_error(context, "bad inner dimension");
        for (const auto& v : row) out.push_back(plain_number(v, context));
    }
    return out;
}

Json nest3(const Grid3& t) {
    Json out = Json::array();
    for (std::size_t i = 0; i < t.axis0().size(); ++i) {
        Json plane = Json::array();
        for (std::size_t j = 0; j < t.axis1().size(); ++j) {
            Json row = Json::array();
            for (std::size_t k = 0; k < t.axis2().size(); ++k) row.push_back(t.at(i, j, k));
            plane.push_back(row);
        }
        out.push_back(plane);
    }
    return out;
}

Json nest2(const Grid2& t) {
    Json out = Json::array();
    for (std::size_t i = 0; i < t.axis0().size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < t.axis1().size(); ++j) row.push_back(t.at(i, j));
        out.push_back(row);
    }
    return out;
}

struct MotionField {
    const char* name;
    double MotionDerivativeSet::*member;
};

const std::vector<MotionField>& motion_fields() {
    static const std::vector<MotionField> fields = {
        {"X_udot", &MotionDerivativeSet::X_udot}, {"X_vr", &MotionDerivativeSet::X_vr},
        {"X_wq", &MotionDerivativeSet::X_wq},     {"X_qq", &MotionDerivativeSet::X_qq},
        {"X_rr", &MotionDerivativeSet::X_rr},     {"X_rp", &MotionDerivativeSet::X_rp},
        {"Y_vdot", &MotionDerivativeSet::Y_vdot}, {"Y_up", &MotionDerivativeSet::Y_up},
        {"Y_ur", &MotionDerivativeSet::Y_ur},     {"Y_vq", &MotionDerivativeSet::Y_vq},
        {"Y_wp", &MotionDerivativeSet::Y_wp},     {"Y_wr", &MotionDerivativeSet::Y_wr},
        {"Y_v_abs_r", &MotionDerivativeSet::Y_v_abs_r},
        {"Y_rdot", &MotionDerivativeSet::Y_rdot}, {"Y_pdot", &MotionDerivativeSet::Y_pdot},
        {"Y_abs_p_p", &MotionDerivativeSet::Y_abs_p_p},
        {"Y_pq", &MotionDerivativeSet::Y_pq},     {"Y_pr", &MotionDerivativeSet::Y_pr},
        {"Z_wdot", &MotionDerivativeSet::Z_wdot}, {"Z_vp", &MotionDerivativeSet::Z_vp},
        {"Z_vr", &MotionDerivativeSet::Z_vr},     {"Z_uq", &MotionDerivativeSet::Z_uq},
        {"Z_w_abs_q", &MotionDerivativeSet::Z_w_abs_q},
        {"Z_qdot", &MotionDerivativeSet::Z_qdot}, {"Z_pp", &MotionDerivativeSet::Z_pp},
        {"Z_rr", &MotionDerivativeSet::Z_rr},     {"Z_pr", &MotionDerivativeSet::Z_pr},
        {"K_vdot", &MotionDerivativeSet::K_vdot}, {"K_up", &MotionDerivativeSet::K_up},
        {"K_ur", &MotionDerivativeSet::K_ur},     {"K_vq", &MotionDerivativeSet::K_vq},
        {"K_wp", &MotionDerivativeSet::K_wp},     {"K_wr", &MotionDerivativeSet::K_wr},
        {"K_pdot", &MotionDerivativeSet::K_pdot}, {"K_rdot", &MotionDerivativeSet::K_rdot},
        {"K_qr", &MotionDerivativeSet::K_qr},     {"K_pq", &MotionDerivativeSet::K_pq},
        {"K_abs_p_p", &MotionDerivativeSet::K_abs_p_p},
        {"M_wdot", &MotionDerivativeSet::M_wdot}, {"M_uq", &MotionDerivativeSet::M_uq},
        {"M_vp", &MotionDerivativeSet::M_vp},     {"M_vr", &MotionDerivativeSet::M_vr},
        {"M_absvw_q", &MotionDerivativeSet::M_absvw_q},
        {"M_qdot", &MotionDerivativeSet::M_qdot}, {"M_pp", &MotionDerivativeSet::M_pp},
        {"M_rr", &MotionDerivativeSet::M_rr},     {"M_rp", &MotionDerivativeSet::M_rp},
        {"M_abs_q_q", &MotionDerivativeSet::M_abs_q_q},
        {"N_vdot", &MotionDerivativeSet::N_vdot}, {"N_up", &MotionDerivativeSet::N_up},
        {"N_ur", &MotionDerivativeSet::N_ur},     {"N_vq", &MotionDerivativeSet::N_vq},
        {"N_wp", &MotionDerivativeSet::N_wp},
        {"N_absvw_r", &MotionDerivativeSet::N_absvw_r},
        {"N_rdot", &MotionDerivativeSet::N_rdot}, {"N_pdot", &MotionDerivativeSet::N_pdot},
        {"N_pq", &MotionDerivativeSet::N_pq},     {"N_qr", &MotionDerivativeSet::N_qr},
        {"N_abs_r_r", &MotionDerivativeSet::N_abs_r_r},
    };
    return fields;
}

}  // namespace

CoefficientSet load_coefficients(const std::string& path, std::vector<std::string>* defaulted) {
    const Json j = load_json_file(path);
    check_keys(j,
               {"schema_version", "provenance", "reference_length", "sail_top_above_origin",
                "normalization", "hull_tables", "motion_derivatives", "control_surfaces",
                "propeller"},
               path);
    check_schema_version(j, path);

    CoefficientSet set;
    set.provenance = j.value("provenance", "");
    set.reference_length = quantity(j.at("reference_length"), Dim::Length, "reference_length");
    set.sail_top_above_origin =
        quantity(j.at("sail_top_above_origin"), Dim::Length, "sail_top_above_origin");
    if (!(set.reference_length > 0.0)) schema_error(path, "reference_length must be positive");

    if (j.contains("normalization")) {
        const Json& n = j["normalization"];
        check_keys(n, {"length_exponent", "divisor"}, "normalization");
        for (int ch = 0; ch < 6; ++ch) {
            set.normalization.length_exponent[static_cast<std::size_t>(ch)] =
                n.at("length_exponent").at(static_cast<std::size_t>(ch)).get<int>();
            set.normalization.divisor[static_cast<std::size_t>(ch)] =
                plain_number(n.at("divisor").at(static_cast<std::size_t>(ch)), "divisor");
        }
    }

    // Hull tables
    {
        const Json& h = j.at("hull_tables");
        check_keys(h,
                   {"speed_axis", "depth_axis", "beta_axis", "alpha_axis", "max_angle",
                    "base_resistance", "beta", "alpha"},
                   "hull_tables");
        const GridAxis speeds{quantity_vector(h.at("speed_axis"), Dim::Speed, "speed_axis")};
        const GridAxis depths{quantity_vector(h.at("depth_axis"), Dim::Length, "depth_axis")};
        const GridAxis betas{quantity_vector(h.at("beta_axis"), Dim::Angle, "beta_axis")};
        const GridAxis alphas{quantity_vector(h.at("alpha_axis"), Dim::Angle, "alpha_axis")};
        if (h.contains("max_angle"))
            set.hull.max_angle = quantity(h.at("max_angle"), Dim::Angle, "max_angle");
        set.hull.base_resistance =
            Grid2(speeds, depths,
                  flatten2(h.at("base_resistance"), speeds.size(), depths.size(),
                           "base_resistance"));
        for (int ch = 0; ch < 6; ++ch) {
            const std::string name = kChannelNames[ch];
            const Json& beta_block = h.at("beta");
            const Json& alpha_block = h.at("alpha");
            set.hull.beta_tables[static_cast<std::size_t>(ch)] =
                beta_block.contains(name)
                    ? Grid3(speeds, betas, depths,
                            flatten3(beta_block.at(name), speeds.size(), betas.size(),
                                     depths.size(), "beta." + name))
                    : Grid3::zero();
            set.hull.alpha_tables[static_cast<std::size_t>(ch)] =
                alpha_block.contains(name)
                    ? Grid3(speeds, alphas, depths,
                            flatten3(alpha_block.at(name), speeds.size(), alphas.size(),
                                     depths.size(), "alpha." + name))
                    : Grid3::zero();
        }
    }

    // Motion derivatives with defaulted-set reporting
    {
        const Json& m = j.at("motion_derivatives");
        std::set<std::string> allowed;
        for (const auto& f : motion_fields()) allowed.insert(f.name);
        check_keys(m, allowed, "motion_derivatives");
        for (const auto& f : motion_fields()) {
            if (m.contains(f.name)) {
                set.motion.*(f.member) = plain_number(m.at(f.name), f.name);
            } else {
                set.defaulted_motion_coefficients.push_back(f.name);
                if (defaulted) defaulted->push_back(f.name);
            }
        }
    }

    // Control surfaces
    {
        const Json& c = j.at("control_surfaces");
        check_keys(c, {"deflection_axis", "speed_axis", "depth_axis", "surfaces", "hard_stop"},
                   "control_surfaces");
        const GridAxis defl{quantity_vector(c.at("deflection_axis"), Dim::Angle,
                                            "deflection_axis")};
        const GridAxis speeds{quantity_vector(c.at("speed_axis"), Dim::Speed, "cs speed_axis")};
        const GridAxis depths{quantity_vector(c.at("depth_axis"), Dim::Length, "cs depth_axis")};
        if (c.contains("hard_stop"))
            set.control_surfaces.hard_stop = quantity(c.at("hard_stop"), Dim::Angle, "hard_stop");
        set.control_surfaces.max_tabulated = std::max(std::abs(defl.front()), defl.back());
        const Json& surfaces = c.at("surfaces");
        if (!surfaces.is_array() || surfaces.size() != 5)
            schema_error("control_surfaces", "exactly five surfaces required");
        for (int l = 0; l < 5; ++l) {
            const Json& s = surfaces.at(static_cast<std::size_t>(l));
            check_keys(s, {"name", "tables", "quadratic"}, "surface " + std::to_string(l + 1));
            if (s.contains("tables") && s.contains("quadratic"))
                schema_error("surface " + std::to_string(l + 1),
                             "give either 'tables' or 'quadratic', not both");
            for (int ch = 0; ch < 6; ++ch) {
                auto& coeff =
                    set.control_surfaces.coeffs[static_cast<std::size_t>(l)]
                                               [static_cast<std::size_t>(ch)];
                const std::string name = kChannelNames[ch];
                if (s.contains("tables") && s.at("tables").contains(name)) {
                    coeff.kind = DeflectionCoeff::Kind::Table;
                    coeff.table = Grid3(defl, speeds, depths,
                                        flatten3(s.at("tables").at(name), defl.size(),
                                                 speeds.size(), depths.size(),
                                                 "surface tables." + name));
                } else if (s.contains("quadratic") && s.at("quadratic").contains(name)) {
                    coeff.kind = DeflectionCoeff::Kind::Quadratic;
                    coeff.quadratic = plain_number(s.at("quadratic").at(name), "quadratic");
                }
            }
        }
    }

    // Propeller
    {
        const Json& p = j.at("propeller");
        check_keys(p, {"diameter", "kt", "kq", "j_max", "thrust_deduction"}, "propeller");
        set.propeller.diameter = quantity(p.at("diameter"), Dim::Length, "propeller.diameter");
        for (int k = 0; k < 3; ++k) {
            set.propeller.kt[static_cast<std::size_t>(k)] =
                plain_number(p.at("kt").at(static_cast<std::size_t>(k)), "kt");
            set.propeller.kq[static_cast<std::size_t>(k)] =
                plain_number(p.at("kq").at(static_cast<std::size_t>(k)), "kq");
        }
        if (p.contains("j_max")) set.propeller.j_max = plain_number(p.at("j_max"), "j_max");
        const Json& t = p.at("thrust_deduction");
        check_keys(t, {"speed_axis", "depth_axis", "values"}, "thrust_deduction");
        const GridAxis speeds{quantity_vector(t.at("speed_axis"), Dim::Speed, "td speed_axis")};
        const GridAxis depths{quantity_vector(t.at("depth_axis"), Dim::Length, "td depth_axis")};
        set.propeller.thrust_deduction =
            Grid2(speeds, depths,
                  flatten2(t.at("values"), speeds.size(), depths.size(), "thrust_deduction"));
        set.propeller.validate();
        for (std::size_t i = 0; i < speeds.size(); ++i)
            for (std::size_t k = 0; k < depths.size(); ++k) {
                const double td = set.propeller.thrust_deduction.at(i, k);
                if (td < 0.0 || td >= 0.5)
                    schema_error("thrust_deduction", "t must lie in [0, 0.5)");
            }
    }
    return set;
}

Json coefficients_to_json(const CoefficientSet& set) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["provenance"] = set.provenance;
    j["reference_length"] = quantity_json(set.reference_length, Dim::Length);
    j["sail_top_above_origin"] = quantity_json(set.sail_top_above_origin, Dim::Length);
    j["normalization"] = {{"length_exponent", set.normalization.length_exponent},
                          {"divisor", set.normalization.divisor}};

    const Grid3& ref = set.hull.beta_tables[kY];
    Json hull;
    hull["speed_axis"] = quantity_json(ref.axis0().values, Dim::Speed);
    hull["beta_axis"] = quantity_json(ref.axis1().values, Dim::Angle);
    hull["depth_axis"] = quantity_json(ref.axis2().values, Dim::Length);
    hull["alpha_axis"] = quantity_json(set.hull.alpha_tables[kZ].axis1().values, Dim::Angle);
    hull["max_angle"] = quantity_json(set.hull.max_angle, Dim::Angle);
    hull["base_resistance"] = nest2(set.hull.base_resistance);
    Json beta_block, alpha_block;
    for (int ch = 0; ch < 6; ++ch) {
        const auto& bt = set.hull.beta_tables[static_cast<std::size_t>(ch)];
        const auto& at = set.hull.alpha_tables[static_cast<std::size_t>(ch)];
        if (bt.axis1().size() > 1) beta_block[kChannelNames[ch]] = nest3(bt);
        if (at.axis1().size() > 1) alpha_block[kChannelNames[ch]] = nest3(at);
    }
    hull["beta"] = beta_block;
    hull["alpha"] = alpha_block;
    j["hull_tables"] = hull;

    Json m;
    for (const auto& f : motion_fields()) {
        const double v = set.motion.*(f.member);
        if (v != 0.0) m[f.name] = v;
    }
    j["motion_derivatives"] = m;

    Json cs;
    const Grid3& cref = set.control_surfaces.coeffs[0][kZ].table;
    cs["deflection_axis"] = quantity_json(cref.axis0().values, Dim::Angle);
    cs["speed_axis"] = quantity_json(cref.axis1().values, Dim::Speed);
    cs["depth_axis"] = quantity_json(cref.axis2().values, Dim::Length);
    cs["hard_stop"] = quantity_json(set.control_surfaces.hard_stop, Dim::Angle);
    Json surfaces = Json::array();
    const char* names[5] = {"lower_starboard", "upper_starboard", "upper_port", "lower_port",
                            "sail"};
    for (int l = 0; l < 5; ++l) {
        Json s;
        s["name"] = names[l];
        Json tables;
        for (int ch = 0; ch < 6; ++ch) {
            const auto& coeff =
                set.control_surfaces.coeffs[static_cast<std::size_t>(l)]
                                           [static_cast<std::size_t>(ch)];
            if (coeff.kind == DeflectionCoeff::Kind::Table)
                tables[kChannelNames[ch]] = nest3(coeff.table);
        }
        s["tables"] = tables;
        surfaces.push_back(s);
    }
    cs["surfaces"] = surfaces;
    j["control_surfaces"] = cs;

    Json p;
    p["diameter"] = quantity_json(set.propeller.diameter, Dim::Length);
    p["kt"] = set.propeller.kt;
    p["kq"] = set.propeller.kq;
    p["j_max"] = set.propeller.j_max;
    Json t;
    t["speed_axis"] = quantity_json(set.propeller.thrust_deduction.axis0().values, Dim::Speed);
    t["depth_axis"] = quantity_json(set.propeller.thrust_deduction.axis1().values, Dim::Length);
    t["values"] = nest2(set.propeller.thrust_deduction);
    p["thrust_deduction"] = t;
    j["propeller"] = p;
    return j;
}

BernsteinPath load_path(const std::string& path) {
    const Json j = load_json_file(path);
    check_keys(j, {"schema_version", "provenance", "control_points", "final_time"}, path);
    check_schema_version(j, path);
    BernsteinPath bp;
    const Json& cp = j.at("control_points");
    check_keys(cp, {"value", "unit"}, "control_points");
    const double f = unit_factor(Dim::Length, cp.at("unit").get<std::string>(), "control_points");
    for (const auto& point : cp.at("value")) {
        if (!point.is_array() || point.size() != 3)
            schema_error("control_points", "each point must have 3 components");
        bp.control_points.emplace_back(plain_number(point[0], "x") * f,
                                       plain_number(point[1], "y") * f,
                                       plain_number(point[2], "z") * f);
    }
    bp.final_time = quantity(j.at("final_time"), Dim::Time, "final_time");
    bp.validate();
    return bp;
}

Json path_to_json(const BernsteinPath& path) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json points = Json::array();
    for (const Vec3& p : path.control_points) points.push_back({p.x(), p.y(), p.z()});
    j["control_points"] = {{"value", points}, {"unit", "m"}};
    j["final_time"] = quantity_json(path.final_time, Dim::Time);
    return j;
}

namespace {

PidGains pid_from_json(const Json& j, const std::string& context) {
    check_keys(j, {"kp", "ki", "kd"}, context);
    PidGains g;
    g.kp = j.value("kp", 0.0);
    g.ki = j.value("ki", 0.0);
    g.kd = j.value("kd", 0.0);
    return g;
}

Json pid_to_json(const PidGains& g) { return Json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}}; }

ScenarioSpec scenario_from_json(const Json& j, const std::string& base_dir) {
    ScenarioSpec s;
    check_keys(j,
               {"kind", "speed", "depth", "heel", "propulsion", "rudder", "deflection",
                "switch_angle", "axis", "path", "adaptation", "terrain"},
               "scenario");
    const std::string kind = j.value("kind", "none");
    if (kind == "trim") s.kind = ScenarioKind::Trim;
    else if (kind == "roll_decay") s.kind = ScenarioKind::RollDecay;
    else if (kind == "turn") s.kind = ScenarioKind::Turn;
    else if (kind == "zigzag") s.kind = ScenarioKind::Zigzag;
    else if (kind == "follow") s.kind = ScenarioKind::Follow;
    else if (kind == "none") s.kind = ScenarioKind::None;
    else schema_error("scenario", "unknown kind '" + kind + "'");

    if (j.contains("speed")) s.speed = quantity(j.at("speed"), Dim::Speed, "scenario.speed");
    if (j.contains("depth")) s.depth = quantity(j.at("depth"), Dim::Length, "scenario.depth");
    if (j.contains("heel")) s.heel = quantity(j.at("heel"), Dim::Angle, "scenario.heel");
    if (j.contains("propulsion")) s.propulsion = j.at("propulsion").get<bool>();
    if (j.contains("rudder")) s.rudder = quantity(j.at("rudder"), Dim::Angle, "scenario.rudder");
    if (j.contains("deflection"))
        s.deflection = quantity(j.at("deflection"), Dim::Angle, "scenario.deflection");
    if (j.contains("switch_angle"))
        s.switch_angle = quantity(j.at("switch_angle"), Dim::Angle, "scenario.switch_angle");
    if (j.contains("axis")) {
        const std::string axis = j.at("axis").get<std::string>();
        if (axis != "vertical" && axis != "horizontal")
            schema_error("scenario.axis", "must be 'vertical' or 'horizontal'");
        s.horizontal = axis == "horizontal";
    }
    if (j.contains("path")) {
        s.path_file = resolve(base_dir, j.at("path").get<std::string>());
        s.path = load_path(s.path_file);
    }
    if (j.contains("adaptation")) s.adaptation = j.at("adaptation").get<bool>();
    if (j.contains("terrain")) {
        const Json& t = j.at("terrain");
        check_keys(t, {"x_axis", "y_axis", "floor_depth", "min_clearance"}, "terrain");
        TerrainGrid grid;
        const GridAxis xs{quantity_vector(t.at("x_axis"), Dim::Length, "terrain.x_axis")};
        const GridAxis ys{quantity_vector(t.at("y_axis"), Dim::Length, "terrain.y_axis")};
        grid.floor_depth =
            Grid2(xs, ys, flatten2(t.at("floor_depth"), xs.size(), ys.size(), "floor_depth"));
        grid.min_clearance = quantity(t.at("min_clearance"), Dim::Length, "min_clearance");
        s.terrain = grid;
    }
    return s;
}

Json scenario_to_json(const ScenarioSpec& s) {
    Json j;
    switch (s.kind) {
        case ScenarioKind::Trim: j["kind"] = "trim"; break;
        case ScenarioKind::RollDecay: j["kind"] = "roll_decay"; break;
        case ScenarioKind::Turn: j["kind"] = "turn"; break;
        case ScenarioKind::Zigzag: j["kind"] = "zigzag"; break;
        case ScenarioKind::Follow: j["kind"] = "follow"; break;
        case ScenarioKind::None: j["kind"] = "none"; break;
    }
    j["speed"] = quantity_json(s.speed, Dim::Speed);
    j["depth"] = quantity_json(s.depth, Dim::Length);
    j["heel"] = quantity_json(s.heel, Dim::Angle);
    j["propulsion"] = s.propulsion;
    j["rudder"] = quantity_json(s.rudder, Dim::Angle);
    j["deflection"] = quantity_json(s.deflection, Dim::Angle);
    j["switch_angle"] = quantity_json(s.switch_angle, Dim::Angle);
    j["axis"] = s.horizontal ? "horizontal" : "vertical";
    if (!s.path_file.empty()) j["path"] = s.path_file;
    j["adaptation"] = s.adaptation;
    if (s.terrain) {
        Json t;
        t["x_axis"] = quantity_json(s.terrain->floor_depth.axis0().values, Dim::Length);
        t["y_axis"] = quantity_json(s.terrain->floor_depth.axis1().values, Dim::Length);
        t["floor_depth"] = nest2(s.terrain->floor_depth);
        t["min_clearance"] = quantity_json(s.terrain->min_clearance, Dim::Length);
        j["terrain"] = t;
    }
    return j;
}

}  // namespace

RuntimeConfig load_and_audit(const std::string& path) {
    const Json j = load_json_file(path);
    check_keys(j,
               {"schema_version", "vehicle", "coefficients", "mesh", "wave", "environment",
                "autopilot", "rate_autopilot", "pf", "l1", "actuators", "simulation", "scenario"},
               path);
    check_schema_version(j, path);
    const std::string base_dir = directory_of(path);

    RuntimeConfig cfg;

    // Vehicle block
    {
        const Json& v = j.at("vehicle");
        check_keys(v,
                   {"length", "mass", "cg", "cb", "gyration_radii", "weight", "buoyancy",
                    "buoyancy_mode"},
                   "vehicle");
        const double mass = quantity(v.at("mass"), Dim::Mass, "vehicle.mass");
        const Vec3 cg = quantity_vec3(v.at("cg"), Dim::Length, "vehicle.cg");
        const Vec3 cb = quantity_vec3(v.at("cb"), Dim::Length, "vehicle.cb");
        const Vec3 radii = quantity_vec3(v.at("gyration_radii"), Dim::Length, "gyration_radii");
        double g = 9.81;
        if (j.contains("environment") && j.at("environment").contains("gravity"))
            g = quantity(j.at("environment").at("gravity"), Dim::Accel, "gravity");
        double weight = v.contains("weight") ? quantity(v.at("weight"), Dim::Force, "weight")
                                             : mass * g;
        double buoyancy =
            v.contains("buoyancy") ? quantity(v.at("buoyancy"), Dim::Force, "buoyancy") : weight;
        cfg.model.mass =
            MassProperties::from_particulars(mass, cg, cb, radii, weight, buoyancy);
        if (v.contains("buoyancy_mode")) {
            const std::string mode = v.at("buoyancy_mode").get<std::string>();
            if (mode != "explicit" && mode != "neutral_from_mesh")
                schema_error("vehicle.buoyancy_mode", "must be 'explicit' or 'neutral_from_mesh'");
            if (mode == "neutral_from_mesh" && !j.contains("mesh"))
                schema_error("vehicle.buoyancy_mode", "'neutral_from_mesh' requires a mesh");
            if (mode == "neutral_from_mesh") cfg.model.mass.W = -1.0;  // resolved after mesh load
        }
    }

    cfg.coefficient_file = resolve(base_dir, j.at("coefficients").get<std::string>());
    cfg.model.coeffs = load_coefficients(cfg.coefficient_file);
    // The defaulted-coefficient set stays available on the coefficient set
    // itself; absent terms are an expected part of the model, not a warning.

    // Environment / simulation
    if (j.contains("environment")) {
        const Json& e = j.at("environment");
        check_keys(e, {"density", "gravity"}, "environment");
        if (e.contains("density"))
            cfg.sim.env.rho = quantity(e.at("density"), Dim::Density, "density");
        if (e.contains("gravity"))
            cfg.sim.env.g = quantity(e.at("gravity"), Dim::Accel, "gravity");
    }
    if (j.contains("simulation")) {
        const Json& s = j.at("simulation");
        check_keys(s, {"dt", "duration", "output_decimation", "mesh_buoyancy"}, "simulation");
        if (s.contains("dt")) cfg.sim.dt = quantity(s.at("dt"), Dim::Time, "simulation.dt");
        if (s.contains("duration"))
            cfg.sim.duration = quantity(s.at("duration"), Dim::Time, "simulation.duration");
        if (s.contains("output_decimation"))
            cfg.sim.output_decimation = s.at("output_decimation").get<int>();
        if (s.contains("mesh_buoyancy")) cfg.sim.mesh_buoyancy = s.at("mesh_buoyancy").get<bool>();
    }
    cfg.sim.validate();

    // Mesh
    if (j.contains("mesh")) {
        cfg.mesh_file = resolve(base_dir, j.at("mesh").get<std::string>());
        EventLog mesh_events;
        HullMesh mesh = load_stl_mesh(cfg.mesh_file, &mesh_events);
        mesh.validate_closed();
        for (const Event& e : mesh_events.events()) cfg.audit.warnings.push_back({e.code, e.detail});
        cfg.model.mesh = std::move(mesh);
    }
    if (cfg.model.mass.W < 0.0) {  // neutral-from-mesh construction
        const double w =
            neutral_buoyancy_weight(*cfg.model.mesh, cfg.sim.env.rho, cfg.sim.env.g);
        cfg.model.mass.W = cfg.model.mass.B = w;
    }

    // Wave
    if (j.contains("wave")) {
        const Json& w = j.at("wave");
        check_keys(w, {"amplitude", "period", "wavelength", "heading", "phase_origin"}, "wave");
        const double amplitude = quantity(w.at("amplitude"), Dim::Length, "wave.amplitude");
        const double heading =
            w.contains("heading") ? quantity(w.at("heading"), Dim::Angle, "wave.heading") : 0.0;
        WaveField wf;
        if (w.contains("period") == w.contains("wavelength"))
            schema_error("wave", "give exactly one of 'period' or 'wavelength'");
        if (w.contains("period"))
            wf = WaveField::from_period(amplitude, quantity(w.at("period"), Dim::Time, "period"),
                                        heading, cfg.sim.env.rho, cfg.sim.env.g);
        else
            wf = WaveField::from_wavelength(
                amplitude, quantity(w.at("wavelength"), Dim::Length, "wavelength"), heading,
                cfg.sim.env.rho, cfg.sim.env.g);
        if (w.contains("phase_origin"))
            wf.phase_origin = quantity(w.at("phase_origin"), Dim::Length, "phase_origin");
        cfg.model.wave = wf;
        if (!cfg.sim.mesh_buoyancy)
            schema_error("wave", "wave loads need simulation.mesh_buoyancy = true");
    }

    // Controllers
    if (j.contains("actuators")) {
        const Json& a = j.at("actuators");
        check_keys(a, {"position_limit", "rate_limit"}, "actuators");
        if (a.contains("position_limit"))
            cfg.actuator_limits.position_limit =
                quantity(a.at("position_limit"), Dim::Angle, "position_limit");
        if (a.contains("rate_limit"))
            cfg.actuator_limits.rate_limit =
                quantity(a.at("rate_limit"), Dim::AngularRate, "rate_limit");
    }
    if (j.contains("autopilot")) {
        const Json& a = j.at("autopilot");
        check_keys(a, {"vertical", "horizontal", "saturation"}, "autopilot");
        auto channel = [&](const char* name) {
            const Json& c = a.at(name);
            check_keys(c, {"weight_primary", "weight_attitude", "gains"},
                       std::string("autopilot.") + name);
            AutopilotChannel ch;
            ch.weight_primary = c.value("weight_primary", 1.0);
            ch.weight_attitude = c.value("weight_attitude", 1.0);
            if (c.contains("gains")) ch.gains = pid_from_json(c.at("gains"), "autopilot gains");
            return ch;
        };
        if (a.contains("vertical")) cfg.autopilot.vertical = channel("vertical");
        if (a.contains("horizontal")) cfg.autopilot.horizontal = channel("horizontal");
        if (a.contains("saturation"))
            cfg.autopilot.saturation = quantity(a.at("saturation"), Dim::Angle, "saturation");
    }
    if (j.contains("rate_autopilot")) {
        const Json& r = j.at("rate_autopilot");
        check_keys(r, {"pitch", "yaw", "saturation"}, "rate_autopilot");
        if (r.contains("pitch"))
            cfg.rate_autopilot.pitch = pid_from_json(r.at("pitch"), "rate_autopilot.pitch");
        if (r.contains("yaw"))
            cfg.rate_autopilot.yaw = pid_from_json(r.at("yaw"), "rate_autopilot.yaw");
        if (r.contains("saturation"))
            cfg.rate_autopilot.saturation =
                quantity(r.at("saturation"), Dim::Angle, "rate saturation");
    } else {
        cfg.rate_autopilot.pitch = {80.0, 0.0, 0.0};
        cfg.rate_autopilot.yaw = {80.0, 0.0, 0.0};
    }
    if (j.contains("pf")) {
        const Json& p = j.at("pf");
        check_keys(p,
                   {"k_gamma", "k_R", "d", "c", "c1", "lambda", "delta_lambda", "v_min",
                    "omega_c_max", "omega_T_max"},
                   "pf");
        cfg.pf.k_gamma = p.value("k_gamma", cfg.pf.k_gamma);
        cfg.pf.k_R = p.value("k_R", cfg.pf.k_R);
        if (p.contains("d")) cfg.pf.d = quantity(p.at("d"), Dim::Length, "pf.d");
        cfg.pf.c = p.value("c", cfg.pf.c);
        if (p.contains("c1")) cfg.pf.c1 = quantity(p.at("c1"), Dim::Length, "pf.c1");
        cfg.pf.lambda = p.value("lambda", cfg.pf.lambda);
        cfg.pf.delta_lambda = p.value("delta_lambda", cfg.pf.delta_lambda);
        if (p.contains("v_min")) cfg.pf.v_min = quantity(p.at("v_min"), Dim::Speed, "pf.v_min");
        if (p.contains("omega_c_max"))
            cfg.pf.omega_c_max = quantity(p.at("omega_c_max"), Dim::AngularRate, "omega_c_max");
        if (p.contains("omega_T_max"))
            cfg.pf.omega_T_max = quantity(p.at("omega_T_max"), Dim::AngularRate, "omega_T_max");
        cfg.pf.validate();
    } else {
        cfg.pf = FollowConfig{}.pf;
    }
    if (j.contains("l1")) {
        const Json& l = j.at("l1");
        check_keys(l,
                   {"wn_pitch", "zeta_pitch", "wn_yaw", "zeta_yaw", "sample_time",
                    "filter_bandwidth"},
                   "l1");
        if (l.contains("wn_pitch"))
            cfg.l1.wn_pitch = quantity(l.at("wn_pitch"), Dim::AngularRate, "l1.wn_pitch");
        cfg.l1.zeta_pitch = l.value("zeta_pitch", cfg.l1.zeta_pitch);
        if (l.contains("wn_yaw"))
            cfg.l1.wn_yaw = quantity(l.at("wn_yaw"), Dim::AngularRate, "l1.wn_yaw");
        cfg.l1.zeta_yaw = l.value("zeta_yaw", cfg.l1.zeta_yaw);
        if (l.contains("sample_time"))
            cfg.l1.sample_time = quantity(l.at("sample_time"), Dim::Time, "l1.sample_time");
        if (l.contains("filter_bandwidth"))
            cfg.l1.filter_bandwidth =
                quantity(l.at("filter_bandwidth"), Dim::AngularRate, "l1.filter_bandwidth");
    }

    if (j.contains("scenario")) cfg.scenario = scenario_from_json(j.at("scenario"), base_dir);

    // ----- cross validation -------------------------------------------------
    // L1 design feasibility (throws with stable codes on a bad design).
    const DesiredModel desired = DesiredModel::second_order_channels(
        cfg.l1.wn_pitch, cfg.l1.zeta_pitch, cfg.l1.wn_yaw, cfg.l1.zeta_yaw, cfg.l1.sample_time);
    build_adaptation_matrices(desired, MatX::Identity(desired.order(), desired.order()));
    build_filter(desired, first_order_lowpass(cfg.l1.filter_bandwidth));
    const double ratio = cfg.l1.sample_time >= cfg.sim.dt ? cfg.l1.sample_time / cfg.sim.dt
                                                          : cfg.sim.dt / cfg.l1.sample_time;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw Error(errc::sim_invalid_config,
                    "l1.sample_time must be an integer multiple or divisor of simulation.dt");

    // Coefficient coverage for the scenario envelope.
    const GridAxis& speed_axis = cfg.model.coeffs.hull.beta_tables[kY].axis0();
    if (cfg.scenario.kind != ScenarioKind::None) {
        if (cfg.scenario.speed > speed_axis.back() * (1.0 + 1e-9) ||
            cfg.scenario.speed < speed_axis.front() * (1.0 - 1e-9))
            cfg.audit.warnings.push_back(
                {errc::coeffs_speed_range,
                 "scenario speed " + std::to_string(cfg.scenario.speed) +
                     " m/s is outside the range of the model (" +
                     std::to_string(speed_axis.front()) + " to " +
                     std::to_string(speed_axis.back()) + " m/s); extrapolated by clamping"});
        const double d0 =
            cfg.scenario.depth - cfg.model.coeffs.sail_top_above_origin;
        if (d0 < cfg.model.coeffs.hull.beta_tables[kY].axis2().front())
            cfg.audit.warnings.push_back(
                {evc::depth_below_table,
                 "scenario sail-top depth is below the minimum tabulated depth; results should "
                 "be considered unreliable"});
    }

    // Path-following feasibility audit for follow scenarios.
    if (cfg.scenario.kind == ScenarioKind::Follow) {
        if (!cfg.scenario.path)
            schema_error("scenario", "follow scenario needs a 'path' file reference");
        const FramedPath framed(*cfg.scenario.path);
        audit_pf_config(cfg.pf, framed, cfg.scenario.speed);
    }

    // Mesh-mode consistency.
    if (cfg.sim.mesh_buoyancy && !cfg.model.mesh)
        throw Error(errc::sim_invalid_config, "mesh_buoyancy requires a mesh reference");

    cfg.audit.ok = true;
    return cfg;
}

Json config_to_json(const RuntimeConfig& cfg) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json v;
    v["length"] = quantity_json(cfg.model.coeffs.reference_length, Dim::Length);
    v["mass"] = quantity_json(cfg.model.mass.m, Dim::Mass);
    v["cg"] = quantity_json(
        std::vector<double>{cfg.model.mass.cg.x(), cfg.model.mass.cg.y(), cfg.model.mass.cg.z()},
        Dim::Length);
    v["cb"] = quantity_json(
        std::vector<double>{cfg.model.mass.cb.x(), cfg.model.mass.cb.y(), cfg.model.mass.cb.z()},
        Dim::Length);
    const double m = cfg.model.mass.m;
    v["gyration_radii"] = quantity_json(
        std::vector<double>{std::sqrt(cfg.model.mass.inertia(0, 0) / m),
                            std::sqrt(cfg.model.mass.inertia(1, 1) / m),
                            std::sqrt(cfg.model.mass.inertia(2, 2) / m)},
        Dim::Length);
    v["weight"] = quantity_json(cfg.model.mass.W, Dim::Force);
    v["buoyancy"] = quantity_json(cfg.model.mass.B, Dim::Force);
    j["vehicle"] = v;
    j["coefficients"] = cfg.coefficient_file;
    if (!cfg.mesh_file.empty()) j["mesh"] = cfg.mesh_file;
    if (cfg.model.wave) {
        Json w;
        w["amplitude"] = quantity_json(cfg.model.wave->amplitude, Dim::Length);
        w["wavelength"] = quantity_json(cfg.model.wave->wavelength(), Dim::Length);
        w["heading"] = quantity_json(cfg.model.wave->heading, Dim::Angle);
        w["phase_origin"] = quantity_json(cfg.model.wave->phase_origin, Dim::Length);
        j["wave"] = w;
    }
    j["environment"] = {{"density", quantity_json(cfg.sim.env.rho, Dim::Density)},
                        {"gravity", quantity_json(cfg.sim.env.g, Dim::Accel)}};
    j["simulation"] = {{"dt", quantity_json(cfg.sim.dt, Dim::Time)},
                       {"duration", quantity_json(cfg.sim.duration, Dim::Time)},
                       {"output_decimation", cfg.sim.output_decimation},
                       {"mesh_buoyancy", cfg.sim.mesh_buoyancy}};
    j["actuators"] = {
        {"position_limit", quantity_json(cfg.actuator_limits.position_limit, Dim::Angle)},
        {"rate_limit", quantity_json(cfg.actuator_limits.rate_limit, Dim::AngularRate)}};
    j["autopilot"] = {
        {"vertical",
         {{"weight_primary", cfg.autopilot.vertical.weight_primary},
          {"weight_attitude", cfg.autopilot.vertical.weight_attitude},
          {"gains", pid_to_json(cfg.autopilot.vertical.gains)}}},
        {"horizontal",
         {{"weight_primary", cfg.autopilot.horizontal.weight_primary},
          {"weight_attitude", cfg.autopilot.horizontal.weight_attitude},
          {"gains", pid_to_json(cfg.autopilot.horizontal.gains)}}},
        {"saturation", quantity_json(cfg.autopilot.saturation, Dim::Angle)}};
    j["rate_autopilot"] = {{"pitch", pid_to_json(cfg.rate_autopilot.pitch)},
                           {"yaw", pid_to_json(cfg.rate_autopilot.yaw)},
                           {"saturation", quantity_json(cfg.rate_autopilot.saturation, Dim::Angle)}};
    j["pf"] = {{"k_gamma", cfg.pf.k_gamma},
               {"k_R", cfg.pf.k_R},
               {"d", quantity_json(cfg.pf.d, Dim::Length)},
               {"c", cfg.pf.c},
               {"c1", quantity_json(cfg.pf.c1, Dim::Length)},
               {"lambda", cfg.pf.lambda},
               {"delta_lambda", cfg.pf.delta_lambda},
               {"v_min", quantity_json(cfg.pf.v_min, Dim::Speed)},
               {"omega_c_max", quantity_json(cfg.pf.omega_c_max, Dim::AngularRate)},
               {"omega_T_max", quantity_json(cfg.pf.omega_T_max, Dim::AngularRate)}};
    j["l1"] = {{"wn_pitch", quantity_json(cfg.l1.wn_pitch, Dim::AngularRate)},
               {"zeta_pitch", cfg.l1.zeta_pitch},
               {"wn_yaw", quantity_json(cfg.l1.wn_yaw, Dim::AngularRate)},
               {"zeta_yaw", cfg.l1.zeta_yaw},
               {"sample_time", quantity_json(cfg.l1.sample_time, Dim::Time)},
               {"filter_bandwidth", quantity_json(cfg.l1.filter_bandwidth, Dim::AngularRate)}};
    j["scenario"] = scenario_to_json(cfg.scenario);
    return j;
}

// --- trajectory CSV ---------------------------------------------------------

namespace {

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {
            "t_s", "x_m", "y_m", "z_m", "phi_rad", "theta_rad", "psi_rad",
            "u_mps", "v_mps", "w_mps", "p_radps", "q_radps", "r_radps",
            "delta1_rad", "delta2_rad", "delta3_rad", "delta4_rad", "delta5_rad",
            "delta_v_cmd_rad", "delta_h_cmd_rad", "n_revps",
            "gamma", "pT_x_m", "pT_y_m", "pT_z_m", "psi_err",
            "qc_radps", "rc_radps", "uad_q_radps", "uad_r_radps",
            "vertical_error_m", "horizontal_error_m", "rate_saturated"};
        const char* groups[] = {"hydrostatic", "wave", "hull", "coupling", "surface", "propeller"};
        const char* channels[] = {"X_N", "Y_N", "Z_N", "K_Nm", "M_Nm", "N_Nm"};
        for (const char* g : groups)
            for (const char* ch : channels) c.push_back(std::string("f_") + g + "_" + ch);
        return c;
    }();
    return cols;
}

std::vector<double> row_values(const LogRow& r) {
    std::vector<double> v = {
        r.t, r.state.position.x(), r.state.position.y(), r.state.position.z(),
        r.state.roll(), r.state.pitch(), r.state.yaw(),
        r.state.velocity(0), r.state.velocity(1), r.state.velocity(2),
        r.state.velocity(3), r.state.velocity(4), r.state.velocity(5),
        r.deflections(0), r.deflections(1), r.deflections(2), r.deflections(3), r.deflections(4),
        r.command_vh(0), r.command_vh(1), r.n,
        r.gamma, r.p_T.x(), r.p_T.y(), r.p_T.z(), r.psi,
        r.rate_command(0), r.rate_command(1), r.u_ad(0), r.u_ad(1),
        r.vertical_error, r.horizontal_error, r.rate_saturated ? 1.0 : 0.0};
    for (const Vec6* f : {&r.forces.hydrostatic, &r.forces.wave_mesh, &r.forces.hull,
                          &r.forces.motion_coupling, &r.forces.control_surface,
                          &r.forces.propeller})
        for (int ch = 0; ch < 6; ++ch) v.push_back((*f)(ch));
    return v;
}

void fill_row(LogRow& r, const std::vector<double>& v) {
    std::size_t i = 0;
    r.t = v[i++];
    for (int k = 0; k < 3; ++k) r.state.position(k) = v[i++];
    for (int k = 0; k < 3; ++k) r.state.attitude(k) = v[i++];
    for (int k = 0; k < 6; ++k) r.state.velocity(k) = v[i++];
    for (int k = 0; k < 5; ++k) r.deflections(k) = v[i++];
    r.command_vh(0) = v[i++];
    r.command_vh(1) = v[i++];
    r.n = v[i++];
    r.gamma = v[i++];
    for (int k = 0; k < 3; ++k) r.p_T(k) = v[i++];
    r.psi = v[i++];
    r.rate_command(0) = v[i++];
    r.rate_command(1) = v[i++];
    r.u_ad(0) = v[i++];
    r.u_ad(1) = v[i++];
    r.vertical_error = v[i++];
    r.horizontal_error = v[i++];
    r.rate_saturated = v[i++] != 0.0;
    for (Vec6* f : {&r.forces.hydrostatic, &r.forces.wave_mesh, &r.forces.hull,
                    &r.forces.motion_coupling, &r.forces.control_surface, &r.forces.propeller})
        for (int ch = 0; ch < 6; ++ch) (*f)(ch) = v[i++];
}

}  // namespace

void write_trajectory_csv(const std::string& path, const TrajectoryLog& log) {
    std::ofstream out(path);
    if (!out) throw Error(errc::config_missing_file, "cannot write " + path);
    out << "# scenario=" << log.scenario << " dt=" << log.dt << " decimation=" << log.decimation
        << "\n";
    const auto& cols = csv_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << "\n";
    char buffer[32];
    for (const LogRow& row : log.rows) {
        const std::vector<double> values = row_values(row);
        for (std::size_t c = 0; c < values.size(); ++c) {
            std::snprintf(buffer, sizeof buffer, "%.17g", values[c]);
            out << (c ? "," : "") << buffer;
        }
        out << "\n";
    }
}

TrajectoryLog read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::config_missing_file, "cannot open " + path);
    TrajectoryLog log;
    std::string line;
    std::getline(in, line);  // metadata comment
    {
        std::istringstream meta(line);
        std::string token;
        while (meta >> token) {
            if (token.rfind("scenario=", 0) == 0) log.scenario = token.substr(9);
            if (token.rfind("dt=", 0) == 0) log.dt = std::stod(token.substr(3));
            if (token.rfind("decimation=", 0) == 0) log.decimation = std::stoi(token.substr(11));
        }
    }
    std::getline(in, line);  // header
    const std::size_t expected = csv_columns().size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> values;
        values.reserve(expected);
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != expected)
            throw Error(errc::config_parse, path + ": bad column count in row");
        LogRow row;
        fill_row(row, values);
        log.rows.push_back(std::move(row));
    }
    return log;
}

Json zigzag_metrics_to_json(const ZigzagMetrics& m) {
    return Json{{"t_first_peak_s", m.t_first_peak},
                {"overshoot_angles_rad", m.overshoot_angles},
                {"periods_s", m.periods},
                {"min_speed_mps", m.min_speed},
                {"initial_speed_mps", m.initial_speed},
                {"depth_envelope_m", m.depth_envelope},
                {"complete", m.complete}};
}

Json follow_metrics_to_json(const FollowMetrics& m) {
    return Json{{"max_vertical_error_m", m.max_vertical_error},
                {"mean_vertical_error_m", m.mean_vertical_error},
                {"max_horizontal_error_m", m.max_horizontal_error},
                {"mean_horizontal_error_m", m.mean_horizontal_error},
                {"t_max_vertical_s", m.t_max_vertical},
                {"t_max_horizontal_s", m.t_max_horizontal},
                {"clearance_violations", m.clearance_violations}};
}

Json turn_metrics_to_json(const TurnMetrics& m) {
    return Json{{"advance_m", m.advance},
                {"transfer_m", m.transfer},
                {"tactical_diameter_m", m.tactical_diameter},
                {"complete", m.complete}};
}

Json events_to_json(const EventLog& events) {
    Json counts = Json::object();
    for (const auto& [code, n] : events.counts()) counts[code] = n;
    Json list = Json::array();
    for (const Event& e : events.events())
        list.push_back({{"t", e.time}, {"code", e.code}, {"detail", e.detail}});
    return Json{{"counts", counts}, {"stored", list}};
}

int exit_code_for(const std::string& error_code) {
    if (error_code.rfind("config/", 0) == 0 || error_code.rfind("coeffs/", 0) == 0) return 3;
    if (error_code.rfind("mesh/", 0) == 0 || error_code.rfind("wave/", 0) == 0) return 4;
    if (error_code.rfind("l1/", 0) == 0 || error_code.rfind("guidance/", 0) == 0 ||
        error_code.rfind("path/", 0) == 0)
        return 5;
    if (error_code.rfind("sim/", 0) == 0) return 6;
    return 7;
}

}  // namespace subrom
