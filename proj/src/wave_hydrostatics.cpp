#include "subrom/wave_hydrostatics.hpp"

#include "subrom/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace subrom {

HullMesh HullMesh::build(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles) {
    HullMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);
    const int nv = static_cast<int>(mesh.vertices.size());

    double bbox_diag = 0.0;
    if (nv > 0) {
        Vec3 lo = mesh.vertices.front(), hi = mesh.vertices.front();
        for (const Vec3& v : mesh.vertices) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        bbox_diag = (hi - lo).norm();
    }

    mesh.area_vectors.reserve(mesh.triangles.size());
    mesh.gauss_points.reserve(mesh.triangles.size());
    for (const auto& tri : mesh.triangles) {
        for (int idx : tri)
            if (idx < 0 || idx >= nv)
                throw Error(errc::mesh_index, "triangle vertex index out of range");
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
        const Vec3 area = 0.5 * (b - a).cross(c - a);
        if (area.norm() < 1e-14 * bbox_diag * bbox_diag)
            throw Error(errc::mesh_degenerate, "zero-area triangle in mesh");
        mesh.area_vectors.push_back(area);
        mesh.gauss_points.push_back({0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)});
        mesh.total_area += area.norm();
    }
    return mesh;
}

double HullMesh::closure_residual() const {
    Vec3 sum = Vec3::Zero();
    for (const Vec3& a : area_vectors) sum += a;
    return total_area > 0.0 ? sum.norm() / total_area : 0.0;
}

void HullMesh::validate_closed(double tol) const {
    if (element_count() == 0) throw Error(errc::mesh_not_closed, "mesh has no elements");
    const double residual = closure_residual();
    if (residual > tol)
        throw Error(errc::mesh_not_closed,
                    "area-vector closure residual " + std::to_string(residual) +
                        " exceeds tolerance; surface is not closed");
}

WaveField WaveField::from_wavelength(double amplitude, double wavelength, double heading,
                                     double rho, double g) {
    WaveField wf;
    wf.amplitude = amplitude;
    wf.wave_number = 2.0 * kPi / wavelength;
    wf.frequency = std::sqrt(g * wf.wave_number);
    wf.heading = heading;
    wf.rho = rho;
    wf.g = g;
    wf.validate();
    return wf;
}

WaveField WaveField::from_period(double amplitude, double period, double heading, double rho,
                                 double g) {
    WaveField wf;
    wf.amplitude = amplitude;
    wf.frequency = 2.0 * kPi / period;
    wf.wave_number = wf.frequency * wf.frequency / g;
    wf.heading = heading;
    wf.rho = rho;
    wf.g = g;
    wf.validate();
    return wf;
}

void WaveField::validate(bool allow_override, EventLog* events) const {
    if (amplitude < 0.0 || !(wave_number > 0.0) || !(frequency > 0.0) || !(rho > 0.0) ||
        !(g > 0.0))
        throw Error(errc::wave_invalid, "wave field parameters out of range");
    const double dispersion = frequency * frequency - g * wave_number;
    if (std::abs(dispersion) > 1e-9 * g * wave_number) {
        if (!allow_override)
            throw Error(errc::wave_invalid,
                        "omega^2 != g k; deep-water dispersion violated (set the override to "
                        "accept a non-dispersive pair)");
        record_event(events, evc::dispersion_override, "deep-water dispersion overridden");
    }
}

double wave_pressure(double x, double z, double t, const WaveField& wf) {
    if (z > 0.0)
        throw Error(errc::wave_above_surface, "wave pressure queried above the calm surface");
    return -wf.rho * wf.g * z +
           wf.rho * wf.g * wf.amplitude * std::exp(wf.wave_number * z) *
               std::sin(wf.wave_number * x - wf.frequency * t);
}

Vec6 integrate_field_loads(const HullMesh& mesh, const VehicleState& pose,
                           const std::function<double(const Vec3&, double)>& pressure, double t) {
    const Mat3 R = body_to_inertial(pose.attitude);
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();
    for (std::size_t i = 0; i < mesh.element_count(); ++i) {
        const Vec3& area = mesh.area_vectors[i];
        for (const Vec3& r : mesh.gauss_points[i]) {
            const double p = pressure(pose.position + R * r, t);
            const Vec3 df = -(p / 3.0) * area;
            force += df;
            moment += r.cross(df);
        }
    }
    Vec6 loads;
    loads.head<3>() = force;
    loads.tail<3>() = moment;
    return loads;
}

Vec6 integrate_pressure_loads(const HullMesh& mesh, const VehicleState& pose, const WaveField& wf,
                              double t) {
    const double cs = std::cos(wf.heading), sn = std::sin(wf.heading);
    auto field = [&](const Vec3& inertial, double time) {
        const double zw = wave_frame_z(inertial.z());
        if (zw > 0.0)
            throw Error(errc::wave_emergence,
                        "Gauss point above the calm surface: emergence is not modeled");
        const double xw = inertial.x() * cs + inertial.y() * sn - wf.phase_origin;
        return wave_pressure(xw, zw, time, wf);
    };
    return integrate_field_loads(mesh, pose, field, t);
}

namespace {

double mesh_depth_clearance(const HullMesh& mesh) {
    double extent = 1.0;
    for (const Vec3& v : mesh.vertices) extent = std::max(extent, v.norm());
    return 2.0 * extent + 1.0;
}

Vec6 calm_loads(const HullMesh& mesh, const VehicleState& pose, double rho, double g) {
    WaveField calm;
    calm.amplitude = 0.0;
    calm.rho = rho;
    calm.g = g;
    return integrate_pressure_loads(mesh, pose, calm, 0.0);
}

}  // namespace

double neutral_buoyancy_weight(const HullMesh& mesh, double rho, double g) {
    mesh.validate_closed();
    VehicleState pose;
    pose.position = Vec3(0.0, 0.0, mesh_depth_clearance(mesh));
    return calm_loads(mesh, pose, rho, g).head<3>().norm();
}

Vec3 mesh_buoyancy_center(const HullMesh& mesh, double rho, double g) {
    mesh.validate_closed();
    VehicleState upright;
    upright.position = Vec3(0.0, 0.0, mesh_depth_clearance(mesh));
    const Vec6 level = calm_loads(mesh, upright, rho, g);
    const double B = level.head<3>().norm();
    // Upright buoyancy is along -z body: M = r_cb x (0,0,-B).
    const double x_cb = level(4) / B;
    const double y_cb = -level(3) / B;

    VehicleState rolled = upright;
    rolled.attitude.x() = kPi / 2.0;  // buoyancy along -y body: M = r_cb x (0,-B,0)
    const Vec6 heeled = calm_loads(mesh, rolled, rho, g);
    const double z_cb = heeled(3) / B;
    return Vec3(x_cb, y_cb, z_cb);
}

HullMesh load_stl_mesh(const std::string& path, EventLog* events) {
    std::ifstream in(path);
    if (!in) throw Error(errc::config_missing_file, "cannot open mesh file: " + path);

    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::map<std::tuple<double, double, double>, int> index;
    auto intern = [&](const Vec3& v) {
        const auto key = std::make_tuple(v.x(), v.y(), v.z());
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(vertices.size());
        vertices.push_back(v);
        index.emplace(key, id);
        return id;
    };

    std::string token;
    Vec3 stored_normal = Vec3::Zero();
    std::array<Vec3, 3> corners;
    int corner = 0;
    bool normal_mismatch = false;
    while (in >> token) {
        if (token == "facet") {
            in >> token;  // "normal"
            in >> stored_normal.x() >> stored_normal.y() >> stored_normal.z();
            corner = 0;
        } else if (token == "vertex") {
            Vec3 v;
            if (!(in >> v.x() >> v.y() >> v.z()))
                throw Error(errc::mesh_parse, "malformed vertex record in " + path);
            if (corner < 3) corners[static_cast<std::size_t>(corner)] = v;
            ++corner;
        } else if (token == "endfacet") {
            if (corner != 3)
                throw Error(errc::mesh_parse, "facet without exactly three vertices in " + path);
            const Vec3 winding_normal =
                (corners[1] - corners[0]).cross(corners[2] - corners[0]);
            if (stored_normal.norm() > 0.0 && winding_normal.norm() > 0.0 &&
                stored_normal.dot(winding_normal) < 0.0)
                normal_mismatch = true;
            triangles.push_back({intern(corners[0]), intern(corners[1]), intern(corners[2])});
        }
    }
    if (triangles.empty()) throw Error(errc::mesh_parse, "no facets found in " + path);
    if (normal_mismatch)
        record_event(events, evc::mesh_normal_mismatch,
                     "stored facet normals disagree with vertex winding; winding is used");
    return HullMesh::build(std::move(vertices), std::move(triangles));
}

void write_stl_mesh(const std::string& path, const HullMesh& mesh, const std::string& solid_name) {
    std::ofstream out(path);
    if (!out) throw Error(errc::config_missing_file, "cannot write mesh file: " + path);
    out.precision(17);
    out << "solid " << solid_name << "\n";
    for (std::size_t i = 0; i < mesh.element_count(); ++i) {
        const Vec3 n = mesh.area_vectors[i].normalized();
        out << "  facet normal " << n.x() << " " << n.y() << " " << n.z() << "\n"
            << "    outer loop\n";
        for (int idx : mesh.triangles[i]) {
            const Vec3& v = mesh.vertices[static_cast<std::size_t>(idx)];
            out << "      vertex " << v.x() << " " << v.y() << " " << v.z() << "\n";
        }
        out << "    endloop\n  endfacet\n";
    }
    out << "endsolid " << solid_name << "\n";
}

}  // namespace subrom
