#include "subrom/mesh_primitives.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace subrom {

HullMesh make_icosphere(int subdivisions, double radius) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int id = static_cast<int>(verts.size());
            verts.push_back(0.5 * (verts[static_cast<std::size_t>(a)] +
                                   verts[static_cast<std::size_t>(b)]));
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    for (Vec3& v : verts) v = radius * v.normalized();
    return HullMesh::build(std::move(verts), std::move(faces));
}

namespace {

double hull_radius(const HullShape& s, double x) {
    const double nose_start = s.length / 2.0 - s.nose_length;
    const double tail_end = -s.length / 2.0 + s.tail_length;
    if (x >= nose_start) {
        const double xi = (x - nose_start) / s.nose_length;  // 0..1
        return s.radius * std::sqrt(std::max(0.0, 1.0 - xi * xi));
    }
    if (x <= tail_end) {
        const double xi = (tail_end - x) / s.tail_length;  // 0..1
        return s.radius * (1.0 - std::pow(xi, s.tail_power));
    }
    return s.radius;
}

}  // namespace

HullMesh make_revolved_hull(const HullShape& shape) {
    const int nx = shape.axial_segments;
    const int nt = shape.circumferential_segments;
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;

    const int tail_pole = 0;
    const int nose_pole = 1;
    verts.emplace_back(-shape.length / 2.0, 0.0, 0.0);
    verts.emplace_back(shape.length / 2.0, 0.0, 0.0);

    auto ring_vertex = [&](int ring, int j) { return 2 + ring * nt + (j % nt); };

    const int interior = nx - 2;
    for (int i = 1; i <= interior; ++i) {
        const double x = -shape.length / 2.0 + shape.length * i / (nx - 1);
        const double r = hull_radius(shape, x);
        for (int j = 0; j < nt; ++j) {
            const double theta = 2.0 * kPi * j / nt;
            verts.emplace_back(x, r * std::cos(theta), r * std::sin(theta));
        }
    }

    for (int j = 0; j < nt; ++j)
        faces.push_back({tail_pole, ring_vertex(0, j + 1), ring_vertex(0, j)});
    for (int ring = 0; ring + 1 < interior; ++ring) {
        for (int j = 0; j < nt; ++j) {
            const int a = ring_vertex(ring, j);
            const int b = ring_vertex(ring + 1, j);
            const int c = ring_vertex(ring + 1, j + 1);
            const int d = ring_vertex(ring, j + 1);
            faces.push_back({a, c, b});
            faces.push_back({a, d, c});
        }
    }
    for (int j = 0; j < nt; ++j)
        faces.push_back({nose_pole, ring_vertex(interior - 1, j), ring_vertex(interior - 1, j + 1)});

    return HullMesh::build(std::move(verts), std::move(faces));
}

}  // namespace subrom
