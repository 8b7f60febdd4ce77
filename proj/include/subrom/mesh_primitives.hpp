#pragma once

#include "subrom/wave_hydrostatics.hpp"

namespace subrom {

/// Unit-style icosphere: icosahedron subdivided `subdivisions` times and
/// projected to radius r. Face count is 20 * 4^subdivisions; outward winding.
HullMesh make_icosphere(int subdivisions, double radius);

/// Closed axisymmetric hull of revolution: elliptical nose, parallel middle
/// body, power-law tapered stern. Centered on the x axis (body origin on the
/// shaft line, midships). Roughly BB2-sized defaults.
struct HullShape {
    double length = 70.2;       // m
    double radius = 4.8;        // m
    double nose_length = 8.0;   // m
    double tail_length = 20.0;  // m
    double tail_power = 2.5;
    int axial_segments = 83;
    int circumferential_segments = 44;
};

HullMesh make_revolved_hull(const HullShape& shape = {});

}  // namespace subrom
