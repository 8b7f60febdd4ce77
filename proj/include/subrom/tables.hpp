#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace subrom {

/// One lookup axis: strictly increasing sample coordinates. A single-entry
/// axis makes the table constant along that dimension.
struct GridAxis {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double front() const { return values.front(); }
    double back() const { return values.back(); }

    /// Clamped cell locate: index i and weight w in [0,1] such that the
    /// interpolated value is (1-w)*v[i] + w*v[i+1] (w = 0, i = 0 for a
    /// singleton axis).
    void locate(double x, std::size_t& i, double& w) const;

    /// Throws Error unless non-empty, finite and strictly increasing.
    void validate(const std::string& name) const;
};

/// Dense 2-D table with clamped bilinear interpolation.
class Grid2 {
public:
    Grid2() = default;
    Grid2(GridAxis a0, GridAxis a1, std::vector<double> values);

    double operator()(double x0, double x1) const;
    double at(std::size_t i, std::size_t j) const { return values_[i * axis1_.size() + j]; }

    const GridAxis& axis0() const { return axis0_; }
    const GridAxis& axis1() const { return axis1_; }
    bool empty() const { return values_.empty(); }

private:
    GridAxis axis0_, axis1_;
    std::vector<double> values_;
};

/// Dense 3-D table with clamped trilinear interpolation.
class Grid3 {
public:
    Grid3() = default;
    Grid3(GridAxis a0, GridAxis a1, GridAxis a2, std::vector<double> values);

    double operator()(double x0, double x1, double x2) const;
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return values_[(i * axis1_.size() + j) * axis2_.size() + k];
    }

    const GridAxis& axis0() const { return axis0_; }
    const GridAxis& axis1() const { return axis1_; }
    const GridAxis& axis2() const { return axis2_; }
    bool empty() const { return values_.empty(); }

    /// Build a table that is identically zero on a trivial grid.
    static Grid3 zero();

private:
    GridAxis axis0_, axis1_, axis2_;
    std::vector<double> values_;
};

}  // namespace subrom
