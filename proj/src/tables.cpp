#include "subrom/tables.hpp"

#include "subrom/errors.hpp"

#include <cmath>

namespace subrom {

void GridAxis::locate(double x, std::size_t& i, double& w) const {
    const std::size_t n = values.size();
    if (n == 1) {
        i = 0;
        w = 0.0;
        return;
    }
    if (x <= values.front()) {
        i = 0;
        w = 0.0;
        return;
    }
    if (x >= values.back()) {
        i = n - 2;
        w = 1.0;
        return;
    }
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (values[mid] <= x ? lo : hi) = mid;
    }
    i = lo;
    w = (x - values[lo]) / (values[lo + 1] - values[lo]);
}

void GridAxis::validate(const std::string& name) const {
    if (values.empty()) throw Error(errc::coeffs_axis, "axis '" + name + "' is empty");
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]))
            throw Error(errc::coeffs_axis, "axis '" + name + "' has a non-finite entry");
        if (k > 0 && values[k] <= values[k - 1])
            throw Error(errc::coeffs_axis, "axis '" + name + "' is not strictly increasing");
    }
}

namespace {
void validate_values(const std::vector<double>& values, std::size_t expected) {
    if (values.size() != expected)
        throw Error(errc::coeffs_schema, "table value count does not match axis sizes");
    for (double v : values)
        if (!std::isfinite(v)) throw Error(errc::coeffs_nan, "table contains a non-finite value");
}
}  // namespace

Grid2::Grid2(GridAxis a0, GridAxis a1, std::vector<double> values)
    : axis0_(std::move(a0)), axis1_(std::move(a1)), values_(std::move(values)) {
    axis0_.validate("axis0");
    axis1_.validate("axis1");
    validate_values(values_, axis0_.size() * axis1_.size());
}

double Grid2::operator()(double x0, double x1) const {
    std::size_t i, j;
    double wi, wj;
    axis0_.locate(x0, i, wi);
    axis1_.locate(x1, j, wj);
    const std::size_t i1 = axis0_.size() == 1 ? i : i + 1;
    const std::size_t j1 = axis1_.size() == 1 ? j : j + 1;
    const double v00 = at(i, j), v01 = at(i, j1), v10 = at(i1, j), v11 = at(i1, j1);
    return (1 - wi) * ((1 - wj) * v00 + wj * v01) + wi * ((1 - wj) * v10 + wj * v11);
}

Grid3::Grid3(GridAxis a0, GridAxis a1, GridAxis a2, std::vector<double> values)
    : axis0_(std::move(a0)), axis1_(std::move(a1)), axis2_(std::move(a2)),
      values_(std::move(values)) {
    axis0_.validate("axis0");
    axis1_.validate("axis1");
    axis2_.validate("axis2");
    validate_values(values_, axis0_.size() * axis1_.size() * axis2_.size());
}

double Grid3::operator()(double x0, double x1, double x2) const {
    std::size_t i, j, k;
    double wi, wj, wk;
    axis0_.locate(x0, i, wi);
    axis1_.locate(x1, j, wj);
    axis2_.locate(x2, k, wk);
    const std::size_t i1 = axis0_.size() == 1 ? i : i + 1;
    const std::size_t j1 = axis1_.size() == 1 ? j : j + 1;
    const std::size_t k1 = axis2_.size() == 1 ? k : k + 1;
    auto plane = [&](std::size_t ii) {
        const double v00 = at(ii, j, k), v01 = at(ii, j, k1);
        const double v10 = at(ii, j1, k), v11 = at(ii, j1, k1);
        return (1 - wj) * ((1 - wk) * v00 + wk * v01) + wj * ((1 - wk) * v10 + wk * v11);
    };
    return (1 - wi) * plane(i) + wi * plane(i1);
}

Grid3 Grid3::zero() {
    return Grid3({{0.0}}, {{0.0}}, {{0.0}}, {0.0});
}

}  // namespace subrom
