#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subrom/errors.hpp"
#include "subrom/tables.hpp"

#include <random>

using namespace subrom;

namespace {

Grid3 make_table(const std::vector<double>& a0, const std::vector<double>& a1,
                 const std::vector<double>& a2, double (*f)(double, double, double)) {
    std::vector<double> values;
    values.reserve(a0.size() * a1.size() * a2.size());
    for (double x : a0)
        for (double y : a1)
            for (double z : a2) values.push_back(f(x, y, z));
    return Grid3({a0}, {a1}, {a2}, values);
}

double trilinear_fn(double x, double y, double z) { return 2.0 * x - 3.0 * y + 0.5 * z + x * 0.0; }

}  // namespace

TEST_CASE("axis validation") {
    const GridAxis not_increasing{{1.0, 1.0, 2.0}};
    CHECK_THROWS_AS(not_increasing.validate("a"), Error);
    const GridAxis empty{{}};
    CHECK_THROWS_AS(empty.validate("a"), Error);
    const GridAxis good{{-2.0, 0.0, 5.0}};
    CHECK_NOTHROW(good.validate("a"));
}

TEST_CASE("grid3 exact at nodes") {
    const std::vector<double> a0{1.0, 2.0, 4.0}, a1{0.0, 4.0, 8.0, 12.0}, a2{2.5, 4.0, 7.0, 25.0};
    const Grid3 t = make_table(a0, a1, a2, trilinear_fn);
    for (double x : a0)
        for (double y : a1)
            for (double z : a2) CHECK(t(x, y, z) == doctest::Approx(trilinear_fn(x, y, z)).epsilon(1e-14));
}

TEST_CASE("grid3 reproduces a trilinear function everywhere") {
    const Grid3 t = make_table({1.0, 2.0, 4.0}, {0.0, 4.0, 12.0}, {2.5, 7.0, 25.0}, trilinear_fn);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(1.0, 4.0), uy(0.0, 12.0), uz(2.5, 25.0);
    for (int k = 0; k < 200; ++k) {
        const double x = ux(rng), y = uy(rng), z = uz(rng);
        CHECK(t(x, y, z) == doctest::Approx(trilinear_fn(x, y, z)).epsilon(1e-12));
    }
}

TEST_CASE("grid3 interpolation bounded by neighboring node values") {
    // Non-linear data: bounds still hold cell-wise for multilinear blending.
    auto f = [](double x, double y, double z) { return std::sin(x) * y * y + z; };
    std::vector<double> vals;
    const std::vector<double> a{0.0, 1.0, 2.0};
    for (double x : a)
        for (double y : a)
            for (double z : a) vals.push_back(f(x, y, z));
    const Grid3 t({a}, {a}, {a}, vals);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const double x = u(rng), y = u(rng), z = u(rng);
        double lo = 1e300, hi = -1e300;
        for (double xc : {std::floor(x), std::ceil(x)})
            for (double yc : {std::floor(y), std::ceil(y)})
                for (double zc : {std::floor(z), std::ceil(z)}) {
                    lo = std::min(lo, f(xc, yc, zc));
                    hi = std::max(hi, f(xc, yc, zc));
                }
        const double v = t(x, y, z);
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("grid3 clamps outside the grid") {
    const Grid3 t = make_table({1.0, 2.0}, {0.0, 1.0}, {0.0, 1.0}, trilinear_fn);
    CHECK(t(0.0, 0.5, 0.5) == doctest::Approx(t(1.0, 0.5, 0.5)));
    CHECK(t(9.0, 0.5, 0.5) == doctest::Approx(t(2.0, 0.5, 0.5)));
}

TEST_CASE("grid3 singleton axis is constant along that dimension") {
    const Grid3 t({{1.0, 2.0}}, {{5.0}}, {{0.0, 1.0}}, {1.0, 2.0, 3.0, 4.0});
    CHECK(t(1.0, -100.0, 0.0) == doctest::Approx(t(1.0, 100.0, 0.0)));
    CHECK(t(1.5, 0.0, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("grid2 bilinear midpoint") {
    const Grid2 t({{0.0, 1.0}}, {{0.0, 1.0}}, {0.0, 2.0, 4.0, 6.0});
    CHECK(t(0.5, 0.5) == doctest::Approx(3.0));
}

TEST_CASE("nan values rejected at load") {
    CHECK_THROWS_AS(Grid2({{0.0, 1.0}}, {{0.0}}, {1.0, std::nan("")}), Error);
    CHECK_THROWS_AS(Grid3({{0.0, 1.0}}, {{0.0}}, {{0.0}}, {1.0}), Error);  // size mismatch
}
