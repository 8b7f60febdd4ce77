#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subrom/errors.hpp"
#include "subrom/path_geometry.hpp"

#include <random>

using namespace subrom;

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Direct Bernstein-basis oracle.
Vec3 bernstein_direct(const BernsteinPath& path, double gamma) {
    const int n = path.degree();
    const double tau = gamma / path.final_time;
    Vec3 sum = Vec3::Zero();
    for (int i = 0; i <= n; ++i)
        sum += binomial(n, i) * std::pow(tau, i) * std::pow(1.0 - tau, n - i) *
               path.control_points[static_cast<std::size_t>(i)];
    return sum;
}

BernsteinPath line_path() {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 10), Vec3(200, 0, 10)};
    p.final_time = 100.0;
    return p;
}

BernsteinPath planar_cubic() {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 5), Vec3(100, 0, 5), Vec3(200, 120, 5), Vec3(220, 260, 5)};
    p.final_time = 300.0;
    return p;
}

}  // namespace

TEST_CASE("linear path: midpoint, derivative, curvature") {
    BernsteinPath p;
    p.control_points = {Vec3(1, 2, 3), Vec3(5, -2, 7)};
    p.final_time = 10.0;
    const PathSample mid = eval_path(p, 5.0);
    CHECK((mid.position - Vec3(3, 0, 5)).norm() < 1e-14);
    CHECK((mid.first_derivative - Vec3(0.4, -0.4, 0.4)).norm() < 1e-14);
    CHECK(mid.second_derivative.norm() == 0.0);
}

TEST_CASE("endpoint interpolation") {
    const BernsteinPath p = planar_cubic();
    CHECK((eval_path(p, 0.0).position - p.control_points.front()).norm() < 1e-12);
    CHECK((eval_path(p, p.final_time).position - p.control_points.back()).norm() < 1e-12);
}

TEST_CASE("de casteljau equals the direct basis form") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> coord(-100.0, 100.0);
    BernsteinPath p;
    for (int i = 0; i < 4; ++i) p.control_points.emplace_back(coord(rng), coord(rng), coord(rng));
    p.final_time = 50.0;
    std::uniform_real_distribution<double> g(0.0, 50.0);
    for (int k = 0; k < 100; ++k) {
        const double gamma = g(rng);
        const Vec3 a = eval_path(p, gamma).position;
        const Vec3 b = bernstein_direct(p, gamma);
        CHECK((a - b).norm() < 1e-12 * (1.0 + b.norm()));
    }
}

TEST_CASE("derivatives match finite differences") {
    const BernsteinPath p = planar_cubic();
    const double h = 1e-6;
    for (double gamma : {30.0, 111.0, 222.0}) {
        const PathSample s = eval_path(p, gamma);
        const Vec3 fd1 =
            (eval_path(p, gamma + h).position - eval_path(p, gamma - h).position) / (2 * h);
        CHECK((s.first_derivative - fd1).norm() < 1e-6 * (1.0 + fd1.norm()));
        const Vec3 fd2 = (eval_path(p, gamma + h).first_derivative -
                          eval_path(p, gamma - h).first_derivative) /
                         (2 * h);
        CHECK((s.second_derivative - fd2).norm() < 1e-5 * (1.0 + fd2.norm()));
    }
}

TEST_CASE("gamma outside the domain clamps with an event") {
    const BernsteinPath p = line_path();
    EventLog log;
    const PathSample s = eval_path(p, 150.0, &log);
    CHECK(log.count(evc::gamma_clamped) == 1);
    CHECK((s.position - p.control_points.back()).norm() < 1e-12);
}

TEST_CASE("convex hull: evaluation stays in the control-point bounding box") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        BernsteinPath p;
        for (int i = 0; i < 6; ++i)
            p.control_points.emplace_back(coord(rng), coord(rng), coord(rng));
        p.final_time = 10.0;
        Vec3 lo = p.control_points[0], hi = p.control_points[0];
        for (const Vec3& c : p.control_points) {
            lo = lo.cwiseMin(c);
            hi = hi.cwiseMax(c);
        }
        for (int k = 0; k <= 50; ++k) {
            const Vec3 x = eval_path(p, 10.0 * k / 50.0).position;
            for (int a = 0; a < 3; ++a) {
                CHECK(x(a) >= lo(a) - 1e-12);
                CHECK(x(a) <= hi(a) + 1e-12);
            }
        }
    }
}

TEST_CASE("validation rejects bad paths") {
    BernsteinPath p;
    p.control_points = {Vec3::Zero()};
    p.final_time = 1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.control_points.push_back(Vec3::Ones());
    p.final_time = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("straight path: constant frame, zero angular rate") {
    const FramedPath fp(line_path());
    const TransportFrame f0 = fp.frame(0.0);
    for (double gamma : {10.0, 50.0, 99.0}) {
        const TransportFrame f = fp.frame(gamma);
        CHECK((f.rotation - f0.rotation).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(f.angular_velocity.norm() < 1e-12);
    }
    CHECK((f0.rotation.col(0) - Vec3(1, 0, 0)).norm() < 1e-12);
    // Initial t2 = projected inertial vertical.
    CHECK((f0.rotation.col(1) - Vec3(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("planar path: the off-plane axis never twists away from the normal") {
    // Vertical-plane curve (y = 0): initial t2 lies in the plane, so t3 must
    // stay aligned with the analytic plane normal (0, 1, 0).
    BernsteinPath vertical;
    vertical.control_points = {Vec3(0, 0, 5), Vec3(100, 0, 9), Vec3(200, 0, 32), Vec3(230, 0, 60)};
    vertical.final_time = 300.0;
    const FramedPath fpv(vertical);
    for (int k = 0; k <= 40; ++k) {
        const TransportFrame f = fpv.frame(300.0 * k / 40.0);
        CHECK(std::abs(std::abs(f.rotation.col(2).dot(Vec3(0, 1, 0))) - 1.0) < 1e-6);
    }

    // Horizontal-plane curve: here the initial t2 IS the plane normal
    // (projected vertical), and the rotation-minimizing property keeps it so.
    const FramedPath fph(planar_cubic());
    for (int k = 0; k <= 40; ++k) {
        const TransportFrame f = fph.frame(300.0 * k / 40.0);
        CHECK(std::abs(std::abs(f.rotation.col(1).dot(Vec3(0, 0, 1))) - 1.0) < 1e-6);
    }
}

TEST_CASE("frame orthonormality everywhere") {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 40), Vec3(150, 30, 45), Vec3(250, -60, 60), Vec3(380, 40, 35),
                        Vec3(480, 10, 50)};
    p.final_time = 400.0;
    const FramedPath fp(p);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> g(0.0, 400.0);
    for (int k = 0; k < 200; ++k) {
        const Mat3 R = fp.frame(g(rng)).rotation;
        CHECK((R.transpose() * R - Mat3::Identity()).norm() < 1e-9);
        CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK((R.col(0) - eval_path(p, 0).first_derivative.normalized()).norm() < 10.0);
    }
}

TEST_CASE("frame continuity in gamma") {
    const FramedPath fp(planar_cubic());
    for (double gamma : {25.0, 149.9, 150.0, 260.0}) {
        const Mat3 R = fp.frame(gamma).rotation;
        double prev_diff = 1e300;
        for (double h : {1.0, 0.1, 0.01, 0.001}) {
            const double diff = (fp.frame(std::min(gamma + h, 300.0)).rotation - R).norm();
            CHECK(diff <= prev_diff + 1e-12);
            prev_diff = diff;
        }
        CHECK(prev_diff < 1e-4);
    }
}

TEST_CASE("omega consistency: Rdot = R skew(omega)") {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 30), Vec3(120, 40, 34), Vec3(260, -30, 44), Vec3(400, 60, 24),
                        Vec3(520, 0, 40)};
    p.final_time = 500.0;
    const FramedPath fp(p, 512);
    const double h = 500.0 / 511.0;  // grid step
    for (int k = 40; k < 470; k += 37) {
        const double gamma = h * k;
        const Mat3 R = fp.frame(gamma).rotation;
        const Mat3 Rp = fp.frame(gamma + h).rotation;
        const Mat3 Rm = fp.frame(gamma - h).rotation;
        const Mat3 Rdot_fd = (Rp - Rm) / (2.0 * h);
        const Mat3 Rdot_model = R * skew(fp.frame(gamma).angular_velocity);
        CHECK((Rdot_fd - Rdot_model).cwiseAbs().maxCoeff() < 1e-4);
    }
}
