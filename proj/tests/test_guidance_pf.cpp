#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subrom/errors.hpp"
#include "subrom/guidance_pf.hpp"
#include "support/pf_kinematic.hpp"

#include <random>

using namespace subrom;

namespace {

FramedPath straight_path() {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 50), Vec3(600, 0, 50)};
    p.final_time = 300.0;
    return FramedPath(p);
}

FramedPath arc_path() {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 50), Vec3(250, 0, 50), Vec3(450, 150, 50), Vec3(520, 360, 50)};
    p.final_time = 300.0;
    return FramedPath(p);
}

Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

}  // namespace

TEST_CASE("position error: on-path, frame-aligned offset, isometry") {
    const FramedPath path = arc_path();
    const double gamma = 120.0;
    const PathSample s = path.eval(gamma);
    CHECK(position_error(s.position, path, gamma).norm() < 1e-12);

    const Mat3 R = path.frame(gamma).rotation;
    const Vec3 offset_t1 = s.position + 3.5 * R.col(0);
    const Vec3 p_T = position_error(offset_t1, path, gamma);
    CHECK((p_T - Vec3(3.5, 0, 0)).norm() < 1e-10);

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int k = 0; k < 50; ++k) {
        const Vec3 off(u(rng), u(rng), u(rng));
        CHECK(position_error(s.position + off, path, gamma).norm() ==
              doctest::Approx(off.norm()).epsilon(1e-12));
    }
}

TEST_CASE("attitude error: identity") {
    const AttitudeError e = attitude_error(Mat3::Identity(), Mat3::Identity());
    CHECK(e.Psi == 0.0);
    CHECK(e.e_R.norm() == 0.0);
}

TEST_CASE("attitude error: small rotation about body-y") {
    // Series oracle: e_R = 1/2 (R(0,2), -R(0,1)) = (eps/2, 0) + O(eps^3)
    // for R_tilde = rot_y(eps), i.e. R_W = R_D rot_y(eps).
    const double eps = 1e-4;
    const AttitudeError e = attitude_error(rot_y(eps), Mat3::Identity());
    CHECK(e.e_R(0) == doctest::Approx(eps / 2.0).epsilon(1e-6));
    CHECK(std::abs(e.e_R(1)) < 1e-12);
    CHECK(e.Psi == doctest::Approx(0.25 * eps * eps).epsilon(1e-6));
}

TEST_CASE("attitude error: invariant under a common rotation") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> a(-1.0, 1.0);
    for (int k = 0; k < 30; ++k) {
        const Mat3 R_W = (rot_z(a(rng)) * rot_y(a(rng))).eval();
        const Mat3 R_D = (rot_z(a(rng)) * rot_y(a(rng))).eval();
        const Mat3 Q = (rot_y(a(rng)) * rot_z(a(rng))).eval();
        const AttitudeError e1 = attitude_error(R_W, R_D);
        const AttitudeError e2 = attitude_error(Q * R_W, Q * R_D);
        CHECK((e1.R_tilde - e2.R_tilde).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(e1.Psi == doctest::Approx(e2.Psi).epsilon(1e-12));
        CHECK((e1.e_R - e2.e_R).norm() < 1e-12);
    }
}

TEST_CASE("attitude error: pure roll is projected out") {
    for (double roll_deg : {5.0, 15.0, 30.0}) {
        const Mat3 R_roll = Eigen::AngleAxisd(deg2rad(roll_deg), Vec3::UnitX()).toRotationMatrix();
        const AttitudeError e = attitude_error(Mat3::Identity(), R_roll);
        CHECK(e.e_R.norm() < 1e-14);
        CHECK(e.Psi < 1e-14);
    }
}

TEST_CASE("attitude error: non-orthonormal input rejected") {
    Mat3 bad = Mat3::Identity();
    bad(0, 0) = 1.01;
    CHECK_THROWS_AS(attitude_error(bad, Mat3::Identity()), Error);
}

TEST_CASE("gamma rate: on-path, perpendicular, and behind-target cases") {
    BernsteinPath p;
    p.control_points = {Vec3(0, 0, 0), Vec3(200, 0, 0)};
    p.final_time = 100.0;  // ||p_d'|| = 2
    const FramedPath path(p);
    const double gamma = 40.0;
    const PathSample s = path.eval(gamma);

    CHECK(gamma_rate(3.0, Vec3(1, 0, 0), s.position, path, gamma, 1.0) == doctest::Approx(1.5));
    CHECK(gamma_rate(3.0, Vec3(0, 1, 0), s.position, path, gamma, 1.0) == doctest::Approx(0.0));

    const Vec3 behind = s.position - Vec3(5.0, 0, 0);
    const double gd_behind = gamma_rate(3.0, Vec3(1, 0, 0), behind, path, gamma, 1.0);
    CHECK(gd_behind < 1.5);
    CHECK(gd_behind == doctest::Approx((3.0 - 1.0 * 5.0) / 2.0));
}

TEST_CASE("rate commands: zero, feed-forward selection, feedback-only, saturation") {
    CHECK(rate_commands(Mat3::Identity(), Vec3::Zero(), Vec3::Zero(), Mat3::Identity(), 1.0,
                        Vec2::Zero(), 0.5)
              .norm() == 0.0);

    const Vec2 ff = rate_commands(Mat3::Identity(), Vec3::Zero(), Vec3(0, 0.2, 0),
                                  Mat3::Identity(), 1.0, Vec2::Zero(), 0.5);
    CHECK(ff(0) == doctest::Approx(0.2));
    CHECK(ff(1) == doctest::Approx(0.0));

    const Vec2 fb = rate_commands(Mat3::Identity(), Vec3::Zero(), Vec3::Zero(), Mat3::Identity(),
                                  0.7, Vec2(0.1, -0.05), 0.5);
    CHECK((fb - Vec2(-0.14, 0.07)).norm() < 1e-14);

    EventLog log;
    const Vec2 sat = rate_commands(Mat3::Identity(), Vec3::Zero(), Vec3(0, 3.0, 4.0),
                                   Mat3::Identity(), 1.0, Vec2::Zero(), 0.5, &log);
    CHECK(sat.norm() == doctest::Approx(0.5));
    CHECK(sat(0) / sat(1) == doctest::Approx(3.0 / 4.0));
    CHECK(log.count(evc::rate_command_saturated) == 1);
}

TEST_CASE("domain check boundary semantics") {
    CHECK(domain_check(Vec3::Zero(), 0.0, 0.4, 10.0));
    CHECK(domain_check(Vec3::Zero(), 0.16, 0.4, 10.0));          // Psi = c^2, inclusive
    CHECK_FALSE(domain_check(Vec3(0.1, 0, 0), 0.16, 0.4, 10.0));  // beyond the boundary
}

TEST_CASE("desired frame: on-path alignment, lateral tilt, large-d limit") {
    const FramedPath path = straight_path();
    const double gamma = 100.0;
    const PathSample s = path.eval(gamma);
    const Mat3 R_T = path.frame(gamma).rotation;
    const double d = 25.0;

    DesiredFrameState st;
    const DesiredFrame aligned = desired_frame(s.position, path, gamma, d, st, 0.05);
    CHECK((aligned.R_D_I - R_T).cwiseAbs().maxCoeff() < 1e-12);
    const DesiredFrame again = desired_frame(s.position, path, gamma, d, st, 0.05);
    CHECK(again.omega_DT_D.norm() < 1e-12);

    DesiredFrameState st2;
    const double offset = 8.0;
    const Vec3 p_off = s.position + offset * R_T.col(1);
    const DesiredFrame tilted = desired_frame(p_off, path, gamma, d, st2, 0.05);
    const double tilt = std::acos(std::clamp(tilted.R_D_I.col(0).dot(R_T.col(0)), -1.0, 1.0));
    CHECK(tilt == doctest::Approx(std::atan2(offset, d)).epsilon(1e-9));

    DesiredFrameState st3;
    const DesiredFrame far_d = desired_frame(p_off, path, gamma, 1e7, st3, 0.05);
    CHECK((far_d.R_D_I - R_T).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("desired frame: coincident aim point falls back to the tangent") {
    const FramedPath path = straight_path();
    const double gamma = 50.0;
    const PathSample s = path.eval(gamma);
    const Mat3 R_T = path.frame(gamma).rotation;
    DesiredFrameState st;
    EventLog log;
    const double d = 10.0;
    const Vec3 at_aim = s.position + d * R_T.col(0);
    const DesiredFrame f = desired_frame(at_aim, path, gamma, d, st, 0.05, &log);
    CHECK(log.count(evc::aim_point_fallback) == 1);
    CHECK((f.R_D_I.col(0) - R_T.col(0)).norm() < 1e-12);
}

TEST_CASE("pf config: validation and audit") {
    PFConfig cfg;
    cfg.validate();
    PFConfig bad = cfg;
    bad.k_gamma = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    const FramedPath path = straight_path();
    PFConfig feasible;
    feasible.k_gamma = 0.3;
    feasible.k_R = 0.3;
    feasible.c = 0.25;
    feasible.c1 = 25.0;
    feasible.d = 30.0;
    feasible.lambda = 2e-5;
    feasible.omega_c_max = 1.2;
    feasible.omega_T_max = 1e-4;
    const PFAuditReport rep = audit_pf_config(feasible, path, 2.0);
    CHECK(rep.ok);
    CHECK(feasible.c < rep.c_bound);

    PFConfig infeasible = feasible;
    infeasible.lambda = 10.0;
    CHECK_THROWS_AS(audit_pf_config(infeasible, path, 2.0), Error);
}

TEST_CASE("closed-loop bounded error on straight and arc paths") {
    PFConfig cfg;
    cfg.k_gamma = 0.5;
    cfg.k_R = 0.4;
    cfg.d = 25.0;
    cfg.c = 0.45;
    cfg.c1 = 20.0;
    cfg.omega_c_max = 0.6;

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> upos(-1.0, 1.0);
    std::uniform_real_distribution<double> uang(-0.5, 0.5);

    for (const FramedPath& path : {straight_path(), arc_path()}) {
        int trials = 0;
        while (trials < 50) {
            const PathSample s0 = path.eval(0.0);
            const Vec3 p0 = s0.position + Vec3(upos(rng), upos(rng), upos(rng)) * 9.0;
            const Mat3 R0 =
                path.frame(0.0).rotation * rot_z(uang(rng)) * rot_y(uang(rng));
            const auto run = testsupport::run_pf_kinematic(path, cfg, p0, R0, 3.0, 0.02, 60.0);
            if (!run.domain_ok_initial) continue;  // sample again inside Omega_PF
            ++trials;
            const double V0 = run.composite_error.front();
            double prev = 1e300;
            for (std::size_t k = 0; k < run.time.size(); ++k) {
                if (run.time[k] <= 5.0) continue;
                CHECK(run.composite_error[k] <= V0 + 1e-9);
                CHECK(run.composite_error[k] <= prev + 1e-7);
                prev = run.composite_error[k];
            }
            CHECK(run.composite_error.back() < 0.02);
        }
    }
}

TEST_CASE("gamma advances at the on-path rate when errors are zero") {
    const FramedPath path = straight_path();
    PFConfig cfg;
    cfg.k_gamma = 0.5;
    const auto run = testsupport::run_pf_kinematic(path, cfg, path.eval(0.0).position,
                                                   path.frame(0.0).rotation, 3.0, 0.02, 30.0);
    // ||p_d'|| = 2 on this path, so gamma_dot = v / 2 = 1.5.
    const double expected = run.time.back() * 1.5;
    CHECK(run.gamma.back() == doctest::Approx(expected).epsilon(1e-6));
}
