#include <catch2/catch_amalgamated.hpp>

#include "hcp/three_circle.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("angle triple admissibility") {
    CHECK(hcp::check_angle_triple({0, 0, 0}).admissible);
    CHECK(hcp::check_angle_triple({kPi / 2, kPi / 2, kPi / 2}).admissible);
    CHECK(hcp::check_angle_triple({2 * kPi / 3, 2 * kPi / 3, 2 * kPi / 3}).admissible);
    // 3pi/4 + 3pi/4 = 3pi/2 >= pi + 0: fails the strict cyclic inequality
    CHECK_FALSE(hcp::check_angle_triple({3 * kPi / 4, 3 * kPi / 4, 0}).admissible);
    // boundary case: equality in one cyclic inequality, sum above pi
    CHECK_FALSE(hcp::check_angle_triple({3 * kPi / 4, 3 * kPi / 4, kPi / 2}).admissible);
    CHECK_THROWS_AS(hcp::check_angle_triple({kPi, 0, 0}), std::domain_error);
}

TEST_CASE("gamma triple values") {
    auto rep = hcp::check_angle_triple({kPi / 2, kPi / 2, kPi / 2});
    CHECK_THAT(rep.gamma[0], WithinAbs(0.0, 1e-15));
    CHECK(rep.gamma_nonneg);
    rep = hcp::check_angle_triple({2 * kPi / 3, 2 * kPi / 3, 2 * kPi / 3});
    CHECK_THAT(rep.gamma[0], WithinAbs(-0.25, 1e-15));
    CHECK_FALSE(rep.gamma_nonneg);
    rep = hcp::check_angle_triple({0, 0, 0});
    CHECK_THAT(rep.gamma[1], WithinAbs(2.0, 1e-15));
    CHECK(rep.gamma_nonneg);
}

TEST_CASE("three circle config: tangent packing reference") {
    const auto cfg = hcp::three_circle_config({1, 1, 1}, {0, 0, 0});
    for (int i = 0; i < 3; ++i) {
        CHECK_THAT(cfg.l[i], WithinRel(2.0, 1e-14));
        CHECK_THAT(cfg.inner[i], WithinRel(0.65996640421579937, 1e-13));
    }
    CHECK_THAT(cfg.K, WithinRel(8.0646613285263669, 1e-12));
}

TEST_CASE("three circle config: uniformly obtuse reference") {
    const hcp::Triple t = {2 * kPi / 3, 2 * kPi / 3, 2 * kPi / 3};
    const auto cfg = hcp::three_circle_config({0.5, 0.5, 0.5}, t);
    CHECK_THAT(cfg.l[0], WithinRel(0.51537268760236912, 1e-13));
    CHECK_THAT(cfg.inner[0], WithinRel(1.0100896221444219, 1e-13));
    CHECK_THAT(cfg.K, WithinRel(0.24557291421949202, 1e-12));
}

TEST_CASE("three circle config: generic references") {
    {
        const auto cfg = hcp::three_circle_config({0.7, 1.3, 2.1}, {0.3, 1.1, 0.9});
        CHECK_THAT(cfg.l[0], WithinRel(3.3794030626462948, 1e-13));
        CHECK_THAT(cfg.l[1], WithinRel(2.5722326484628785, 1e-13));
        CHECK_THAT(cfg.l[2], WithinRel(1.8551974157913120, 1e-13));
        CHECK_THAT(cfg.inner[0], WithinRel(1.2253878631396247, 1e-13));
        CHECK_THAT(cfg.inner[1], WithinRel(0.43102976284541888, 1e-13));
        CHECK_THAT(cfg.inner[2], WithinRel(0.20150954907864921, 1e-13));
        CHECK_THAT(cfg.K, WithinRel(19.099000891628762, 1e-12));
    }
    {
        const auto cfg = hcp::three_circle_config({0.8, 0.6, 1.1}, {2.0, 1.8, 1.9});
        CHECK_THAT(cfg.l[0], WithinRel(1.0660313734942946, 1e-13));
        CHECK_THAT(cfg.l[1], WithinRel(1.2947522793844061, 1e-13));
        CHECK_THAT(cfg.l[2], WithinRel(0.86975438514591714, 1e-13));
        CHECK_THAT(cfg.inner[0], WithinRel(0.82392296863233845, 1e-13));
        CHECK_THAT(cfg.inner[1], WithinRel(1.3169787158610387, 1e-13));
        CHECK_THAT(cfg.inner[2], WithinRel(0.59925962879244024, 1e-13));
    }
}

TEST_CASE("config rejects inadmissible triples") {
    CHECK_THROWS_AS(hcp::three_circle_config({1, 1, 1}, {3 * kPi / 4, 3 * kPi / 4, 0}),
                    std::domain_error);
}

TEST_CASE("admissible samples always produce valid triangles") {
    auto g = testsupport::rng(7001);
    for (int n = 0; n < 2000; ++n) {
        const auto t = testsupport::admissible_angles(g);
        const auto r = testsupport::radii_in(g, 1e-3, 1e2);
        const auto cfg = hcp::three_circle_config(r, t);
        // strict triangle inequalities and a hyperbolic angle sum
        CHECK(cfg.l[0] < cfg.l[1] + cfg.l[2]);
        CHECK(cfg.l[1] < cfg.l[2] + cfg.l[0]);
        CHECK(cfg.l[2] < cfg.l[0] + cfg.l[1]);
        CHECK(cfg.inner[0] + cfg.inner[1] + cfg.inner[2] < kPi);
        for (int i = 0; i < 3; ++i) {
            CHECK(cfg.inner[i] > 0.0);
            CHECK(cfg.inner[i] < kPi);
        }
    }
}

TEST_CASE("K is rotation invariant") {
    auto g = testsupport::rng(7002);
    for (int n = 0; n < 300; ++n) {
        const auto t = testsupport::admissible_angles(g);
        const auto r = testsupport::radii_in(g, 1e-2, 10.0);
        const auto cfg = hcp::three_circle_config(r, t);
        const double k0 = std::sinh(cfg.l[1]) * std::sinh(cfg.l[2]) * std::sin(cfg.inner[0]);
        const double k1 = std::sinh(cfg.l[2]) * std::sinh(cfg.l[0]) * std::sin(cfg.inner[1]);
        const double k2 = std::sinh(cfg.l[0]) * std::sinh(cfg.l[1]) * std::sin(cfg.inner[2]);
        CHECK_THAT(k1, WithinRel(k0, 1e-12));
        CHECK_THAT(k2, WithinRel(k0, 1e-12));
        CHECK_THAT(cfg.K, WithinRel(k0, 1e-12));
    }
}

TEST_CASE("angle jacobian matches 50-digit finite-difference references") {
    {
        const auto J = hcp::angle_jacobian({0.7, 1.3, 2.1}, {0.3, 1.1, 0.9});
        Eigen::Matrix3d ref;
        ref << -0.95463889944354486, 0.13664465276109365, 0.077010815249656164,
               0.13664465276109365, -0.75765813497330088, 0.021110410291849455,
               0.077010815249656164, 0.021110410291849455, -0.81735897013798893;
        CHECK((J - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
    {
        const auto J = hcp::angle_jacobian({0.8, 0.6, 1.1}, {2.0, 1.8, 1.9});
        Eigen::Matrix3d ref;
        ref << -0.67608813691883005, 0.12351085057333709, 0.25628613797341064,
               0.12351085057333709, -0.54092182028949735, 0.22638623720921188,
               0.25628613797341064, 0.22638623720921188, -0.87051519500693286;
        CHECK((J - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("angle jacobian is symmetric") {
    auto g = testsupport::rng(7003);
    for (int n = 0; n < 500; ++n) {
        const auto t = testsupport::admissible_angles(g);
        const auto r = testsupport::radii_in(g, 1e-3, 1e2);
        const auto J = hcp::angle_jacobian(r, t);
        const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
        CHECK((J - J.transpose()).cwiseAbs().maxCoeff() / scale < 1e-10);
    }
}

TEST_CASE("angle jacobian matches finite differences") {
    auto g = testsupport::rng(7004);
    for (int n = 0; n < 200; ++n) {
        const auto t = testsupport::admissible_angles(g);
        const auto r = testsupport::radii_in(g, 0.05, 5.0);
        const auto J = hcp::angle_jacobian(r, t);
        const auto F = testsupport::fd_angle_jacobian(r, t);
        CHECK((J - F).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("angle jacobian is negative definite when gammas are nonnegative") {
    auto g = testsupport::rng(7005);
    int found = 0;
    for (int n = 0; n < 4000 && found < 400; ++n) {
        const auto t = testsupport::admissible_angles(g);
        if (!hcp::check_angle_triple(t).gamma_nonneg) continue;
        ++found;
        const auto r = testsupport::radii_in(g, 1e-2, 20.0);
        const auto J = hcp::angle_jacobian(r, t);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (J + J.transpose()));
        CHECK(es.eigenvalues().maxCoeff() < 0.0);
    }
    CHECK(found >= 100);
}

TEST_CASE("angle jacobian stays finite at extreme radii") {
    const auto J = hcp::angle_jacobian({300.0, 280.0, 320.0}, {0.4, 0.6, 0.2});
    CHECK(J.allFinite());
    const auto J2 = hcp::angle_jacobian({1e-6, 2e-6, 1.5e-6}, {0.4, 0.6, 0.2});
    CHECK(J2.allFinite());
}

TEST_CASE("limit law: huge radius opens the angle to zero") {
    const auto cfg = hcp::three_circle_config({30.0, 1.0, 1.0}, {0.4, 1.2, 0.8});
    CHECK(cfg.inner[0] < 1e-10);
    CHECK_THAT(cfg.inner[0], WithinRel(1.9929192710433452e-13, 1e-9));
}

TEST_CASE("limit law: vanishing radius closes the angle to pi - theta") {
    const auto cfg = hcp::three_circle_config({1e-8, 1.0, 1.0}, {0.4, 1.2, 0.8});
    CHECK(std::abs(cfg.inner[0] - (kPi - 0.4)) < 1e-6);
    CHECK_THAT(cfg.inner[0], WithinRel(2.7415925849898892, 1e-9));
}

TEST_CASE("limit law: two vanishing radii share a straight angle") {
    const auto cfg = hcp::three_circle_config({1e-8, 1e-8, 1.0}, {0.4, 1.2, 0.8});
    const double sum = cfg.inner[0] + cfg.inner[1];
    CHECK(std::abs(sum - kPi) < 1e-5);
    CHECK(sum < kPi);
}

TEST_CASE("limit law: three vanishing radii flatten the triangle") {
    const auto cfg = hcp::three_circle_config({1e-8, 1e-8, 1e-8}, {0.4, 1.2, 0.8});
    const double sum = cfg.inner[0] + cfg.inner[1] + cfg.inner[2];
    CHECK(std::abs(sum - kPi) < 1e-5);
    CHECK(sum <= kPi);
}

TEST_CASE("two circle angles: right-angle reference") {
    const double r = 1.1462158347805888; // acosh(sqrt 3)
    const auto a = hcp::two_circle_angles(r, r, kPi / 2);
    CHECK_THAT(a.at_i, WithinRel(kPi / 6, 1e-12));
    CHECK_THAT(a.at_j, WithinRel(kPi / 6, 1e-12));
    CHECK_THAT(a.at_point, WithinRel(kPi / 2, 1e-12));
}

TEST_CASE("two circle angles: generic reference") {
    const auto a = hcp::two_circle_angles(0.9, 1.4, 2.2);
    CHECK_THAT(a.at_i, WithinRel(1.1981260224294709, 1e-13));
    CHECK_THAT(a.at_j, WithinRel(0.52596778014327834, 1e-13));
    // angle at the shrunk vertex is the supplement of the exterior angle
    CHECK_THAT(a.at_point, WithinRel(kPi - 2.2, 1e-12));
    CHECK(a.at_i + a.at_j < 2.2);
    CHECK_THROWS_AS(hcp::two_circle_angles(1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(hcp::two_circle_angles(1.0, 1.0, kPi), std::domain_error);
}

TEST_CASE("two circle jacobian: reference, symmetry, definiteness") {
    const auto J = hcp::two_circle_jacobian(0.9, 1.4, 2.2);
    Eigen::Matrix2d ref;
    ref << -1.1173729817209793, 0.57834355326865380,
           0.57834355326865380, -1.1173729817209793;
    CHECK((J - ref).cwiseAbs().maxCoeff() < 1e-12);

    auto g = testsupport::rng(7006);
    for (int n = 0; n < 300; ++n) {
        const double ri = testsupport::log_uniform(g, 0.05, 5.0);
        const double rj = testsupport::log_uniform(g, 0.05, 5.0);
        std::uniform_real_distribution<double> u(1e-3, kPi - 1e-3);
        const double tk = u(g);
        const auto Jn = hcp::two_circle_jacobian(ri, rj, tk);
        const double scale = std::max(1.0, Jn.cwiseAbs().maxCoeff());
        CHECK(std::abs(Jn(0, 1) - Jn(1, 0)) / scale < 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (Jn + Jn.transpose()));
        CHECK(es.eigenvalues().maxCoeff() < 0.0);
        const auto F = testsupport::fd_two_circle_jacobian(ri, rj, tk);
        CHECK((Jn - F).cwiseAbs().maxCoeff() < 1e-6);
    }
}
