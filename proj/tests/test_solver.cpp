#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hcp/solver.hpp"
#include "support.hpp"

using hcp::SolveStatus;
using std::numbers::pi;

namespace {

hcp::Triangulation tri24() {
    return hcp::validate_triangulation(testsupport::load_data("genus2_24_zero.json").description);
}

hcp::WeightFunction weights24(const std::string& name) {
    const auto tri = tri24();
    return hcp::make_weight_function(tri, testsupport::load_data(name).weights);
}

hcp::RadiusVector random_q(int n, unsigned seed, double r_lo = 0.3, double r_hi = 3.0) {
    auto gen = testsupport::rng(seed);
    std::uniform_real_distribution<double> dist(r_lo, r_hi);
    hcp::RadiusVector q(n);
    for (auto& value : q) value = hcp::q_of_r(dist(gen));
    return q;
}

double face_angle_total(const hcp::Triangulation& tri, const hcp::WeightFunction& w,
                        const hcp::RadiusVector& q) {
    double total = 0.0;
    for (int f = 0; f < tri.cell_count(); ++f) {
        const auto face = tri.face(f);
        const auto config = hcp::three_circle_config(
            {hcp::r_of_q(q[face[0].vertex]), hcp::r_of_q(q[face[1].vertex]),
             hcp::r_of_q(q[face[2].vertex])},
            {w[face[1].edge], w[face[2].edge], w[face[0].edge]});
        total += config.inner[0] + config.inner[1] + config.inner[2];
    }
    return total;
}

double gauss_bonnet_area(const hcp::Triangulation& tri, const hcp::WeightFunction& w,
                         const hcp::RadiusVector& q) {
    return pi * tri.cell_count() - face_angle_total(tri, w, q);
}

} // namespace

TEST_CASE("curvature accumulates face angles against two pi") {
    const auto tri = tri24();
    const auto zero = hcp::WeightFunction(tri.edge_count(), 0.0);
    const auto right = weights24("genus2_24_right.json");

    SECTION("the total cone angle equals the total face angle") {
        for (unsigned seed : {1u, 2u, 3u}) {
            const auto q = random_q(tri.vertex_count(), seed);
            for (const auto& w : {zero, right}) {
                const auto k = hcp::curvature(tri, w, q);
                REQUIRE(k.size() == static_cast<size_t>(tri.vertex_count()));
                double cone = 0.0;
                for (double value : k) cone += 2.0 * pi - value;
                CHECK(cone == Catch::Approx(face_angle_total(tri, w, q)).margin(1e-9));
            }
        }
    }
    SECTION("malformed radius vectors are rejected") {
        CHECK_THROWS_AS(hcp::curvature(tri, zero, hcp::RadiusVector(3, -1.0)),
                        std::invalid_argument);
        hcp::RadiusVector q(tri.vertex_count(), -1.0);
        q[4] = 0.0;
        CHECK_THROWS_AS(hcp::curvature(tri, zero, q), std::invalid_argument);
    }
    SECTION("an inadmissible face is reported by id") {
        auto w = zero;
        const auto face = tri.face(7);
        w[face[0].edge] = 3.0;
        w[face[1].edge] = 3.0;
        const auto q = hcp::default_radius_vector(tri.vertex_count());
        CHECK_THROWS_WITH(hcp::curvature(tri, w, q),
                          Catch::Matchers::ContainsSubstring("face 7"));
    }
}

TEST_CASE("curvature derivative matrix") {
    const auto tri = tri24();
    const auto right = weights24("genus2_24_right.json");
    const auto zero = hcp::WeightFunction(tri.edge_count(), 0.0);
    const auto q = random_q(tri.vertex_count(), 11, 0.3, 2.0);

    SECTION("exactly symmetric and finite") {
        const Eigen::MatrixXd h = hcp::hessian(tri, right, q);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(h.allFinite());
    }
    SECTION("matches central differences of the negated curvature") {
        const int n = tri.vertex_count();
        const Eigen::MatrixXd h = hcp::hessian(tri, right, q);
        const double step = 1e-6;
        for (int u = 0; u < n; ++u) {
            auto plus = q, minus = q;
            plus[u] += step;
            minus[u] -= step;
            const auto kp = hcp::curvature(tri, right, plus);
            const auto km = hcp::curvature(tri, right, minus);
            for (int v = 0; v < n; ++v) {
                const double fd = -(kp[v] - km[v]) / (2.0 * step);
                CHECK(h(v, u) == Catch::Approx(fd).margin(1e-5));
            }
        }
    }
    SECTION("tangency weights give a diagonally dominant matrix") {
        const Eigen::MatrixXd h = hcp::hessian(tri, zero, q);
        for (int v = 0; v < tri.vertex_count(); ++v) {
            CHECK(h(v, v) < 0.0);
            double off = 0.0;
            for (int u = 0; u < tri.vertex_count(); ++u) {
                if (u != v) off += std::abs(h(v, u));
            }
            CHECK(std::abs(h(v, v)) >= off);
        }
    }
    SECTION("negated matrix factors positive definite under the coefficient condition") {
        REQUIRE(hcp::check_R1(tri, right).status == hcp::ConditionStatus::PASS);
        Eigen::SparseMatrix<double> a = -hcp::hessian(tri, right, q);
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(a);
        REQUIRE(factor.info() == Eigen::Success);
        CHECK(factor.vectorD().minCoeff() > 0.0);
    }
}

TEST_CASE("potential integral") {
    const auto tri = tri24();
    const auto right = weights24("genus2_24_right.json");
    const auto q_ref = hcp::default_radius_vector(tri.vertex_count());
    const auto q = random_q(tri.vertex_count(), 21, 0.5, 2.0);

    SECTION("vanishes on the empty path") {
        CHECK(hcp::phi(tri, right, q_ref, q_ref) == 0.0);
    }
    SECTION("is path independent") {
        const auto q_mid = random_q(tri.vertex_count(), 22, 0.5, 2.0);
        const double straight = hcp::phi(tri, right, q, q_ref);
        const double dogleg = hcp::phi(tri, right, q_mid, q_ref)
                            + hcp::phi(tri, right, q, q_mid);
        CHECK(straight == Catch::Approx(dogleg).margin(1e-8));
    }
    SECTION("has the negated curvature as gradient") {
        const auto k = hcp::curvature(tri, right, q);
        const double step = 1e-6;
        for (int v = 0; v < tri.vertex_count(); v += 3) {
            auto plus = q, minus = q;
            plus[v] += step;
            minus[v] -= step;
            const double fd = (hcp::phi(tri, right, plus, q_ref)
                               - hcp::phi(tri, right, minus, q_ref)) / (2.0 * step);
            CHECK(fd == Catch::Approx(-k[v]).margin(1e-6));
        }
    }
}

TEST_CASE("newton iteration solves the tangency packing") {
    const auto tri = tri24();
    const auto zero = hcp::WeightFunction(tri.edge_count(), 0.0);
    const auto result = hcp::newton_solve(tri, zero,
                                          hcp::default_radius_vector(tri.vertex_count()));
    REQUIRE(result.status == SolveStatus::CONVERGED);
    CHECK(result.residual < 1e-10);
    CHECK(result.iterations < 50);
    CHECK(result.strategy == "newton");

    const auto k = hcp::curvature(tri, zero, result.q);
    double recomputed = 0.0;
    for (double value : k) recomputed = std::max(recomputed, std::abs(value));
    CHECK(std::abs(recomputed - result.residual) < 1e-12);

    // Flat vertices force the total area to the Gauss-Bonnet value.
    CHECK(gauss_bonnet_area(tri, zero, result.q)
          == Catch::Approx(4.0 * pi).margin(1e-8));
}

TEST_CASE("newton iteration is seed independent under the coefficient condition") {
    const auto tri = tri24();
    const auto right = weights24("genus2_24_right.json");
    const auto first = hcp::newton_solve(tri, right,
                                         hcp::default_radius_vector(tri.vertex_count()));
    const auto second = hcp::newton_solve(tri, right, random_q(tri.vertex_count(), 31));
    REQUIRE(first.status == SolveStatus::CONVERGED);
    REQUIRE(second.status == SolveStatus::CONVERGED);
    for (int v = 0; v < tri.vertex_count(); ++v) {
        CHECK(first.q[v] == Catch::Approx(second.q[v]).margin(1e-8));
    }
    CHECK(gauss_bonnet_area(tri, right, first.q)
          == Catch::Approx(4.0 * pi).margin(1e-8));
}

TEST_CASE("newton iterates ascend the potential and keep the matrix definite") {
    const auto tri = tri24();
    const auto right = weights24("genus2_24_right.json");
    const auto result = hcp::newton_solve(tri, right, random_q(tri.vertex_count(), 41));
    REQUIRE(result.status == SolveStatus::CONVERGED);
    REQUIRE(result.iterates.size() >= 2);
    for (size_t i = 0; i + 1 < result.iterates.size(); ++i) {
        CHECK(hcp::phi(tri, right, result.iterates[i + 1], result.iterates[i])
              >= -1e-8);
        Eigen::SparseMatrix<double> a = -hcp::hessian(tri, right, result.iterates[i]);
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(a);
        REQUIRE(factor.info() == Eigen::Success);
        CHECK(factor.vectorD().minCoeff() > 0.0);
    }
}

TEST_CASE("newton rejects weights that fail the face gate") {
    const auto tri = tri24();
    auto w = hcp::WeightFunction(tri.edge_count(), 0.0);
    const auto face = tri.face(0);
    w[face[0].edge] = 3.0;
    w[face[1].edge] = 3.0;
    CHECK_THROWS_AS(hcp::newton_solve(tri, w, hcp::default_radius_vector(tri.vertex_count())),
                    std::domain_error);
}

TEST_CASE("curvature flow converges geometrically on the packing") {
    const auto tri = tri24();
    const auto zero = hcp::WeightFunction(tri.edge_count(), 0.0);
    const auto result = hcp::ricci_flow(tri, zero,
                                        hcp::default_radius_vector(tri.vertex_count()));
    REQUIRE(result.status == SolveStatus::CONVERGED);
    CHECK(result.residual < 1e-10);
    CHECK(result.strategy == "flow");

    // Log-linear fit of the residual trace: the slope must be negative.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (size_t i = 0; i < result.residual_history.size(); ++i) {
        if (result.residual_history[i] <= 0.0) continue;
        const double x = static_cast<double>(i);
        const double y = std::log(result.residual_history[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope < 0.0);

    // Restarting at the solution terminates immediately.
    const auto again = hcp::ricci_flow(tri, zero, result.q);
    CHECK(again.status == SolveStatus::CONVERGED);
    CHECK(again.iterations == 0);
}

TEST_CASE("flow and newton limits agree under the coefficient condition") {
    const auto tri = tri24();
    const auto right = weights24("genus2_24_right.json");
    const auto q0 = hcp::default_radius_vector(tri.vertex_count());
    const auto newton = hcp::newton_solve(tri, right, q0);
    const auto flow = hcp::ricci_flow(tri, right, q0, {}, 1e-10);
    REQUIRE(newton.status == SolveStatus::CONVERGED);
    REQUIRE(flow.status == SolveStatus::CONVERGED);
    for (int v = 0; v < tri.vertex_count(); ++v) {
        CHECK(newton.q[v] == Catch::Approx(flow.q[v]).margin(1e-7));
    }
}

TEST_CASE("homotopy march on the weights") {
    const auto tri = tri24();

    SECTION("tangency weights collapse to a single newton run") {
        const auto zero = hcp::WeightFunction(tri.edge_count(), 0.0);
        const auto direct = hcp::newton_solve(tri, zero,
                                              hcp::default_radius_vector(tri.vertex_count()));
        const auto marched = hcp::continuation_solve(tri, zero);
        REQUIRE(marched.status == SolveStatus::CONVERGED);
        CHECK(marched.t_reached == 1.0);
        for (int v = 0; v < tri.vertex_count(); ++v) {
            CHECK(marched.q[v] == direct.q[v]);
        }
    }
    SECTION("the mixed obtuse preset is reached even though the coefficients go negative") {
        const auto mixed = weights24("genus2_24_mixed_obtuse.json");
        REQUIRE(hcp::check_R1(tri24(), mixed).status == hcp::ConditionStatus::FAIL);
        const auto result = hcp::continuation_solve(tri, mixed, 11, 1e-9);
        REQUIRE(result.status == SolveStatus::CONVERGED);
        CHECK(result.t_reached == 1.0);
        CHECK(result.residual < 1e-9);
    }
    SECTION("warm and cold starts agree at the homotopy midpoint") {
        const auto right = weights24("genus2_24_right.json");
        hcp::WeightFunction half(right.size());
        for (size_t e = 0; e < right.size(); ++e) half[e] = 0.5 * right[e];
        hcp::WeightFunction quarter(right.size());
        for (size_t e = 0; e < right.size(); ++e) quarter[e] = 0.25 * right[e];
        const auto q0 = hcp::default_radius_vector(tri.vertex_count());
        const auto stage = hcp::newton_solve(tri, quarter, q0);
        REQUIRE(stage.status == SolveStatus::CONVERGED);
        const auto warm = hcp::newton_solve(tri, half, stage.q);
        const auto cold = hcp::newton_solve(tri, half, q0);
        REQUIRE(warm.status == SolveStatus::CONVERGED);
        REQUIRE(cold.status == SolveStatus::CONVERGED);
        for (int v = 0; v < tri.vertex_count(); ++v) {
            CHECK(warm.q[v] == Catch::Approx(cold.q[v]).margin(1e-7));
        }
    }
    SECTION("weights failing the curve bound are rejected") {
        const auto w = hcp::WeightFunction(tri.edge_count(), pi - 0.01);
        REQUIRE(hcp::check_C1(tri, w).status == hcp::ConditionStatus::PASS);
        REQUIRE(hcp::check_C2(tri, w).status == hcp::ConditionStatus::FAIL);
        CHECK_THROWS_AS(hcp::continuation_solve(tri, w), std::domain_error);
    }
}

TEST_CASE("shrinking-incidence pipeline on the octagon") {
    const auto input = testsupport::load_data("genus2_octagon_ideal.json");
    const auto cx = hcp::validate_cell_complex(input.description);
    const auto w = hcp::make_weight_function(cx, input.weights);
    const std::vector<double> schedule = {0.1, 0.05, 0.025, 0.0125};

    const auto result = hcp::ideal_solve(cx, w, schedule);
    REQUIRE(result.status == SolveStatus::CONVERGED);
    REQUIRE(result.stages.size() == 4);
    for (size_t i = 0; i < result.stages.size(); ++i) {
        CHECK(result.stages[i].eps == schedule[i]);
        CHECK(result.stages[i].residual < 1e-10);
        if (i > 0) {
            REQUIRE(result.stages[i].star_radii.size()
                    == result.stages[i - 1].star_radii.size());
            for (size_t s = 0; s < result.stages[i].star_radii.size(); ++s) {
                CHECK(result.stages[i].star_radii[s]
                      < result.stages[i - 1].star_radii[s]);
            }
        }
    }
    REQUIRE(result.primal_q.size() == 1);
    CHECK(result.primal_q[0] < 0.0);
    CHECK(std::isfinite(result.primal_q[0]));

    // The boundary weight sum around each star, which the metric realizes as
    // the gap polygon angle sum, climbs toward the flat-cell ceiling.
    const auto sub = hcp::subdivide_cell_complex(cx);
    for (int c = 0; c < cx.cell_count(); ++c) {
        const int m = cx.cell_size(c);
        double previous = 0.0;
        for (double eps : schedule) {
            const auto wsub = hcp::subdivided_weights(sub, w, eps);
            double gap = 0.0;
            for (const hcp::Corner& corner : cx.cell(c)) gap += wsub[corner.edge];
            CHECK(gap == Catch::Approx((m - 2) * pi - m * eps).margin(1e-12));
            CHECK(gap < (m - 2) * pi);
            CHECK(gap > previous);
            previous = gap;
        }
    }
}

TEST_CASE("shrinking-incidence pipeline rejects bad inputs") {
    const auto input = testsupport::load_data("genus2_octagon_ideal.json");
    const auto cx = hcp::validate_cell_complex(input.description);
    const auto w = hcp::make_weight_function(cx, input.weights);

    CHECK_THROWS_AS(hcp::ideal_solve(cx, w, {}), std::invalid_argument);
    CHECK_THROWS_AS(hcp::ideal_solve(cx, w, {0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(hcp::ideal_solve(cx, w, {0.1, -0.05}), std::invalid_argument);
    // An eps larger than the smallest weight would push it negative.
    CHECK_THROWS_AS(hcp::ideal_solve(cx, w, {3.0, 0.1}), std::invalid_argument);

    auto bad = w;
    bad[0] += 1e-6;
    CHECK_THROWS_AS(hcp::ideal_solve(cx, bad, {0.1, 0.05}), std::domain_error);
}

TEST_CASE("triangulated complexes run through the shrinking-incidence gate") {
    const auto tri = tri24();
    const auto w = hcp::WeightFunction(tri.edge_count(), pi / 3.0);
    const auto sub = hcp::subdivide_cell_complex(tri);
    const auto wsub = hcp::subdivided_weights(sub, w, 0.1);
    const auto rep = hcp::check_C1(sub.triangulation, wsub);
    CHECK(rep.status == hcp::ConditionStatus::PASS);
}
