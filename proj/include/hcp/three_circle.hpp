#pragma once

// Three mutually intersecting circles with prescribed exterior intersection
// angles form a geodesic triangle of their centers. This header builds that
// configuration, decides which angle triples admit it for every radius
// choice, and differentiates the inner angles with respect to log-radii.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hcp/hyperbolic.hpp"

namespace hcp {

using Triple = std::array<double, 3>;

struct AngleTripleReport {
    bool admissible = false;   // every positive radius triple yields a triangle
    Triple gamma{};            // gamma_i = cos t_i + cos t_j cos t_k, cyclic
    bool gamma_nonneg = false; // all three gammas >= 0
};

// An angle triple is admissible iff the angle sum is at most pi, or all three
// cyclic inequalities t_a + t_b < pi + t_c hold strictly.
inline AngleTripleReport check_angle_triple(const Triple& t) {
    for (int i = 0; i < 3; ++i) detail::require_weight_range(t[i], "theta");
    AngleTripleReport rep;
    const double c0 = std::cos(t[0]), c1 = std::cos(t[1]), c2 = std::cos(t[2]);
    rep.gamma = {c0 + c1 * c2, c1 + c2 * c0, c2 + c0 * c1};
    rep.gamma_nonneg = rep.gamma[0] >= 0.0 && rep.gamma[1] >= 0.0 && rep.gamma[2] >= 0.0;
    const bool sum_small = t[0] + t[1] + t[2] <= std::numbers::pi;
    const bool cyclic = (t[1] + t[2] < std::numbers::pi + t[0])
                     && (t[2] + t[0] < std::numbers::pi + t[1])
                     && (t[0] + t[1] < std::numbers::pi + t[2]);
    rep.admissible = sum_small || cyclic;
    return rep;
}

struct ThreeCircleConfig {
    Triple l{};     // side lengths; l[i] joins the centers opposite vertex i
    Triple inner{}; // inner angle of the center triangle at vertex i, j, k
    double K = 0.0; // sinh l_j sinh l_k sin inner_i, rotation invariant
    double log_K = 0.0;
};

// Builds the center triangle of radii r with exterior angles t (t[i] on the
// side opposite vertex i). Requires an admissible triple and positive radii.
inline ThreeCircleConfig three_circle_config(const Triple& r, const Triple& t) {
    if (!check_angle_triple(t).admissible) {
        throw std::domain_error("angle triple is not admissible");
    }
    ThreeCircleConfig cfg;
    cfg.l[0] = side_length(r[1], r[2], t[0]);
    cfg.l[1] = side_length(r[2], r[0], t[1]);
    cfg.l[2] = side_length(r[0], r[1], t[2]);
    const TriangleAngles ang = angles_from_sides(cfg.l[0], cfg.l[1], cfg.l[2]);
    cfg.inner = {ang.a_i, ang.a_j, ang.a_k};
    cfg.log_K = ang.log_k;
    cfg.K = std::exp(ang.log_k);
    return cfg;
}

// d(inner angles)/d(q), q_i = log tanh(r_i/2). Equals
//   -(1/K) * L * S * L^{-1} * M * R
// with L = diag(sinh l), R = diag(sinh r), S the cosine matrix of the inner
// angles and M the side-length differential (M_cb = d cosh(l_c)/d r_b).
// Symmetric and, whenever all gammas are nonnegative, negative definite.
//
// The matrix product form is useless off the diagonal: when an inner angle
// collapses (one radius much larger than the others) its two monomials agree
// to dozens of digits and the difference is pure rounding noise. Eliminating
// the inner angles from the off-diagonal entry by the cosine law instead
// cancels that difference exactly and leaves
//   J_ab = sinh r_a sinh r_b Q_ab / (K sinh^2 l_d),   d the third index,
//   Q_ab = sin^2(t_d) sinh r_a sinh r_b cosh r_d
//        + sinh r_d [ I_a (I_d cosh r_a sinh r_b + sinh r_a cosh r_b)
//                   + I_b (I_d cosh r_b sinh r_a + sinh r_b cosh r_a) ],
// which is evaluated below with e^(r_a+r_b+r_d)/8 factored out so it stays
// finite for radii far beyond the overflow point of cosh. The same collapse
// cannot zero out the diagonal, so the plain log-scale sum is kept there.
inline Eigen::Matrix3d angle_jacobian(const Triple& r, const Triple& t) {
    const ThreeCircleConfig cfg = three_circle_config(r, t);
    const Triple I = {std::cos(t[0]), std::cos(t[1]), std::cos(t[2])};

    std::array<double, 3> log_sinh_l{}, log_sinh_r{}, e2{};
    for (int i = 0; i < 3; ++i) {
        log_sinh_l[i] = detail::log_sinh(cfg.l[i]);
        log_sinh_r[i] = detail::log_sinh(r[i]);
        e2[i] = std::exp(-2.0 * r[i]);
    }
    // M_cb = cosh r_d sinh r_b + I_c cosh r_b sinh r_d  (d the third index),
    // factored as e^(r_b + r_d)/4 * bracket with bracket of order one.
    auto m_entry = [&](int c, int b, double& log_abs, double& sign) {
        const int d = 3 - c - b;
        const double bracket = (1.0 - e2[b]) * (1.0 + e2[d])
                             + I[c] * (1.0 + e2[b]) * (1.0 - e2[d]);
        sign = bracket > 0.0 ? 1.0 : (bracket < 0.0 ? -1.0 : 0.0);
        log_abs = r[b] + r[d] - 2.0 * std::numbers::ln2 + std::log(std::abs(bracket));
    };

    Eigen::Matrix3d J;
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        const Triple s_row = {-1.0, std::cos(cfg.inner[c]), std::cos(cfg.inner[b])};
        double sum = 0.0;
        for (int k = 1; k < 3; ++k) {
            const int m = (a + k) % 3;
            double log_m, sg;
            m_entry(m, a, log_m, sg);
            if (sg == 0.0) continue;
            sum += s_row[k] * sg
                 * std::exp(log_sinh_l[a] - log_sinh_l[m] + log_m
                            + log_sinh_r[a] - cfg.log_K);
        }
        J(a, a) = -sum;
    }
    const double r_sum = r[0] + r[1] + r[2];
    for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
            const int d = 3 - a - b;
            const double w = (1.0 - I[d]) * (1.0 + I[d])
                               * (1.0 - e2[a]) * (1.0 - e2[b]) * (1.0 + e2[d])
                           + (1.0 - e2[d])
                               * (I[a] * (I[d] * (1.0 + e2[a]) * (1.0 - e2[b])
                                          + (1.0 - e2[a]) * (1.0 + e2[b]))
                                + I[b] * (I[d] * (1.0 + e2[b]) * (1.0 - e2[a])
                                          + (1.0 - e2[b]) * (1.0 + e2[a])));
            if (w == 0.0) {
                J(a, b) = J(b, a) = 0.0;
                continue;
            }
            const double log_abs = log_sinh_r[a] + log_sinh_r[b]
                                 + r_sum - 3.0 * std::numbers::ln2 + std::log(std::abs(w))
                                 - cfg.log_K - 2.0 * log_sinh_l[d];
            J(a, b) = J(b, a) = std::copysign(std::exp(log_abs), w);
        }
    }
    return J;
}

struct TwoCircleAngles {
    double at_i = 0.0; // inner angle of the degenerate triangle at center i
    double at_j = 0.0;
    double at_point = 0.0; // angle at the shrunk vertex, equals pi - theta_k
};

// Limit of the three-circle triangle as the third radius shrinks to a point
// on both remaining circles: sides become (r_j, r_i, l(r_i, r_j, theta_k)).
// Requires theta_k strictly inside (0, pi); at 0 the two centers collide with
// the point and no triangle exists.
inline TwoCircleAngles two_circle_angles(double r_i, double r_j, double theta_k) {
    detail::require_finite_positive(r_i, "r_i");
    detail::require_finite_positive(r_j, "r_j");
    if (!(theta_k > 0.0) || !(theta_k < std::numbers::pi)) {
        throw std::domain_error("theta_k must lie in (0, pi)");
    }
    const double l_k = side_length(r_i, r_j, theta_k);
    const TriangleAngles ang = angles_from_sides(r_j, r_i, l_k);
    return {ang.a_i, ang.a_j, ang.a_k};
}

// d(at_i, at_j)/d(q_i, q_j) for the two-circle configuration. Symmetric and
// negative definite for theta_k in (0, pi).
inline Eigen::Matrix2d two_circle_jacobian(double r_i, double r_j, double theta_k) {
    detail::require_finite_positive(r_i, "r_i");
    detail::require_finite_positive(r_j, "r_j");
    if (!(theta_k > 0.0) || !(theta_k < std::numbers::pi)) {
        throw std::domain_error("theta_k must lie in (0, pi)");
    }
    const double l_i = r_j, l_j = r_i;
    const double l_k = side_length(r_i, r_j, theta_k);
    const TriangleAngles ang = angles_from_sides(l_i, l_j, l_k);
    const double K = std::exp(ang.log_k);
    const double ci = std::cos(ang.a_i), cj = std::cos(ang.a_j), ck = std::cos(ang.a_k);
    const double ai = std::cosh(r_i), aj = std::cosh(r_j);
    const double xi = std::sinh(r_i), xj = std::sinh(r_j);
    const double Ik = std::cos(theta_k);
    const double m_ki = xi * aj + Ik * ai * xj; // d cosh(l_k)/d r_i
    const double m_kj = xj * ai + Ik * aj * xi;
    const double sl_i = std::sinh(l_i), sl_j = std::sinh(l_j), sl_k = std::sinh(l_k);
    // dl_i = dr_j, dl_j = dr_i, dl_k = (m_ki dr_i + m_kj dr_j)/sinh l_k,
    // d(angle_a) = -(sinh l_a / K) * sum_b S_ab dl_b, dr = sinh(r) dq.
    Eigen::Matrix2d J;
    J(0, 0) = -(sl_i / K) * (ck + cj * m_ki / sl_k) * xi;
    J(0, 1) = -(sl_i / K) * (-1.0 + cj * m_kj / sl_k) * xj;
    J(1, 0) = -(sl_j / K) * (-1.0 + ci * m_ki / sl_k) * xi;
    J(1, 1) = -(sl_j / K) * (ck + ci * m_kj / sl_k) * xj;
    return J;
}

} // namespace hcp
