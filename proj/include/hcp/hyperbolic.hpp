#pragma once

// Scalar kernel for hyperbolic circle geometry: radius/log-radius coordinate
// transforms, center distances of intersecting circles, inner angles of
// geodesic triangles from side lengths, and inversive distance.
//
// Everything here is written to stay accurate over the full radius range a
// solver can visit: tiny radii (side lengths below 1e-8) and huge radii
// (side lengths far beyond the overflow point of cosh). Small quantities are
// kept additive via expm1-style identities; large ones are handled in log
// scale.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hcp {

// Raised when side lengths fail the triangle inequalities by more than the
// degeneracy tolerance, i.e. the inputs do not describe a geodesic triangle.
class degenerate_triangle_error : public std::domain_error {
public:
    explicit degenerate_triangle_error(const std::string& what)
        : std::domain_error(what) {}
};

namespace detail {

// cosh(x) - 1 without cancellation for small x.
inline double coshm1(double x) {
    const double s = std::sinh(0.5 * x);
    return 2.0 * s * s;
}

// log(sinh(x)) for x > 0 without overflow; -inf at x = 0.
inline double log_sinh(double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (x < 20.0) return std::log(std::sinh(x));
    return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
}

// arccosh(1 + x) for x >= 0, accurate near x = 0.
inline double acosh1p(double x) {
    if (x < 0.0) x = 0.0;
    // Past ~1e8 the dropped tail is below 1/(4x^2) and x*(x+2) would overflow
    // long before x itself does, so switch to the asymptotic form.
    if (x > 1e8) return std::log(2.0 * (x + 1.0));
    return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

inline void require_finite_positive(double r, const char* name) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::domain_error(std::string(name) + " must be a positive finite radius");
    }
}

inline void require_weight_range(double theta, const char* name) {
    if (!(theta >= 0.0) || !(theta < std::numbers::pi)) {
        throw std::domain_error(std::string(name) + " must lie in [0, pi)");
    }
}

} // namespace detail

// Log-radius coordinate q = log tanh(r/2), a diffeomorphism (0,inf) -> (-inf,0).
// Stable for large r, where tanh(r/2) rounds to 1 in double precision.
inline double q_of_r(double r) {
    detail::require_finite_positive(r, "r");
    const double x = std::exp(-r);
    // exp(-r) underflows near r = 745; report the closest negative value so
    // q stays strictly below zero on the whole domain.
    if (x == 0.0) return -std::numeric_limits<double>::denorm_min();
    // 1 - exp(-r) cancels for small r, so take it from expm1 there.
    const double log_num = r < 1.0 ? std::log(-std::expm1(-r)) : std::log1p(-x);
    return log_num - std::log1p(x);
}

inline double r_of_q(double q) {
    if (!(q < 0.0) || !std::isfinite(q)) {
        throw std::domain_error("q must be a negative finite number");
    }
    const double eq = std::exp(q);
    // Same cancellation on 1 - exp(q) when q is close to zero.
    const double log_den = q > -1.0 ? std::log(-std::expm1(q)) : std::log1p(-eq);
    return std::log1p(eq) - log_den;
}

// Center distance of two circles with radii r_j, r_k meeting at exterior
// intersection angle theta in [0, pi):
//   cosh l = cosh r_j cosh r_k + cos theta sinh r_j sinh r_k.
// Uses a log-sum-exp form once the exact product would overflow (combined
// radius above ~690) and a cancellation-free expansion otherwise.
inline double side_length(double r_j, double r_k, double theta) {
    detail::require_finite_positive(r_j, "r_j");
    detail::require_finite_positive(r_k, "r_k");
    detail::require_weight_range(theta, "theta");
    const double ct = std::cos(theta);
    if (r_j + r_k > 690.0) {
        // cosh l = e^(r_j+r_k)/4 * [ (1+ct) + e^(-2r_j)(1-ct) + e^(-2r_k)(1-ct)
        //                            + e^(-2(r_j+r_k))(1+ct) ]
        const double s = (1.0 + ct) * (1.0 + std::exp(-2.0 * (r_j + r_k)))
            + (1.0 - ct) * (std::exp(-2.0 * r_j) + std::exp(-2.0 * r_k));
        return r_j + r_k + std::log(0.5 * s);
    }
    const double aj = detail::coshm1(r_j);
    const double ak = detail::coshm1(r_k);
    // cosh l - 1, with the small-radius contributions kept additive. Grouped
    // so that swapping r_j and r_k reproduces the result bit for bit.
    double x = aj * ak + (aj + ak) + ct * (std::sinh(r_j) * std::sinh(r_k));
    if (x < 0.0) x = 0.0; // only reachable by rounding; true value >= cosh(r_j-r_k)-1
    return detail::acosh1p(x);
}

// Inner angles of a hyperbolic triangle from its side lengths, via the
// half-angle form of the cosine law,
//   tan^2(angle_i / 2) = sinh(s-l_j) sinh(s-l_k) / (sinh(s) sinh(s-l_i)),
// evaluated in log scale. This keeps full relative accuracy for angles close
// to 0 and pi and never overflows, unlike the direct cosine law.
struct TriangleAngles {
    double a_i, a_j, a_k; // angle opposite l_i, l_j, l_k
    double log_k;         // log of K = 2 sqrt(prod sinh(s...)), symmetric in i,j,k
};

inline TriangleAngles angles_from_sides(double l_i, double l_j, double l_k) {
    const double scale = std::max({l_i, l_j, l_k});
    if (!(scale > 0.0) || !std::isfinite(l_i + l_j + l_k)) {
        throw degenerate_triangle_error("side lengths must be positive finite");
    }
    double d1 = 0.5 * ((l_j - l_i) + l_k); // s - l_i
    double d2 = 0.5 * ((l_k - l_j) + l_i); // s - l_j
    double d3 = 0.5 * ((l_i - l_k) + l_j); // s - l_k
    const double tol = 1e-12 * scale;
    if (d1 < -tol || d2 < -tol || d3 < -tol) {
        throw degenerate_triangle_error("triangle inequality violated beyond tolerance");
    }
    d1 = std::max(d1, 0.0);
    d2 = std::max(d2, 0.0);
    d3 = std::max(d3, 0.0);
    const double ls = detail::log_sinh(0.5 * (l_i + l_j + l_k));
    const double l1 = detail::log_sinh(d1);
    const double l2 = detail::log_sinh(d2);
    const double l3 = detail::log_sinh(d3);
    auto half_angle = [&](double num1, double num2, double den) {
        // 2 * atan( sqrt( sinh(num1) sinh(num2) / (sinh(s) sinh(den)) ) )
        const double u = 0.5 * (num1 + num2 - ls - den);
        if (std::isnan(u)) {
            // 0/0 in log scale: two vanishing factors, genuinely degenerate.
            throw degenerate_triangle_error("degenerate triangle (multiple zero defects)");
        }
        return 2.0 * std::atan(std::exp(u));
    };
    TriangleAngles out;
    out.a_i = half_angle(l2, l3, l1);
    out.a_j = half_angle(l3, l1, l2);
    out.a_k = half_angle(l1, l2, l3);
    out.log_k = std::numbers::ln2 + 0.5 * (ls + l1 + l2 + l3);
    return out;
}

// Inversive distance of two circles with radii r_v, r_u at center distance d:
//   I = (cosh d - cosh r_v cosh r_u) / (sinh r_v sinh r_u).
// I = cos theta when the circles meet at exterior angle theta; values above 1
// mean disjoint, below -1 mean one contains the other deeply.
inline double inversive_distance(double d, double r_v, double r_u) {
    detail::require_finite_positive(r_v, "r_v");
    detail::require_finite_positive(r_u, "r_u");
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw std::domain_error("d must be a nonnegative finite distance");
    }
    const double av = detail::coshm1(r_v);
    const double au = detail::coshm1(r_u);
    const double num = detail::coshm1(d) - (av * au + av + au);
    return num / (std::sinh(r_v) * std::sinh(r_u));
}

} // namespace hcp
