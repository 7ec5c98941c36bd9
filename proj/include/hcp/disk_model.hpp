#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace hcp {

// Points of the open unit disk carrying the hyperbolic metric.
using Point = std::complex<double>;

// Orientation preserving disk automorphism z -> (a z + b) / (conj(b) z + conj(a)),
// kept normalized to |a|^2 - |b|^2 = 1 so compositions stay well scaled.
struct DiskIsometry {
    std::complex<double> a{1.0, 0.0};
    std::complex<double> b{0.0, 0.0};

    Point operator()(Point z) const {
        return (a * z + b) / (std::conj(b) * z + std::conj(a));
    }
};

// Applies g first, then f.
inline DiskIsometry compose(const DiskIsometry& f, const DiskIsometry& g) {
    DiskIsometry out;
    out.a = f.a * g.a + f.b * std::conj(g.b);
    out.b = f.a * g.b + f.b * std::conj(g.a);
    const double s = std::sqrt(std::norm(out.a) - std::norm(out.b));
    out.a /= s;
    out.b /= s;
    return out;
}

inline DiskIsometry inverse(const DiskIsometry& f) {
    return {std::conj(f.a), -f.b};
}

// Moves the origin to p without rotation: the derivative at the origin is a
// positive real, so directions at 0 map to the same directions at p.
inline DiskIsometry translation(Point p) {
    const double nrm = std::norm(p);
    if (!(nrm < 1.0)) throw std::domain_error("translation target must lie in the disk");
    const double s = std::sqrt(1.0 - nrm);
    return {{1.0 / s, 0.0}, p / s};
}

inline DiskIsometry rotation(double phi) {
    return {std::polar(1.0, 0.5 * phi), 0.0};
}

inline double hyperbolic_distance(Point z, Point w) {
    const double rho = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
    return 2.0 * std::atanh(rho);
}

// Initial direction of the geodesic from `from` toward `to`, as the angle of
// the corresponding ray at the origin after translating `from` there.
inline double direction_toward(Point from, Point to) {
    return std::arg(inverse(translation(from))(to));
}

// The point at hyperbolic distance d from `from` along the given direction.
inline Point point_toward(Point from, double direction, double d) {
    return translation(from)(std::polar(std::tanh(0.5 * d), direction));
}

// Angle between the geodesics apex -> p and apex -> q, in [0, pi].
inline double corner_angle(Point apex, Point p, Point q) {
    const DiskIsometry center = inverse(translation(apex));
    const double spread = std::arg(center(p)) - std::arg(center(q));
    return std::abs(std::remainder(spread, 2.0 * std::numbers::pi));
}

// Euclidean footprint of the hyperbolic circle with center z0 and radius rho.
struct EuclideanCircle {
    Point center;
    double radius = 0.0;
};

inline EuclideanCircle euclidean_circle(Point z0, double rho) {
    const double t = std::tanh(0.5 * rho);
    const double zz = std::norm(z0);
    const double den = 1.0 - t * t * zz;
    return {z0 * ((1.0 - t * t) / den), t * (1.0 - zz) / den};
}

} // namespace hcp
