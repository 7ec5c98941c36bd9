#pragma once

// Shared helpers for the test suites: deterministic samplers and
// finite-difference oracles kept independent of the library's closed forms.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>

#include "hcp/io.hpp"
#include "hcp/three_circle.hpp"

namespace testsupport {

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

// Loads one of the sample documents shipped in data/.
inline hcp::PatternInput load_data(const std::string& name) {
    return hcp::read_pattern_input(std::string(HCP_DATA_DIR) + "/" + name);
}

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(g));
}

// Rejection-samples an angle triple until it is admissible.
inline hcp::Triple admissible_angles(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi - 1e-9);
    while (true) {
        hcp::Triple t = {u(g), u(g), u(g)};
        if (hcp::check_angle_triple(t).admissible) return t;
    }
}

inline hcp::Triple radii_in(std::mt19937_64& g, double lo, double hi) {
    return {log_uniform(g, lo, hi), log_uniform(g, lo, hi), log_uniform(g, lo, hi)};
}

// Central finite differences of the inner angles with respect to q,
// evaluated through the public config builder only.
inline Eigen::Matrix3d fd_angle_jacobian(const hcp::Triple& r, const hcp::Triple& t,
                                         double h = 1e-6) {
    hcp::Triple q = {hcp::q_of_r(r[0]), hcp::q_of_r(r[1]), hcp::q_of_r(r[2])};
    Eigen::Matrix3d J;
    for (int b = 0; b < 3; ++b) {
        hcp::Triple qp = q, qm = q;
        qp[b] += h;
        qm[b] -= h;
        hcp::Triple rp = {hcp::r_of_q(qp[0]), hcp::r_of_q(qp[1]), hcp::r_of_q(qp[2])};
        hcp::Triple rm = {hcp::r_of_q(qm[0]), hcp::r_of_q(qm[1]), hcp::r_of_q(qm[2])};
        const auto cp = hcp::three_circle_config(rp, t);
        const auto cm = hcp::three_circle_config(rm, t);
        for (int a = 0; a < 3; ++a) {
            J(a, b) = (cp.inner[a] - cm.inner[a]) / (2.0 * h);
        }
    }
    return J;
}

inline Eigen::Matrix2d fd_two_circle_jacobian(double r_i, double r_j, double theta_k,
                                              double h = 1e-6) {
    const double qi = hcp::q_of_r(r_i), qj = hcp::q_of_r(r_j);
    auto eval = [&](double dqi, double dqj) {
        const auto a = hcp::two_circle_angles(hcp::r_of_q(qi + dqi), hcp::r_of_q(qj + dqj), theta_k);
        return Eigen::Vector2d(a.at_i, a.at_j);
    };
    Eigen::Matrix2d J;
    J.col(0) = (eval(h, 0) - eval(-h, 0)) / (2.0 * h);
    J.col(1) = (eval(0, h) - eval(0, -h)) / (2.0 * h);
    return J;
}

} // namespace testsupport
