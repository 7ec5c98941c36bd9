#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcp/complex.hpp"
#include "hcp/three_circle.hpp"

namespace hcp {

// Edge weights indexed by edge id: the exterior intersection angle of the
// two circles meeting across the edge, in [0, pi).
using WeightFunction = std::vector<double>;

inline WeightFunction make_weight_function(const CellComplex& cx,
                                           const std::map<int, double>& values) {
    if (static_cast<int>(values.size()) != cx.edge_count()) {
        throw std::invalid_argument("weight map must cover the edge set exactly");
    }
    WeightFunction w(cx.edge_count());
    for (int e = 0; e < cx.edge_count(); ++e) {
        const auto it = values.find(e);
        if (it == values.end()) {
            throw std::invalid_argument("missing weight for edge " + std::to_string(e));
        }
        if (!(it->second >= 0.0) || !(it->second < std::numbers::pi)) {
            throw std::invalid_argument("weight for edge " + std::to_string(e)
                                        + " is outside [0, pi)");
        }
        w[e] = it->second;
    }
    return w;
}

enum class ConditionStatus { PASS, FAIL, UNVERIFIED };

inline const char* to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::PASS: return "PASS";
        case ConditionStatus::FAIL: return "FAIL";
        default: return "UNVERIFIED";
    }
}

// One bound instance: the edge multiset whose weights enter the inequality
// and how much slack it has. Positive margin means strictly satisfied.
struct ConditionWitness {
    std::string label;
    std::vector<int> edges;
    double margin = 0.0;
};

struct ConditionReport {
    std::string condition;
    ConditionStatus status = ConditionStatus::UNVERIFIED;
    // Every offender on FAIL, the tightest instance on PASS.
    std::vector<ConditionWitness> witnesses;
    // Nonzero when the check enumerates curves up to a vertex-count cap;
    // a PASS then only covers the enumerated family.
    int size_cap = 0;
    std::string note;
};

namespace detail {

inline void require_total_weights(int edge_count, const WeightFunction& w) {
    if (static_cast<int>(w.size()) != edge_count) {
        throw std::invalid_argument("weight function does not cover the edge set");
    }
    for (int e = 0; e < edge_count; ++e) {
        if (!(w[e] >= 0.0) || !(w[e] < std::numbers::pi)) {
            throw std::invalid_argument("weight for edge " + std::to_string(e)
                                        + " is outside [0, pi)");
        }
    }
}

inline std::string face_label(int f) { return "face " + std::to_string(f); }

inline std::string curve_label(const BlockingCurve& c) {
    std::string label = "curve around vertices";
    for (int v : c.vertex_set) label += " " + std::to_string(v);
    return label;
}

inline double curve_margin(const BlockingCurve& c, const WeightFunction& w) {
    double sum = 0.0;
    for (int e : c.boundary_edges) sum += w[e];
    return (c.s - 2) * std::numbers::pi - sum;
}

// Collapses per-instance results into a report: offenders win, otherwise the
// tightest instance is kept as the lone witness.
inline ConditionReport summarize(std::string condition,
                                 std::vector<ConditionWitness> all,
                                 const std::vector<char>& ok) {
    ConditionReport rep;
    rep.condition = std::move(condition);
    rep.status = ConditionStatus::PASS;
    size_t tightest = all.size();
    for (size_t i = 0; i < all.size(); ++i) {
        if (!ok[i]) {
            rep.status = ConditionStatus::FAIL;
            rep.witnesses.push_back(all[i]);
        } else if (tightest == all.size() || all[i].margin < all[tightest].margin) {
            tightest = i;
        }
    }
    if (rep.status == ConditionStatus::PASS && tightest != all.size()) {
        rep.witnesses.push_back(all[tightest]);
    }
    return rep;
}

} // namespace detail

// Per-face admissibility of the boundary weights (a, b, c): either the sum
// stays at or below pi, or every cyclic bound a + b < pi + c holds strictly.
// The margin is the best slack across the two routes, so zero means the
// strict route failed on a knife edge.
inline ConditionReport check_C1(const Triangulation& tri, const WeightFunction& w) {
    detail::require_total_weights(tri.edge_count(), w);
    std::vector<ConditionWitness> all;
    std::vector<char> ok;
    for (int f = 0; f < tri.cell_count(); ++f) {
        const auto face = tri.face(f);
        const double a = w[face[0].edge], b = w[face[1].edge], c = w[face[2].edge];
        const double sum_margin = std::numbers::pi - ((a + b) + c);
        const double cyclic = std::min({((std::numbers::pi + c) - a) - b,
                                        ((std::numbers::pi + a) - b) - c,
                                        ((std::numbers::pi + b) - c) - a});
        all.push_back({detail::face_label(f),
                       {face[0].edge, face[1].edge, face[2].edge},
                       std::max(sum_margin, cyclic)});
        ok.push_back(sum_margin >= 0.0 || cyclic > 0.0);
    }
    return detail::summarize("C1", std::move(all), ok);
}

// Boundary weight sums of disk neighborhoods: every enumerated blocking
// curve must satisfy sum < (s - 2) pi strictly. The enumeration is capped by
// vertex count, so a PASS covers only curves up to the reported cap.
inline ConditionReport check_C2(const Triangulation& tri, const WeightFunction& w,
                                int size_cap = 6) {
    detail::require_total_weights(tri.edge_count(), w);
    if (size_cap < 1) throw std::invalid_argument("size_cap must be at least 1");
    std::vector<ConditionWitness> all;
    std::vector<char> ok;
    int cap = 0;
    if (tri.vertex_count() > 1) {
        cap = std::min(size_cap, tri.vertex_count() - 1);
        for (const auto& curve : enumerate_blocking_curves(tri, cap)) {
            const double margin = detail::curve_margin(curve, w);
            all.push_back({detail::curve_label(curve), curve.boundary_edges, margin});
            ok.push_back(margin > 0.0);
        }
    }
    ConditionReport rep = detail::summarize("C2", std::move(all), ok);
    rep.size_cap = cap;
    rep.note = "curves with more than " + std::to_string(cap)
             + " vertices are not enumerated and stay unverified";
    return rep;
}

// Quadrilateral bound: for every edge, the four boundary weights of the two
// incident faces (the neighbors of the shared side in each face, counted
// with multiplicity when faces touch more than once) sum to less than 2 pi.
inline ConditionReport check_C3(const Triangulation& tri, const WeightFunction& w) {
    detail::require_total_weights(tri.edge_count(), w);
    std::vector<ConditionWitness> all;
    std::vector<char> ok;
    for (int e = 0; e < tri.edge_count(); ++e) {
        std::vector<int> boundary;
        for (const Side& s : tri.edge_sides(e)) {
            boundary.push_back(tri.corner(tri.next(s)).edge);
            boundary.push_back(tri.corner(tri.prev(s)).edge);
        }
        double sum = 0.0;
        for (int b : boundary) sum += w[b];
        const double margin = 2.0 * std::numbers::pi - sum;
        all.push_back({"edge " + std::to_string(e), std::move(boundary), margin});
        ok.push_back(margin > 0.0);
    }
    return detail::summarize("C3", std::move(all), ok);
}

// Nonnegativity of cos t_i + cos t_j cos t_k on every face, the condition
// that makes the curvature map's Jacobian definite. Margins here are the
// smallest of the three coefficients, not radians.
inline ConditionReport check_R1(const Triangulation& tri, const WeightFunction& w) {
    detail::require_total_weights(tri.edge_count(), w);
    std::vector<ConditionWitness> all;
    std::vector<char> ok;
    for (int f = 0; f < tri.cell_count(); ++f) {
        const auto face = tri.face(f);
        const auto rep = check_angle_triple({w[face[0].edge], w[face[1].edge],
                                             w[face[2].edge]});
        const double margin = std::min({rep.gamma[0], rep.gamma[1], rep.gamma[2]});
        all.push_back({detail::face_label(f),
                       {face[0].edge, face[1].edge, face[2].edge},
                       margin});
        ok.push_back(rep.gamma_nonneg);
    }
    return detail::summarize("R1", std::move(all), ok);
}

// Weights for the star subdivision: primal edges keep their weight reduced
// by eps, star edges get weight zero (their circles are tangent).
inline WeightFunction subdivided_weights(const SubdividedComplex& sub,
                                         const WeightFunction& base, double eps) {
    detail::require_total_weights(sub.base_edges, base);
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    WeightFunction w(sub.triangulation.edge_count(), 0.0);
    for (int e : sub.primal_edges) {
        w[e] = base[e] - eps;
        if (w[e] < 0.0) {
            throw std::invalid_argument("eps exceeds the weight of edge "
                                        + std::to_string(e));
        }
    }
    return w;
}

// Hypotheses for ideal patterns on a cell complex: each cell's boundary
// weights (listed with multiplicity along the boundary word) must sum to
// exactly (m - 2) pi, and the subdivision weights must clear the curve
// bounds. The curve check runs at eps = 0: each curve margin grows by eps
// per primal boundary edge, so positive margins at zero stay positive for
// every small eps. Stars of single cells are skipped because the sum
// identity pins their margin to exactly zero there.
inline ConditionReport check_ideal_conditions(const CellComplex& cx,
                                              const WeightFunction& w,
                                              int size_cap = 6) {
    detail::require_total_weights(cx.edge_count(), w);
    for (int e = 0; e < cx.edge_count(); ++e) {
        if (w[e] == 0.0) {
            throw std::invalid_argument("ideal patterns need strictly positive "
                                        "weights; edge " + std::to_string(e)
                                        + " has weight 0");
        }
    }
    std::vector<ConditionWitness> all;
    std::vector<char> ok;
    for (int c = 0; c < cx.cell_count(); ++c) {
        const int m = cx.cell_size(c);
        std::vector<int> boundary;
        double sum = 0.0;
        for (const Corner& corner : cx.cell(c)) {
            boundary.push_back(corner.edge);
            sum += w[corner.edge];
        }
        const double deviation = sum - (m - 2) * std::numbers::pi;
        all.push_back({"cell " + std::to_string(c), std::move(boundary), deviation});
        ok.push_back(std::abs(deviation) <= 1e-12);
    }

    const SubdividedComplex sub = subdivide_cell_complex(cx);
    const WeightFunction wsub = subdivided_weights(sub, w, 0.0);
    const int vsub = sub.triangulation.vertex_count();
    if (size_cap < 1) throw std::invalid_argument("size_cap must be at least 1");
    const int cap = std::min(size_cap, vsub - 1);
    for (const auto& curve : enumerate_blocking_curves(sub.triangulation, cap)) {
        if (curve.vertex_set.size() == 1 && curve.vertex_set[0] >= sub.base_vertices) {
            continue;
        }
        const double margin = detail::curve_margin(curve, wsub);
        all.push_back({detail::curve_label(curve) + " (subdivision)",
                       curve.boundary_edges, margin});
        ok.push_back(margin > 0.0);
    }

    ConditionReport rep = detail::summarize("H1+H2", std::move(all), ok);
    rep.size_cap = cap;
    rep.note = "cell sums carry absolute tolerance 1e-12; subdivision curves "
               "checked at eps = 0 up to " + std::to_string(cap) + " vertices";
    return rep;
}

} // namespace hcp
