#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hcp/three_circle.hpp"
#include "hcp/weights.hpp"

namespace hcp {

// Vertex radii in the log-scale coordinate q = log tanh(r/2), total on the
// vertex set and strictly negative.
using RadiusVector = std::vector<double>;

// Discrete curvature per vertex: 2 pi minus the cone angle.
using CurvatureVector = std::vector<double>;

inline RadiusVector default_radius_vector(int vertex_count) {
    return RadiusVector(vertex_count, q_of_r(1.0));
}

namespace detail {

inline void require_radius_vector(int vertex_count, const RadiusVector& q) {
    if (static_cast<int>(q.size()) != vertex_count) {
        throw std::invalid_argument("radius vector does not cover the vertex set");
    }
    for (int v = 0; v < vertex_count; ++v) {
        if (!(q[v] < 0.0) || !std::isfinite(q[v])) {
            throw std::invalid_argument("q must be negative and finite at vertex "
                                        + std::to_string(v));
        }
    }
}

// Radii and weights of one face in the corner order used throughout: the
// weight paired with corner i sits on the edge opposite it.
struct FaceData {
    Triple r;
    Triple t;
};

inline FaceData face_data(const Triangulation& tri, const WeightFunction& w,
                          const RadiusVector& q, int f) {
    const auto face = tri.face(f);
    return {{r_of_q(q[face[0].vertex]), r_of_q(q[face[1].vertex]),
             r_of_q(q[face[2].vertex])},
            {w[face[1].edge], w[face[2].edge], w[face[0].edge]}};
}

} // namespace detail

inline CurvatureVector curvature(const Triangulation& tri, const WeightFunction& w,
                                 const RadiusVector& q) {
    detail::require_total_weights(tri.edge_count(), w);
    detail::require_radius_vector(tri.vertex_count(), q);
    CurvatureVector k(tri.vertex_count(), 2.0 * std::numbers::pi);
    for (int f = 0; f < tri.cell_count(); ++f) {
        const auto data = detail::face_data(tri, w, q, f);
        ThreeCircleConfig config;
        try {
            config = three_circle_config(data.r, data.t);
        } catch (const degenerate_triangle_error& e) {
            throw degenerate_triangle_error("face " + std::to_string(f) + ": "
                                            + e.what());
        } catch (const std::domain_error& e) {
            throw std::domain_error("face " + std::to_string(f) + ": " + e.what());
        }
        const auto face = tri.face(f);
        for (int i = 0; i < 3; ++i) k[face[i].vertex] -= config.inner[i];
    }
    return k;
}

// Derivative of the negated curvature in q: the per-face angle derivative
// blocks scattered over the vertex pairs. Symmetric by construction and
// negative definite whenever the weight coefficients are nonnegative.
inline Eigen::SparseMatrix<double> hessian(const Triangulation& tri,
                                           const WeightFunction& w,
                                           const RadiusVector& q) {
    detail::require_total_weights(tri.edge_count(), w);
    detail::require_radius_vector(tri.vertex_count(), q);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(tri.cell_count()) * 9);
    for (int f = 0; f < tri.cell_count(); ++f) {
        const auto data = detail::face_data(tri, w, q, f);
        Eigen::Matrix3d block;
        try {
            block = angle_jacobian(data.r, data.t);
        } catch (const degenerate_triangle_error& e) {
            throw degenerate_triangle_error("face " + std::to_string(f) + ": "
                                            + e.what());
        } catch (const std::domain_error& e) {
            throw std::domain_error("face " + std::to_string(f) + ": " + e.what());
        }
        const auto face = tri.face(f);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                triplets.emplace_back(face[i].vertex, face[j].vertex, block(i, j));
            }
        }
    }
    Eigen::SparseMatrix<double> h(tri.vertex_count(), tri.vertex_count());
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
}

// Potential difference Phi(q) - Phi(q_ref): the line integral of the closed
// 1-form sum(theta dq) - 2 pi sum(dq) along the straight segment, evaluated
// by adaptive Simpson quadrature. The integrand in the segment parameter is
// the inner product of the negated curvature with the segment direction.
inline double phi(const Triangulation& tri, const WeightFunction& w,
                  const RadiusVector& q, const RadiusVector& q_ref,
                  double quad_tol = 1e-10) {
    detail::require_radius_vector(tri.vertex_count(), q);
    detail::require_radius_vector(tri.vertex_count(), q_ref);
    const int n = tri.vertex_count();
    const auto integrand = [&](double s) {
        RadiusVector qs(n);
        for (int v = 0; v < n; ++v) qs[v] = q_ref[v] + s * (q[v] - q_ref[v]);
        const CurvatureVector k = curvature(tri, w, qs);
        double dot = 0.0;
        for (int v = 0; v < n; ++v) dot += -k[v] * (q[v] - q_ref[v]);
        return dot;
    };

    struct Panel {
        double a, b, fa, fm, fb, whole;
        int depth;
    };
    const auto simpson = [](double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    };
    const double f0 = integrand(0.0), f1 = integrand(1.0), fm = integrand(0.5);
    std::vector<Panel> stack = {{0.0, 1.0, f0, fm, f1, simpson(0.0, 1.0, f0, fm, f1), 0}};
    double total = 0.0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double fl = integrand(0.5 * (p.a + m));
        const double fr = integrand(0.5 * (m + p.b));
        const double left = simpson(p.a, m, p.fa, fl, p.fm);
        const double right = simpson(m, p.b, p.fm, fr, p.fb);
        const double err = (left + right - p.whole) / 15.0;
        if (std::abs(err) <= quad_tol * std::max(p.b - p.a, 1e-3)) {
            total += left + right + err;
            continue;
        }
        if (p.depth >= 40) {
            throw std::runtime_error("quadrature tolerance unreachable");
        }
        stack.push_back({p.a, m, p.fa, fl, p.fm, left, p.depth + 1});
        stack.push_back({m, p.b, p.fm, fr, p.fb, right, p.depth + 1});
    }
    return total;
}

enum class SolveStatus {
    CONVERGED,
    MAX_ITER,
    STALLED,
    MAX_STEPS,
    CONTINUATION_STALLED,
    NON_DECAYING_STAR,
};

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::CONVERGED: return "CONVERGED";
        case SolveStatus::MAX_ITER: return "MAX_ITER";
        case SolveStatus::STALLED: return "STALLED";
        case SolveStatus::MAX_STEPS: return "MAX_STEPS";
        case SolveStatus::CONTINUATION_STALLED: return "CONTINUATION_STALLED";
        default: return "NON_DECAYING_STAR";
    }
}

struct SolveResult {
    RadiusVector q;
    double residual = 0.0; // max |k| at q, recomputed at exit
    int iterations = 0;
    std::string strategy;
    SolveStatus status = SolveStatus::CONVERGED;
    std::vector<double> residual_history;
    std::vector<double> step_sizes;
    std::vector<double> damping_history;
    std::vector<RadiusVector> iterates; // newton only: q0 and every accepted point
    double t_reached = 1.0; // continuation only: last homotopy parameter solved
};

namespace detail {

inline double max_abs(const CurvatureVector& k) {
    double m = 0.0;
    for (double value : k) m = std::max(m, std::abs(value));
    return m;
}

inline double norm2(const CurvatureVector& k) {
    double s = 0.0;
    for (double value : k) s += value * value;
    return s;
}

inline void require_face_gate(const Triangulation& tri, const WeightFunction& w) {
    const auto c1 = check_C1(tri, w);
    if (c1.status != ConditionStatus::PASS) {
        std::string what = "weights fail the face admissibility bound";
        if (!c1.witnesses.empty()) what += " at " + c1.witnesses.front().label;
        throw std::domain_error(what);
    }
}

} // namespace detail

// Damped Newton iteration on k(q) = 0. Steps solve (-H + lambda I) d = -k,
// which is the plain Newton step at lambda = 0; the damping parameter rises
// tenfold whenever the factorization or the line search fails and relaxes
// by a third after accepted steps. Acceptance requires a strict decrease of
// the squared curvature norm under backtracking that also keeps q negative.
inline SolveResult newton_solve(const Triangulation& tri, const WeightFunction& w,
                                const RadiusVector& q0, double tol = 1e-10,
                                int max_iter = 200) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    detail::require_face_gate(tri, w);
    detail::require_radius_vector(tri.vertex_count(), q0);

    const int n = tri.vertex_count();
    SolveResult result;
    result.strategy = "newton";
    result.q = q0;
    result.iterates.push_back(q0);
    double lambda = 0.0;

    CurvatureVector k = curvature(tri, w, result.q);
    for (int iter = 0; iter < max_iter; ++iter) {
        const double res = detail::max_abs(k);
        result.residual_history.push_back(res);
        if (res < tol) {
            result.residual = res;
            result.iterations = iter;
            result.status = SolveStatus::CONVERGED;
            return result;
        }

        Eigen::SparseMatrix<double> a = -hessian(tri, w, result.q);
        if (lambda > 0.0) {
            Eigen::SparseMatrix<double> identity(n, n);
            identity.setIdentity();
            a += lambda * identity;
        }
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(a);
        if (factor.info() != Eigen::Success) {
            lambda = lambda == 0.0 ? 1e-8 : lambda * 10.0;
            result.iterations = iter + 1;
            result.damping_history.push_back(lambda);
            result.step_sizes.push_back(0.0);
            continue;
        }
        Eigen::VectorXd rhs(n);
        for (int v = 0; v < n; ++v) rhs[v] = -k[v];
        const Eigen::VectorXd direction = factor.solve(rhs);

        // Backtracking on the squared curvature norm; trial points must stay
        // inside the negative half-space.
        const double base_norm = detail::norm2(k);
        double alpha = 1.0;
        double step_inf = direction.cwiseAbs().maxCoeff();
        bool accepted = false;
        RadiusVector trial(n);
        while (alpha * step_inf >= 1e-14) {
            bool inside = true;
            for (int v = 0; v < n; ++v) {
                trial[v] = result.q[v] + alpha * direction[v];
                if (!(trial[v] < 0.0)) inside = false;
            }
            if (inside) {
                const CurvatureVector ktrial = curvature(tri, w, trial);
                if (detail::norm2(ktrial) < base_norm) {
                    result.q = trial;
                    result.iterates.push_back(trial);
                    k = ktrial;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        result.step_sizes.push_back(accepted ? alpha * step_inf : 0.0);
        if (accepted) {
            lambda /= 3.0;
            if (lambda < 1e-12) lambda = 0.0;
        } else {
            if (step_inf < 1e-14) {
                result.residual = detail::max_abs(k);
                result.iterations = iter + 1;
                result.status = SolveStatus::STALLED;
                return result;
            }
            lambda = lambda == 0.0 ? 1e-8 : lambda * 10.0;
        }
        result.damping_history.push_back(lambda);
    }
    result.residual = detail::max_abs(k);
    result.iterations = max_iter;
    result.status = result.residual < tol ? SolveStatus::CONVERGED : SolveStatus::MAX_ITER;
    return result;
}

struct FlowControl {
    double initial_step = 0.1;
    double shrink = 0.5;
    double grow = 1.2;
    int grow_after = 5;
};

// Explicit integration of dq/dt = -k with step rejection: a step counts only
// if the curvature sup-norm does not increase, otherwise the step halves.
// Five accepted steps in a row let the step grow again.
inline SolveResult ricci_flow(const Triangulation& tri, const WeightFunction& w,
                              const RadiusVector& q0, FlowControl control = {},
                              double tol = 1e-10, int max_steps = 200000) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(control.initial_step > 0.0)) {
        throw std::invalid_argument("initial step must be positive");
    }
    detail::require_face_gate(tri, w);
    detail::require_radius_vector(tri.vertex_count(), q0);

    const int n = tri.vertex_count();
    SolveResult result;
    result.strategy = "flow";
    result.q = q0;
    double h = control.initial_step;
    int streak = 0;

    CurvatureVector k = curvature(tri, w, result.q);
    double res = detail::max_abs(k);
    for (int step = 0; step < max_steps; ++step) {
        result.residual_history.push_back(res);
        if (res < tol) {
            result.residual = res;
            result.iterations = step;
            result.status = SolveStatus::CONVERGED;
            return result;
        }
        RadiusVector trial(n);
        bool inside = true;
        for (int v = 0; v < n; ++v) {
            trial[v] = result.q[v] - h * k[v];
            if (!(trial[v] < 0.0)) inside = false;
        }
        bool accepted = false;
        if (inside) {
            const CurvatureVector ktrial = curvature(tri, w, trial);
            const double rtrial = detail::max_abs(ktrial);
            if (rtrial <= res) {
                result.q = trial;
                k = ktrial;
                res = rtrial;
                accepted = true;
            }
        }
        result.step_sizes.push_back(accepted ? h : 0.0);
        if (accepted) {
            if (++streak >= control.grow_after) {
                h *= control.grow;
                streak = 0;
            }
        } else {
            h *= control.shrink;
            streak = 0;
        }
    }
    result.residual = res;
    result.iterations = max_steps;
    result.status = res < tol ? SolveStatus::CONVERGED : SolveStatus::MAX_STEPS;
    return result;
}

// Homotopy in the weights: solve at t = 0 (the tangency case), then march t
// toward 1 reusing each stage's solution as the next warm start. Failed
// stages bisect the t-interval; intervals below 1e-4 stop the march and
// surface the last solved stage.
inline SolveResult continuation_solve(const Triangulation& tri,
                                      const WeightFunction& w, int t_steps = 11,
                                      double tol = 1e-10) {
    if (t_steps < 2) throw std::invalid_argument("t_steps must be at least 2");
    detail::require_face_gate(tri, w);
    const auto c2 = check_C2(tri, w);
    if (c2.status != ConditionStatus::PASS) {
        std::string what = "weights fail the curve bound";
        if (!c2.witnesses.empty()) what += " at " + c2.witnesses.front().label;
        throw std::domain_error(what);
    }

    const int n = tri.vertex_count();
    SolveResult result;
    result.strategy = "continuation";

    const auto scaled = [&](double t) {
        WeightFunction tw(w.size());
        for (size_t e = 0; e < w.size(); ++e) tw[e] = t * w[e];
        return tw;
    };

    RadiusVector q = default_radius_vector(n);
    double t_done = -1.0;
    double t_next = 0.0;
    const double dt0 = 1.0 / (t_steps - 1);
    while (t_done < 1.0) {
        const SolveResult stage = newton_solve(tri, scaled(t_next), q, tol, 200);
        result.iterations += stage.iterations;
        result.residual_history.insert(result.residual_history.end(),
                                       stage.residual_history.begin(),
                                       stage.residual_history.end());
        if (stage.status == SolveStatus::CONVERGED) {
            q = stage.q;
            t_done = t_next;
            result.q = q;
            result.residual = stage.residual;
            result.t_reached = t_done;
            result.step_sizes.push_back(t_next);
            t_next = std::min(1.0, t_done + dt0);
        } else {
            if (t_done < 0.0) {
                // The tangency stage itself failed; nothing to fall back to.
                result.q = stage.q;
                result.residual = stage.residual;
                result.t_reached = 0.0;
                result.status = SolveStatus::CONTINUATION_STALLED;
                return result;
            }
            const double dt = (t_next - t_done) / 2.0;
            if (dt < 1e-4) {
                result.status = SolveStatus::CONTINUATION_STALLED;
                return result;
            }
            t_next = t_done + dt;
        }
    }
    result.status = SolveStatus::CONVERGED;
    return result;
}

struct IdealStage {
    double eps = 0.0;
    std::vector<double> star_radii;
    double max_star_radius = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

struct IdealSolveResult {
    SolveStatus status = SolveStatus::CONVERGED;
    RadiusVector primal_q;  // extrapolated to eps -> 0 from the last two stages
    RadiusVector last_q;    // full solution on the subdivision at the final stage
    std::vector<IdealStage> stages;
};

// Shrinking-incidence continuation: solve the subdivided problem along a
// decreasing eps schedule, warm-starting each stage, and extrapolate the
// primal radii linearly to eps = 0. The star radii must shrink along the
// schedule; three consecutive stages without decay abort the run.
inline IdealSolveResult ideal_solve(const CellComplex& cx, const WeightFunction& w,
                                    const std::vector<double>& eps_schedule,
                                    double tol = 1e-10) {
    if (eps_schedule.empty()) throw std::invalid_argument("eps schedule is empty");
    for (size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0.0)) {
            throw std::invalid_argument("eps schedule must stay positive");
        }
        if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
            throw std::invalid_argument("eps schedule must strictly decrease");
        }
    }
    const auto gate = check_ideal_conditions(cx, w);
    if (gate.status != ConditionStatus::PASS) {
        std::string what = "weights fail the ideal pattern hypotheses";
        if (!gate.witnesses.empty()) what += " at " + gate.witnesses.front().label;
        throw std::domain_error(what);
    }

    const SubdividedComplex sub = subdivide_cell_complex(cx);
    const auto& tri = sub.triangulation;
    IdealSolveResult result;
    RadiusVector q = default_radius_vector(tri.vertex_count());
    RadiusVector prev_primal;
    double prev_eps = 0.0;
    int stalls = 0;

    for (double eps : eps_schedule) {
        const WeightFunction wsub = subdivided_weights(sub, w, eps);
        prev_primal.assign(q.begin(), q.begin() + sub.base_vertices);
        const SolveResult stage = newton_solve(tri, wsub, q, tol, 200);
        if (stage.status != SolveStatus::CONVERGED) {
            result.status = stage.status;
            result.last_q = stage.q;
            return result;
        }
        q = stage.q;

        IdealStage record;
        record.eps = eps;
        record.residual = stage.residual;
        record.iterations = stage.iterations;
        for (int v : sub.star_vertices) {
            record.star_radii.push_back(r_of_q(q[v]));
        }
        record.max_star_radius = *std::max_element(record.star_radii.begin(),
                                                   record.star_radii.end());
        if (!result.stages.empty()
            && record.max_star_radius >= result.stages.back().max_star_radius) {
            if (++stalls >= 3) {
                result.stages.push_back(record);
                result.last_q = q;
                result.status = SolveStatus::NON_DECAYING_STAR;
                return result;
            }
        } else {
            stalls = 0;
        }
        if (!result.stages.empty()) prev_eps = result.stages.back().eps;
        result.stages.push_back(record);
    }

    result.last_q = q;
    result.primal_q.assign(q.begin(), q.begin() + sub.base_vertices);
    if (result.stages.size() >= 2) {
        // Linear model q(eps) = a + b eps through the last two stages; the
        // limit a = (q2 e1 - q1 e2) / (e1 - e2) with e2 < e1. prev_primal
        // still holds the warm start of the final stage, which is the
        // previous stage's solution.
        const double e2 = result.stages.back().eps;
        for (int v = 0; v < sub.base_vertices; ++v) {
            result.primal_q[v] = (q[v] * prev_eps - prev_primal[v] * e2)
                               / (prev_eps - e2);
        }
    }
    return result;
}

} // namespace hcp
