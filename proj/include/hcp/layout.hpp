#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcp/disk_model.hpp"
#include "hcp/solver.hpp"

namespace hcp {

enum class layout_defect {
    CURVATURE_GATE,   // radii too far from a solution to develop
    NUMERIC_DRIFT,    // placed side lengths drifted from the prescribed shape
    NON_INTERSECTING, // a measured circle pair no longer overlaps
};

class layout_error : public std::runtime_error {
public:
    layout_error(layout_defect kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    layout_defect kind() const { return kind_; }

private:
    layout_defect kind_;
};

struct PlacedFace {
    std::array<Point, 3> z; // vertex positions in corner order
};

struct VertexCopy {
    int vertex = -1; // surface vertex this copy realizes
    Point z;
};

// A flattened copy of the pattern in the unit disk: one placement per face,
// glued along a canonical spanning tree of the face adjacency. Radii and
// prescribed weights travel along so measurements need no external state.
struct DevelopedPattern {
    std::vector<PlacedFace> faces;
    std::vector<std::array<int, 3>> face_vertices;
    std::vector<std::array<int, 3>> face_edges; // edge of the side at each corner
    std::vector<std::array<int, 3>> corner_copy;
    std::vector<VertexCopy> copies;
    std::vector<double> radius;     // hyperbolic disk radius per vertex
    std::vector<double> prescribed; // weight per edge

    int face_count() const { return static_cast<int>(faces.size()); }
    int edge_count() const { return static_cast<int>(prescribed.size()); }
};

namespace detail {

// Side lengths and inner angles of one face triangle; side[c] joins corners
// c and c+1, angle[c] sits at corner c.
struct FaceShape {
    std::array<double, 3> side{};
    std::array<double, 3> angle{};
};

inline FaceShape face_shape(const std::array<double, 3>& r,
                            const std::array<double, 3>& side_weight) {
    FaceShape shape;
    for (int c = 0; c < 3; ++c) {
        shape.side[c] = side_length(r[c], r[(c + 1) % 3], side_weight[c]);
    }
    const TriangleAngles ang =
        angles_from_sides(shape.side[1], shape.side[2], shape.side[0]);
    shape.angle = {ang.a_i, ang.a_j, ang.a_k};
    return shape;
}

inline std::vector<FaceShape> face_shapes(const Triangulation& tri,
                                          const std::vector<double>& radius,
                                          const WeightFunction& w) {
    std::vector<FaceShape> shapes;
    shapes.reserve(tri.cell_count());
    for (int f = 0; f < tri.cell_count(); ++f) {
        const auto face = tri.face(f);
        shapes.push_back(face_shape(
            {radius[face[0].vertex], radius[face[1].vertex], radius[face[2].vertex]},
            {w[face[0].edge], w[face[1].edge], w[face[2].edge]}));
    }
    return shapes;
}

// Places a face so its corner `anchor` lands on a and the following corner on
// b; the third corner goes to the counterclockwise side, matching the face
// orientation. a and b must already span the anchored side length.
inline std::array<Point, 3> place_from_side(const FaceShape& shape, int anchor,
                                            Point a, Point b) {
    const double dir = direction_toward(a, b);
    const int third = (anchor + 2) % 3;
    std::array<Point, 3> out;
    out[anchor] = a;
    out[(anchor + 1) % 3] = b;
    out[third] = point_toward(a, dir + shape.angle[anchor], shape.side[third]);
    return out;
}

struct CopyClasses {
    int count = 0;
    std::vector<int> label; // per corner id 3 * face + index
};

inline int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace detail

// Flattens the pattern into the disk: breadth first over the face adjacency
// from face 0, each new face placed across the shared edge of its BFS parent.
// The spanning tree never depends on seed_face; the seed only picks which face
// ends up in the canonical pose (first vertex at the origin, first edge along
// the positive real axis), so different seeds differ by one global isometry.
inline DevelopedPattern develop(const Triangulation& tri, const WeightFunction& w,
                                const RadiusVector& q, double gate = 1e-8,
                                int seed_face = 0) {
    detail::require_total_weights(tri.edge_count(), w);
    detail::require_radius_vector(tri.vertex_count(), q);
    if (seed_face < 0 || seed_face >= tri.cell_count()) {
        throw std::invalid_argument("seed face out of range");
    }
    const double residual = detail::max_abs(curvature(tri, w, q));
    if (!(residual <= gate)) {
        throw layout_error(layout_defect::CURVATURE_GATE,
                           "curvature residual " + std::to_string(residual)
                               + " exceeds the layout gate "
                               + std::to_string(gate));
    }

    const int nf = tri.cell_count();
    DevelopedPattern out;
    out.radius.resize(tri.vertex_count());
    for (int v = 0; v < tri.vertex_count(); ++v) out.radius[v] = r_of_q(q[v]);
    out.prescribed.assign(w.begin(), w.end());
    out.face_vertices.resize(nf);
    out.face_edges.resize(nf);
    for (int f = 0; f < nf; ++f) {
        const auto face = tri.face(f);
        for (int i = 0; i < 3; ++i) {
            out.face_vertices[f][i] = face[i].vertex;
            out.face_edges[f][i] = face[i].edge;
        }
    }
    const std::vector<detail::FaceShape> shapes =
        detail::face_shapes(tri, out.radius, w);

    out.faces.resize(nf);
    std::vector<char> placed(nf, 0);
    std::vector<Side> glued;
    glued.reserve(nf - 1);
    out.faces[0].z = detail::place_from_side(
        shapes[0], 0, Point(0.0, 0.0),
        Point(std::tanh(0.5 * shapes[0].side[0]), 0.0));
    placed[0] = 1;
    std::queue<int> pending;
    pending.push(0);
    while (!pending.empty()) {
        const int f = pending.front();
        pending.pop();
        for (int i = 0; i < 3; ++i) {
            const Side across = tri.twin(Side{f, i});
            const int g = across.cell;
            if (placed[g]) continue;
            // The shared edge runs a -> b in face f and b -> a in face g.
            const Point a = out.faces[f].z[i];
            const Point b = out.faces[f].z[(i + 1) % 3];
            out.faces[g].z = detail::place_from_side(shapes[g], across.index, b, a);
            placed[g] = 1;
            glued.push_back(Side{f, i});
            pending.push(g);
        }
    }

    // Corners glued along tree edges are the same vertex copy of the domain.
    std::vector<int> parent(3 * nf);
    std::iota(parent.begin(), parent.end(), 0);
    const auto unite = [&parent](int x, int y) {
        parent[detail::find_root(parent, x)] = detail::find_root(parent, y);
    };
    for (const Side s : glued) {
        const Side t = tri.twin(s);
        unite(3 * s.cell + s.index, 3 * t.cell + (t.index + 1) % 3);
        unite(3 * s.cell + (s.index + 1) % 3, 3 * t.cell + t.index);
    }
    out.corner_copy.resize(nf);
    std::vector<int> copy_of(3 * nf, -1);
    for (int f = 0; f < nf; ++f) {
        for (int i = 0; i < 3; ++i) {
            const int root = detail::find_root(parent, 3 * f + i);
            if (copy_of[root] < 0) {
                copy_of[root] = static_cast<int>(out.copies.size());
                out.copies.push_back({out.face_vertices[f][i], out.faces[f].z[i]});
            }
            out.corner_copy[f][i] = copy_of[root];
        }
    }

    // Normalize so the seed face sits in the canonical pose.
    const Point s0 = out.faces[seed_face].z[0];
    const Point s1 = out.faces[seed_face].z[1];
    const DiskIsometry shift = inverse(translation(s0));
    const DiskIsometry pose = compose(rotation(-std::arg(shift(s1))), shift);
    for (auto& face : out.faces) {
        for (auto& z : face.z) z = pose(z);
    }
    for (auto& copy : out.copies) copy.z = pose(copy.z);

    for (int f = 0; f < nf; ++f) {
        for (int c = 0; c < 3; ++c) {
            const double got =
                hyperbolic_distance(out.faces[f].z[c], out.faces[f].z[(c + 1) % 3]);
            if (!(std::abs(got - shapes[f].side[c]) <= 1e-6)) {
                throw layout_error(layout_defect::NUMERIC_DRIFT,
                                   "side length drift at face " + std::to_string(f));
            }
        }
    }
    return out;
}

// Exterior intersection angle of two placed circles, read off their centers
// and radii through the inversive distance. Values are clamped into [0, pi];
// callers that must reject disjoint pairs check the raw inversive distance.
inline double measured_exterior_angle(Point zv, double rv, Point zu, double ru) {
    const double inv = inversive_distance(hyperbolic_distance(zv, zu), rv, ru);
    return std::acos(std::clamp(inv, -1.0, 1.0));
}

// Per edge exterior angle realized by the development, measured on the first
// side of each edge. Circle pairs that fail to overlap beyond the tolerance
// band are a hard error: the pattern no longer realizes its contact graph.
inline std::vector<double> measure_edge_angles(const DevelopedPattern& pattern) {
    std::vector<double> measured(pattern.edge_count(),
                                 std::numeric_limits<double>::quiet_NaN());
    std::vector<char> done(pattern.edge_count(), 0);
    for (int f = 0; f < pattern.face_count(); ++f) {
        for (int i = 0; i < 3; ++i) {
            const int e = pattern.face_edges[f][i];
            if (done[e]) continue;
            done[e] = 1;
            const int v = pattern.face_vertices[f][i];
            const int u = pattern.face_vertices[f][(i + 1) % 3];
            const double d =
                hyperbolic_distance(pattern.faces[f].z[i], pattern.faces[f].z[(i + 1) % 3]);
            const double inv = inversive_distance(d, pattern.radius[v], pattern.radius[u]);
            if (std::abs(inv) > 1.0 + 1e-9) {
                throw layout_error(layout_defect::NON_INTERSECTING,
                                   "edge " + std::to_string(e)
                                       + ": circles do not intersect");
            }
            measured[e] = std::acos(std::clamp(inv, -1.0, 1.0));
        }
    }
    return measured;
}

// The four containment witnesses of the lens cut out by two overlapping
// disks: the two circle crossing points and the midpoint of each boundary
// arc. For tangent circles all four collapse onto the tangency point.
inline std::array<Point, 4> lens_witness_points(Point zv, double rv, Point zu,
                                                double ru) {
    const double d = hyperbolic_distance(zv, zu);
    const double toward_u = direction_toward(zv, zu);
    const double toward_v = direction_toward(zu, zv);
    // Angle at zv between the axis and a crossing point, by the cosine law in
    // the triangle with sides rv, ru, d.
    const double cos_spread = (std::cosh(rv) * std::cosh(d) - std::cosh(ru))
                            / (std::sinh(rv) * std::sinh(d));
    const double spread = std::acos(std::clamp(cos_spread, -1.0, 1.0));
    return {point_toward(zv, toward_u + spread, rv),
            point_toward(zv, toward_u - spread, rv),
            point_toward(zv, toward_u, rv),
            point_toward(zu, toward_v, ru)};
}

inline bool disk_contains(Point zw, double rw, Point p, double tol = 1e-10) {
    return hyperbolic_distance(zw, p) <= rw + tol;
}

inline bool lens_covered_by(Point zv, double rv, Point zu, double ru, Point zw,
                            double rw, double tol = 1e-10) {
    for (const Point p : lens_witness_points(zv, rv, zu, ru)) {
        if (!disk_contains(zw, rw, p, tol)) return false;
    }
    return true;
}

enum class ContactStatus { KEPT, COVERED };

inline const char* to_string(ContactStatus s) {
    return s == ContactStatus::KEPT ? "KEPT" : "COVERED";
}

// One covering disk found over the lens of an edge, together with the three
// measured angles of the witnessing triple and the slack in the containment
// inequality theta_i + theta_j >= theta_k + pi.
struct ContainmentIncident {
    int edge = -1;
    int witness = -1; // surface vertex of the covering disk
    double theta_i = 0.0; // angle between the first endpoint disk and the witness
    double theta_j = 0.0; // angle between the second endpoint disk and the witness
    double theta_k = 0.0; // angle of the edge pair itself
    double margin = 0.0;  // theta_i + theta_j - theta_k - pi
};

struct EdgeContact {
    int edge = -1;
    ContactStatus status = ContactStatus::KEPT;
    double measured = 0.0;
    double error = 0.0; // measured minus prescribed
};

struct PatternVerdict {
    std::vector<EdgeContact> edges;
    std::vector<ContainmentIncident> incidents;
    double max_angle_error = 0.0;
    bool all_kept = true;
};

namespace detail {

// Coherently re-places the star of one vertex, starting from the anchored
// global placement of the face holding `start`, and appends every corner
// position it passes. Walking by rotation keeps consecutive faces glued along
// the shared edge, so the collected copies live in one local chart even when
// the global domain cuts the star apart.
inline void collect_star(const Triangulation& tri,
                         const std::vector<FaceShape>& shapes,
                         const DevelopedPattern& pattern, Side start,
                         std::vector<VertexCopy>& found) {
    std::array<Point, 3> pos = pattern.faces[start.cell].z;
    Side s = start;
    const int deg = tri.degree(tri.corner(start).vertex);
    for (int n = 0; n < deg; ++n) {
        for (int c = 0; c < 3; ++c) {
            found.push_back({pattern.face_vertices[s.cell][c], pos[c]});
        }
        if (n + 1 == deg) break;
        const Side across = tri.twin(s);
        pos = place_from_side(shapes[across.cell], across.index,
                              pos[(s.index + 1) % 3], pos[s.index]);
        s = tri.next(across);
    }
}

} // namespace detail

// Checks every edge of the developed pattern for primitive contact: the lens
// of its two disks must not sit inside any third closed disk. Candidate third
// disks are the circles of the two incident faces and of the full vertex
// stars of both endpoints, re-developed locally around the edge so copies
// across the domain boundary participate at their true relative positions.
inline PatternVerdict verify_primitive_contact(const DevelopedPattern& pattern,
                                               const Triangulation& tri,
                                               const WeightFunction& w) {
    detail::require_total_weights(tri.edge_count(), w);
    if (pattern.face_count() != tri.cell_count()
        || pattern.edge_count() != tri.edge_count()) {
        throw std::invalid_argument("pattern does not match the triangulation");
    }
    const std::vector<detail::FaceShape> shapes =
        detail::face_shapes(tri, pattern.radius, w);

    PatternVerdict verdict;
    verdict.edges.reserve(tri.edge_count());
    std::vector<VertexCopy> found;
    for (int e = 0; e < tri.edge_count(); ++e) {
        const Side s0 = tri.edge_sides(e)[0];
        const int f = s0.cell;
        const int v = pattern.face_vertices[f][s0.index];
        const int u = pattern.face_vertices[f][(s0.index + 1) % 3];
        const Point zv = pattern.faces[f].z[s0.index];
        const Point zu = pattern.faces[f].z[(s0.index + 1) % 3];
        const double rv = pattern.radius[v];
        const double ru = pattern.radius[u];

        EdgeContact contact;
        contact.edge = e;
        contact.measured = measured_exterior_angle(zv, rv, zu, ru);
        contact.error = contact.measured - pattern.prescribed[e];
        verdict.max_angle_error =
            std::max(verdict.max_angle_error, std::abs(contact.error));

        found.clear();
        detail::collect_star(tri, shapes, pattern, s0, found);
        detail::collect_star(tri, shapes, pattern, Side{f, (s0.index + 1) % 3}, found);

        for (size_t i = 0; i < found.size(); ++i) {
            const VertexCopy& cand = found[i];
            // Skip the edge's own two disks and coinciding duplicates of
            // copies already tested; other copies of the same surface vertex
            // are genuine third disks.
            if (cand.vertex == v && std::abs(cand.z - zv) < 1e-9) continue;
            if (cand.vertex == u && std::abs(cand.z - zu) < 1e-9) continue;
            bool seen = false;
            for (size_t j = 0; j < i && !seen; ++j) {
                seen = found[j].vertex == cand.vertex
                    && std::abs(found[j].z - cand.z) < 1e-9;
            }
            if (seen) continue;
            const double rw = pattern.radius[cand.vertex];
            if (!lens_covered_by(zv, rv, zu, ru, cand.z, rw)) continue;
            ContainmentIncident incident;
            incident.edge = e;
            incident.witness = cand.vertex;
            incident.theta_i = measured_exterior_angle(zv, rv, cand.z, rw);
            incident.theta_j = measured_exterior_angle(zu, ru, cand.z, rw);
            incident.theta_k = contact.measured;
            incident.margin = incident.theta_i + incident.theta_j
                            - incident.theta_k - std::numbers::pi;
            verdict.incidents.push_back(incident);
            contact.status = ContactStatus::COVERED;
        }
        if (contact.status == ContactStatus::COVERED) verdict.all_kept = false;
        verdict.edges.push_back(contact);
    }
    return verdict;
}

struct SvgOptions {
    int size = 800;       // square canvas in pixels
    double margin = 20.0; // padding around the unit circle in pixels
};

namespace detail {

inline void appendf(std::string& out, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
}

// SVG path for the geodesic from z1 to z2: the arc of the circle through both
// points orthogonal to the unit circle, or a straight segment when the points
// are collinear with the origin.
inline void append_geodesic(std::string& out, Point z1, Point z2, double cx,
                            double cy, double scale) {
    const double x1 = cx + scale * z1.real(), y1 = cy - scale * z1.imag();
    const double x2 = cx + scale * z2.real(), y2 = cy - scale * z2.imag();
    const double cross = z1.real() * z2.imag() - z1.imag() * z2.real();
    if (std::abs(cross) < 1e-12) {
        detail::appendf(out, "<path d=\"M %.6f %.6f L %.6f %.6f\"/>\n", x1, y1, x2, y2);
        return;
    }
    // Orthogonality pins the arc center c: 2 Re(conj(z) c) = 1 + |z|^2 at both
    // endpoints, a 2x2 linear system.
    const double c1 = 1.0 + std::norm(z1), c2 = 1.0 + std::norm(z2);
    const double det = 4.0 * cross;
    const Point center((c1 * 2.0 * z2.imag() - c2 * 2.0 * z1.imag()) / det,
                       (2.0 * z1.real() * c2 - 2.0 * z2.real() * c1) / det);
    const double radius = std::sqrt(std::norm(center) - 1.0);
    const Point d1 = z1 - center, d2 = z2 - center;
    const double sweep_cross = d1.real() * d2.imag() - d1.imag() * d2.real();
    const int sweep = sweep_cross > 0.0 ? 0 : 1; // flipped by the y-down canvas
    detail::appendf(out, "<path d=\"M %.6f %.6f A %.6f %.6f 0 0 %d %.6f %.6f\"/>\n",
                    x1, y1, radius * scale, radius * scale, sweep, x2, y2);
}

} // namespace detail

// Renders the developed pattern: the unit circle, every placed face side as a
// geodesic arc, and one circle per placed vertex copy. Pure function of the
// pattern and options, so the bytes are reproducible.
inline std::string to_svg(const DevelopedPattern& pattern, SvgOptions options = {}) {
    if (options.size < 1) throw std::invalid_argument("svg size must be positive");
    const double cx = 0.5 * options.size;
    const double cy = 0.5 * options.size;
    const double scale = 0.5 * options.size - options.margin;
    if (!(scale > 0.0)) throw std::invalid_argument("svg margin leaves no canvas");

    std::string out;
    detail::appendf(out,
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\""
                    " height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                    options.size, options.size, options.size, options.size);
    detail::appendf(out,
                    "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\""
                    " fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
                    cx, cy, scale);
    out += "<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"0.6\">\n";
    for (const PlacedFace& face : pattern.faces) {
        for (int c = 0; c < 3; ++c) {
            detail::append_geodesic(out, face.z[c], face.z[(c + 1) % 3], cx, cy, scale);
        }
    }
    out += "</g>\n<g fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.8\">\n";
    for (const VertexCopy& copy : pattern.copies) {
        const EuclideanCircle circle =
            euclidean_circle(copy.z, pattern.radius[copy.vertex]);
        detail::appendf(out, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\"/>\n",
                        cx + scale * circle.center.real(),
                        cy - scale * circle.center.imag(), scale * circle.radius);
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace hcp
