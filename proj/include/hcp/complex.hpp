#pragma once

// Combinatorics of closed oriented surfaces given as cellular decompositions
// in delta-complex style: edges are first-class ids (multi-edges and loops
// are legal, as the one-vertex genus-2 octagon requires), cells are oriented
// cyclic lists of (vertex, edge) corners, and every query about adjacency
// goes through the side/twin/rotation structure built at validation time.

#include <algorithm>
#include <array>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcp {

// Corner m of a cell pairs the vertex v_m with the edge e_m that runs from
// v_m to v_{m+1} along the cell's counterclockwise boundary.
struct Corner {
    int vertex = -1;
    int edge = -1;
};

// One side of an edge: corner index `index` within cell `cell`.
struct Side {
    int cell = -1;
    int index = -1;
    friend bool operator==(const Side& a, const Side& b) {
        return a.cell == b.cell && a.index == b.index;
    }
};

// Raw complex as parsed from an input file, before any checking.
struct ComplexDescription {
    int vertices = 0;
    std::vector<std::array<int, 2>> edge_endpoints;
    std::vector<std::vector<Corner>> cells;
};

enum class complex_defect {
    non_manifold,   // edge incidences or vertex links fail to be surface-like
    non_orientable, // cell orientations disagree across an edge
    disconnected,
    genus_too_low,  // sphere or torus; only genus >= 2 is supported
};

class complex_error : public std::runtime_error {
public:
    complex_error(complex_defect kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    complex_defect kind() const noexcept { return kind_; }

private:
    complex_defect kind_;
};

class CellComplex {
public:
    int vertex_count() const { return vertices_; }
    int edge_count() const { return static_cast<int>(endpoints_.size()); }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    int genus() const { return genus_; }

    const std::array<int, 2>& edge_endpoints(int e) const { return endpoints_[e]; }
    const std::vector<Corner>& cell(int c) const { return cells_[c]; }
    int cell_size(int c) const { return static_cast<int>(cells_[c].size()); }
    const std::array<Side, 2>& edge_sides(int e) const { return edge_sides_[e]; }
    const std::vector<Side>& corners_at(int v) const { return vertex_corners_[v]; }
    int degree(int v) const { return static_cast<int>(vertex_corners_[v].size()); }

    const Corner& corner(Side s) const { return cells_[s.cell][s.index]; }
    Side next(Side s) const {
        return {s.cell, (s.index + 1) % cell_size(s.cell)};
    }
    Side prev(Side s) const {
        const int n = cell_size(s.cell);
        return {s.cell, (s.index + n - 1) % n};
    }
    Side twin(Side s) const {
        const auto& pair = edge_sides_[corner(s).edge];
        return pair[0] == s ? pair[1] : pair[0];
    }
    // Next corner around the origin vertex of s (constant turning sense
    // throughout the complex, so links are traversed as single cycles).
    Side rotation(Side s) const { return next(twin(s)); }

    friend CellComplex validate_cell_complex(const ComplexDescription& d);

protected:
    CellComplex() = default;

    int vertices_ = 0;
    int genus_ = 0;
    std::vector<std::array<int, 2>> endpoints_;
    std::vector<std::vector<Corner>> cells_;
    std::vector<std::array<Side, 2>> edge_sides_;
    std::vector<std::vector<Side>> vertex_corners_;
};

// Runs every surface check on the raw description: each edge must carry
// exactly two cell-sides, non-loop sides must traverse their edge in
// opposite directions, every vertex link must close into a single cycle,
// the whole complex must be connected, and the genus must be at least 2.
inline CellComplex validate_cell_complex(const ComplexDescription& d) {
    if (d.vertices <= 0 || d.cells.empty()) {
        throw complex_error(complex_defect::non_manifold, "complex is empty");
    }
    const int nv = d.vertices;
    const int ne = static_cast<int>(d.edge_endpoints.size());
    for (int e = 0; e < ne; ++e) {
        for (int v : d.edge_endpoints[e]) {
            if (v < 0 || v >= nv) {
                throw std::invalid_argument("edge " + std::to_string(e)
                                            + " has an endpoint out of range");
            }
        }
    }

    CellComplex cx;
    cx.vertices_ = nv;
    cx.endpoints_ = d.edge_endpoints;
    cx.cells_ = d.cells;
    cx.edge_sides_.assign(ne, {Side{}, Side{}});
    cx.vertex_corners_.assign(nv, {});

    std::vector<int> side_count(ne, 0);
    for (int c = 0; c < cx.cell_count(); ++c) {
        const auto& cell = cx.cells_[c];
        const int m = static_cast<int>(cell.size());
        if (m < 3) {
            throw std::invalid_argument("cell " + std::to_string(c)
                                        + " has fewer than three corners");
        }
        for (int i = 0; i < m; ++i) {
            const Corner& cr = cell[i];
            if (cr.vertex < 0 || cr.vertex >= nv) {
                throw std::invalid_argument("cell " + std::to_string(c)
                                            + " has a vertex out of range");
            }
            if (cr.edge < 0 || cr.edge >= ne) {
                throw complex_error(complex_defect::non_manifold,
                                    "cell " + std::to_string(c)
                                    + " references edge " + std::to_string(cr.edge)
                                    + " beyond the edge list");
            }
            const int from = cr.vertex;
            const int to = cell[(i + 1) % m].vertex;
            const auto& ends = cx.endpoints_[cr.edge];
            const bool match = (ends[0] == from && ends[1] == to)
                            || (ends[0] == to && ends[1] == from);
            if (!match) {
                throw complex_error(complex_defect::non_manifold,
                                    "edge " + std::to_string(cr.edge)
                                    + " endpoints do not match the corners of cell "
                                    + std::to_string(c));
            }
            if (side_count[cr.edge] < 2) {
                cx.edge_sides_[cr.edge][side_count[cr.edge]] = Side{c, i};
            }
            ++side_count[cr.edge];
            cx.vertex_corners_[from].push_back(Side{c, i});
        }
    }
    for (int e = 0; e < ne; ++e) {
        if (side_count[e] != 2) {
            throw complex_error(complex_defect::non_manifold,
                                "edge " + std::to_string(e) + " borders "
                                + std::to_string(side_count[e])
                                + " cell-sides instead of 2");
        }
    }

    // Orientability: the two sides of a non-loop edge must run in opposite
    // directions. Loop sides carry no direction information; they are glued
    // orientation-reversingly by convention, which this format cannot
    // express otherwise.
    for (int e = 0; e < ne; ++e) {
        const auto& ends = cx.endpoints_[e];
        if (ends[0] == ends[1]) continue;
        int starts_at_first = 0;
        for (const Side& s : cx.edge_sides_[e]) {
            if (cx.corner(s).vertex == ends[0]) ++starts_at_first;
        }
        if (starts_at_first != 1) {
            throw complex_error(complex_defect::non_orientable,
                                "both sides of edge " + std::to_string(e)
                                + " traverse it in the same direction");
        }
    }

    // Manifold vertex links: rotating around a vertex must visit all of its
    // corners in one cycle.
    for (int v = 0; v < nv; ++v) {
        const auto& corners = cx.vertex_corners_[v];
        if (corners.empty()) {
            throw complex_error(complex_defect::disconnected,
                                "vertex " + std::to_string(v)
                                + " is not incident to any cell");
        }
        const Side start = corners[0];
        Side s = start;
        int seen = 0;
        do {
            if (cx.corner(s).vertex != v) {
                throw complex_error(complex_defect::non_manifold,
                                    "link of vertex " + std::to_string(v)
                                    + " strays to another vertex");
            }
            s = cx.rotation(s);
            ++seen;
        } while (!(s == start) && seen <= static_cast<int>(corners.size()));
        if (seen != static_cast<int>(corners.size())) {
            throw complex_error(complex_defect::non_manifold,
                                "link of vertex " + std::to_string(v)
                                + " is not a single cycle");
        }
    }

    // Connectivity over the 1-skeleton; every vertex has a corner, and every
    // cell touches a vertex, so this covers the whole complex.
    std::vector<char> reached(nv, 0);
    std::queue<int> queue;
    queue.push(0);
    reached[0] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (const Side& s : cx.vertex_corners_[v]) {
            for (int end : {cx.corner(s).vertex, cx.corner(cx.next(s)).vertex}) {
                if (!reached[end]) {
                    reached[end] = 1;
                    queue.push(end);
                }
            }
        }
    }
    if (std::count(reached.begin(), reached.end(), char(1)) != nv) {
        throw complex_error(complex_defect::disconnected,
                            "complex is not connected");
    }

    const int chi = nv - ne + cx.cell_count();
    if (chi % 2 != 0) {
        throw complex_error(complex_defect::non_orientable,
                            "odd Euler characteristic");
    }
    cx.genus_ = (2 - chi) / 2;
    if (cx.genus_ < 2) {
        throw complex_error(complex_defect::genus_too_low,
                            "genus " + std::to_string(cx.genus_)
                            + " surface; only genus >= 2 is supported");
    }
    return cx;
}

// A validated complex all of whose cells are triangles.
class Triangulation : public CellComplex {
public:
    std::array<Corner, 3> face(int f) const {
        const auto& c = cell(f);
        return {c[0], c[1], c[2]};
    }

    friend Triangulation validate_triangulation(const ComplexDescription& d);

private:
    explicit Triangulation(CellComplex base) : CellComplex(std::move(base)) {}
};

inline Triangulation validate_triangulation(const ComplexDescription& d) {
    CellComplex cx = validate_cell_complex(d);
    for (int c = 0; c < cx.cell_count(); ++c) {
        if (cx.cell_size(c) != 3) {
            throw std::invalid_argument("cell " + std::to_string(c)
                                        + " is not a triangle");
        }
    }
    return Triangulation(std::move(cx));
}

// Star subdivision result. Primal ids are inherited unchanged; the star
// vertex of the c-th cell gets id (base vertices + c), and the star edge
// descending from it to the corner (c, m) gets id (base edges + offset of
// cell c + m). Face (offset of cell c + m) covers corner m of cell c.
struct SubdividedComplex {
    Triangulation triangulation;
    std::vector<int> primal_edges;
    std::vector<int> star_edges;
    std::vector<int> star_vertices;
    int base_vertices = 0;
    int base_edges = 0;
    int base_cells = 0;
};

// Adds a vertex inside every cell and cones it to the cell's corners, so an
// m-gon becomes m triangles. The result is validated like any other complex.
inline SubdividedComplex subdivide_cell_complex(const CellComplex& cx) {
    ComplexDescription d;
    d.vertices = cx.vertex_count() + cx.cell_count();
    d.edge_endpoints = {};
    d.edge_endpoints.reserve(cx.edge_count());
    for (int e = 0; e < cx.edge_count(); ++e) {
        d.edge_endpoints.push_back(cx.edge_endpoints(e));
    }

    std::vector<int> offset(cx.cell_count() + 1, 0);
    for (int c = 0; c < cx.cell_count(); ++c) {
        offset[c + 1] = offset[c] + cx.cell_size(c);
    }
    const int base_edges = cx.edge_count();
    d.edge_endpoints.resize(base_edges + offset.back());
    for (int c = 0; c < cx.cell_count(); ++c) {
        const int star = cx.vertex_count() + c;
        const int m = cx.cell_size(c);
        for (int i = 0; i < m; ++i) {
            d.edge_endpoints[base_edges + offset[c] + i] = {star, cx.cell(c)[i].vertex};
        }
        for (int i = 0; i < m; ++i) {
            const int down = base_edges + offset[c] + i;
            const int up = base_edges + offset[c] + (i + 1) % m;
            d.cells.push_back({Corner{star, down},
                               Corner{cx.cell(c)[i].vertex, cx.cell(c)[i].edge},
                               Corner{cx.cell(c)[(i + 1) % m].vertex, up}});
        }
    }

    SubdividedComplex out{validate_triangulation(d), {}, {}, {}, 0, 0, 0};
    out.base_vertices = cx.vertex_count();
    out.base_edges = base_edges;
    out.base_cells = cx.cell_count();
    for (int e = 0; e < base_edges; ++e) out.primal_edges.push_back(e);
    for (int e = base_edges; e < base_edges + offset.back(); ++e) {
        out.star_edges.push_back(e);
    }
    for (int c = 0; c < cx.cell_count(); ++c) {
        out.star_vertices.push_back(cx.vertex_count() + c);
    }
    return out;
}

// Boundary path of the closed neighborhood of a connected vertex set V0
// whose neighborhood is a disk. The boundary consists of the side opposite
// the marked corner of every face with exactly one corner in V0, listed by
// ascending face id and counted with multiplicity.
struct BlockingCurve {
    std::vector<int> vertex_set;
    std::vector<int> boundary_edges;
    int s = 0;
};

namespace detail {

// Classifies the closed neighborhood of the vertex set: it qualifies when
// the faces touching the set are edge-connected, the neighborhood has Euler
// characteristic 1, and no vertex of the neighborhood is pinched (its
// corners inside the neighborhood form one contiguous run of its link).
// Faces are graded by how many corners sit at marked vertices, so faces
// with repeated vertices are handled by incidence, not by vertex identity.
inline bool blocking_curve_of(const Triangulation& tri,
                              const std::vector<int>& vertex_set,
                              const std::vector<char>& marked,
                              BlockingCurve& out) {
    const int nf = tri.cell_count();
    std::vector<signed char> corners_in(nf, 0);
    std::vector<int> region_faces;
    for (int f = 0; f < nf; ++f) {
        signed char hits = 0;
        for (const Corner& c : tri.face(f)) {
            if (marked[c.vertex]) ++hits;
        }
        corners_in[f] = hits;
        if (hits > 0) region_faces.push_back(f);
    }
    if (region_faces.empty()) return false;

    // Edge-connectivity of the region faces.
    std::vector<char> face_seen(nf, 0);
    std::queue<int> queue;
    queue.push(region_faces[0]);
    face_seen[region_faces[0]] = 1;
    int reached = 0;
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop();
        ++reached;
        for (int i = 0; i < 3; ++i) {
            const int g = tri.twin(Side{f, i}).cell;
            if (corners_in[g] > 0 && !face_seen[g]) {
                face_seen[g] = 1;
                queue.push(g);
            }
        }
    }
    if (reached != static_cast<int>(region_faces.size())) return false;

    // Euler characteristic of the closed neighborhood.
    std::vector<char> edge_in(tri.edge_count(), 0), vertex_in(tri.vertex_count(), 0);
    for (int f : region_faces) {
        for (const Corner& c : tri.face(f)) {
            edge_in[c.edge] = 1;
            vertex_in[c.vertex] = 1;
        }
    }
    const long chi = std::count(vertex_in.begin(), vertex_in.end(), char(1))
                   - std::count(edge_in.begin(), edge_in.end(), char(1))
                   + static_cast<long>(region_faces.size());
    if (chi != 1) return false;

    // Pinched vertices: walk each neighborhood vertex's full link and count
    // the maximal runs of region corners. A vertex on the boundary has one
    // run, a vertex swallowed by the region has zero exits; two or more runs
    // mean the neighborhood touches itself there and is no disk.
    for (int v = 0; v < tri.vertex_count(); ++v) {
        if (!vertex_in[v] || marked[v]) continue;
        const Side start = tri.corners_at(v)[0];
        Side s = start;
        int runs = 0;
        do {
            const bool in_here = corners_in[s.cell] > 0;
            const bool in_next = corners_in[tri.rotation(s).cell] > 0;
            if (in_here && !in_next) ++runs;
            s = tri.rotation(s);
        } while (!(s == start));
        if (runs > 1) return false;
    }

    out.vertex_set = vertex_set;
    out.boundary_edges.clear();
    for (int f : region_faces) {
        if (corners_in[f] != 1) continue;
        for (int i = 0; i < 3; ++i) {
            if (marked[tri.face(f)[i].vertex]) {
                out.boundary_edges.push_back(tri.face(f)[(i + 1) % 3].edge);
                break;
            }
        }
    }
    out.s = static_cast<int>(out.boundary_edges.size());
    return true;
}

inline void grow_blocking_sets(const Triangulation& tri,
                               const std::vector<std::vector<int>>& neighbors,
                               int anchor, std::vector<int>& set,
                               std::vector<char>& marked,
                               std::vector<int> extension, int size_cap,
                               std::vector<BlockingCurve>& out) {
    BlockingCurve curve;
    if (blocking_curve_of(tri, set, marked, curve)) {
        out.push_back(std::move(curve));
    }
    if (static_cast<int>(set.size()) == size_cap) return;
    while (!extension.empty()) {
        const int u = extension.back();
        extension.pop_back();
        // Candidates opened up by u: neighbors beyond the anchor that are
        // new to both the set and its current neighborhood, so every
        // connected superset is generated exactly once.
        std::vector<int> next_extension = extension;
        for (int w : neighbors[u]) {
            if (w <= anchor || marked[w]) continue;
            bool fresh = true;
            for (int x : set) {
                if (std::find(neighbors[x].begin(), neighbors[x].end(), w)
                    != neighbors[x].end()) {
                    fresh = false;
                    break;
                }
            }
            if (fresh && std::find(next_extension.begin(), next_extension.end(), w)
                             == next_extension.end()) {
                next_extension.push_back(w);
            }
        }
        set.push_back(u);
        marked[u] = 1;
        grow_blocking_sets(tri, neighbors, anchor, set, marked,
                           std::move(next_extension), size_cap, out);
        marked[u] = 0;
        set.pop_back();
    }
}

} // namespace detail

// Emits every connected vertex set of size at most size_cap whose closed
// neighborhood is a disk, with its boundary path. Output is ordered
// lexicographically by the sorted vertex sets.
inline std::vector<BlockingCurve> enumerate_blocking_curves(const Triangulation& tri,
                                                            int size_cap) {
    if (size_cap < 1 || size_cap >= tri.vertex_count()) {
        throw std::invalid_argument("size cap must lie in [1, vertex count)");
    }
    std::vector<std::vector<int>> neighbors(tri.vertex_count());
    for (int e = 0; e < tri.edge_count(); ++e) {
        const auto& ends = tri.edge_endpoints(e);
        if (ends[0] == ends[1]) continue;
        for (int k = 0; k < 2; ++k) {
            auto& list = neighbors[ends[k]];
            if (std::find(list.begin(), list.end(), ends[1 - k]) == list.end()) {
                list.push_back(ends[1 - k]);
            }
        }
    }

    std::vector<BlockingCurve> out;
    std::vector<char> marked(tri.vertex_count(), 0);
    for (int v = 0; v < tri.vertex_count(); ++v) {
        std::vector<int> set = {v};
        std::vector<int> extension;
        for (int u : neighbors[v]) {
            if (u > v) extension.push_back(u);
        }
        marked[v] = 1;
        detail::grow_blocking_sets(tri, neighbors, v, set, marked,
                                   std::move(extension), size_cap, out);
        marked[v] = 0;
    }
    std::sort(out.begin(), out.end(),
              [](const BlockingCurve& a, const BlockingCurve& b) {
                  return a.vertex_set < b.vertex_set;
              });
    return out;
}

} // namespace hcp
