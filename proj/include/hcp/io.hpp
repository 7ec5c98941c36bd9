#pragma once

// JSON documents exchanged by the tools: surface descriptions with optional
// per-edge weights, and solution documents carrying per-vertex radii. The
// surface schema is strict: unknown fields are errors, edge ids must be
// dense, and every corner must reference declared vertices and edges.

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hcp/complex.hpp"

namespace hcp {

class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PatternInput {
    ComplexDescription description;
    bool triangulated = false;     // the document listed "faces", not "cells"
    bool has_weights = false;
    std::map<int, double> weights; // edge id -> exterior angle in radians
};

namespace detail {

inline void require_fields(const nlohmann::json& obj,
                           std::initializer_list<const char*> allowed,
                           const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw input_error("unknown field \"" + it.key() + "\" in " + where);
        }
    }
}

inline int parse_int(const nlohmann::json& value, const char* where) {
    if (!value.is_number_integer()) {
        throw input_error(std::string(where) + " must be an integer");
    }
    return value.get<int>();
}

inline std::vector<std::vector<Corner>> parse_corner_lists(const nlohmann::json& arr,
                                                           const char* where) {
    if (!arr.is_array() || arr.empty()) {
        throw input_error(std::string(where) + " must be a non-empty array");
    }
    std::vector<std::vector<Corner>> cells;
    cells.reserve(arr.size());
    for (const auto& cell : arr) {
        if (!cell.is_array() || cell.size() < 3) {
            throw input_error(std::string(where)
                              + " entries must be corner lists of length >= 3");
        }
        std::vector<Corner> corners;
        corners.reserve(cell.size());
        for (const auto& corner : cell) {
            if (!corner.is_array() || corner.size() != 2) {
                throw input_error(std::string(where)
                                  + " corners must be [vertex, edge] pairs");
            }
            corners.push_back({parse_int(corner[0], "corner vertex"),
                               parse_int(corner[1], "corner edge")});
        }
        cells.push_back(std::move(corners));
    }
    return cells;
}

} // namespace detail

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid JSON in " + path + ": " + e.what());
    }
}

inline PatternInput parse_pattern_input(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw input_error("document root must be an object");
    }
    detail::require_fields(doc, {"vertices", "edges", "faces", "cells", "weights"},
                           "document root");
    if (!doc.contains("vertices") || !doc.contains("edges")) {
        throw input_error("document requires \"vertices\" and \"edges\"");
    }
    if (doc.contains("faces") == doc.contains("cells")) {
        throw input_error("document requires exactly one of \"faces\" or \"cells\"");
    }

    PatternInput input;
    input.description.vertices = detail::parse_int(doc["vertices"], "\"vertices\"");
    if (input.description.vertices <= 0) {
        throw input_error("\"vertices\" must be positive");
    }

    const auto& edges = doc["edges"];
    if (!edges.is_array()) {
        throw input_error("\"edges\" must be an array");
    }
    const int ne = static_cast<int>(edges.size());
    input.description.edge_endpoints.assign(ne, {-1, -1});
    std::vector<char> id_seen(ne, 0);
    for (const auto& edge : edges) {
        if (!edge.is_object()) {
            throw input_error("edge entries must be objects");
        }
        detail::require_fields(edge, {"id", "endpoints"}, "edge entry");
        if (!edge.contains("id") || !edge.contains("endpoints")) {
            throw input_error("edge entries require \"id\" and \"endpoints\"");
        }
        const int id = detail::parse_int(edge["id"], "edge id");
        if (id < 0 || id >= ne || id_seen[id]) {
            throw input_error("edge ids must be 0.." + std::to_string(ne - 1)
                              + " without repeats");
        }
        id_seen[id] = 1;
        const auto& ends = edge["endpoints"];
        if (!ends.is_array() || ends.size() != 2) {
            throw input_error("edge endpoints must be a pair of vertex ids");
        }
        for (int k = 0; k < 2; ++k) {
            const int v = detail::parse_int(ends[k], "edge endpoint");
            if (v < 0 || v >= input.description.vertices) {
                throw input_error("edge " + std::to_string(id)
                                  + " endpoint out of range");
            }
            input.description.edge_endpoints[id][k] = v;
        }
    }

    input.triangulated = doc.contains("faces");
    const char* key = input.triangulated ? "faces" : "cells";
    input.description.cells = detail::parse_corner_lists(doc[key], key);
    for (const auto& cell : input.description.cells) {
        for (const Corner& c : cell) {
            if (c.vertex < 0 || c.vertex >= input.description.vertices) {
                throw input_error("corner vertex out of range");
            }
            if (c.edge < 0 || c.edge >= ne) {
                throw input_error("corner edge out of range");
            }
        }
    }

    if (doc.contains("weights")) {
        const auto& weights = doc["weights"];
        if (!weights.is_object()) {
            throw input_error("\"weights\" must map edge ids to radians");
        }
        input.has_weights = true;
        for (auto it = weights.begin(); it != weights.end(); ++it) {
            int id = -1;
            try {
                size_t used = 0;
                id = std::stoi(it.key(), &used);
                if (used != it.key().size()) id = -1;
            } catch (const std::exception&) {
                id = -1;
            }
            if (id < 0 || id >= ne) {
                throw input_error("weight key \"" + it.key()
                                  + "\" is not an edge id");
            }
            if (!it.value().is_number()) {
                throw input_error("weight of edge " + std::to_string(id)
                                  + " must be a number");
            }
            input.weights[id] = it.value().get<double>();
        }
    }
    return input;
}

inline PatternInput read_pattern_input(const std::string& path) {
    return parse_pattern_input(load_json(path));
}

// Extracts the per-vertex radii from a solution document written by the
// solve tool (field "radii": vertex id -> radius). Other fields of the
// document are ignored so any solve report can be fed back in.
inline std::map<int, double> read_radii(const std::string& path, int vertex_count) {
    const nlohmann::json doc = load_json(path);
    if (!doc.is_object() || !doc.contains("radii") || !doc["radii"].is_object()) {
        throw input_error("solution document requires a \"radii\" object");
    }
    std::map<int, double> radii;
    for (auto it = doc["radii"].begin(); it != doc["radii"].end(); ++it) {
        int id = -1;
        try {
            size_t used = 0;
            id = std::stoi(it.key(), &used);
            if (used != it.key().size()) id = -1;
        } catch (const std::exception&) {
            id = -1;
        }
        if (id < 0 || id >= vertex_count) {
            throw input_error("radius key \"" + it.key() + "\" is not a vertex id");
        }
        if (!it.value().is_number()) {
            throw input_error("radius of vertex " + std::to_string(id)
                              + " must be a number");
        }
        radii[id] = it.value().get<double>();
    }
    if (static_cast<int>(radii.size()) != vertex_count) {
        throw input_error("solution document must carry a radius per vertex");
    }
    return radii;
}

} // namespace hcp
