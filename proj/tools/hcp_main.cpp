// Command line front end: validates pattern documents, solves for radii,
// develops and renders solutions, runs the ideal-pattern pipeline, and
// self-checks the geometry kernel. Reports are JSON with a stable field
// order so identical inputs produce identical bytes.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcp/io.hpp"
#include "hcp/layout.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "hcp-report/1";

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string strategy = "newton";
    double tol = 1e-10;
    int size_cap = 6;
    std::vector<double> eps_schedule = {0.4, 0.2, 0.1, 0.05};
    std::string out_path;
    std::string svg_path;
    unsigned seed = 0;
};

// Exit codes by failure class.
enum ExitCode {
    EXIT_OK = 0,
    EXIT_INTERNAL = 1,
    EXIT_PARSE = 2,
    EXIT_VALIDATION = 3,
    EXIT_CONVERGENCE = 4,
    EXIT_VERIFICATION = 5,
};

json document_of(const hcp::PatternInput& input) {
    json doc;
    doc["vertices"] = input.description.vertices;
    json edges = json::array();
    for (size_t e = 0; e < input.description.edge_endpoints.size(); ++e) {
        const auto& ends = input.description.edge_endpoints[e];
        edges.push_back({{"id", static_cast<int>(e)},
                         {"endpoints", {ends[0], ends[1]}}});
    }
    doc["edges"] = std::move(edges);
    json cells = json::array();
    for (const auto& cell : input.description.cells) {
        json corners = json::array();
        for (const hcp::Corner& c : cell) corners.push_back({c.vertex, c.edge});
        cells.push_back(std::move(corners));
    }
    doc[input.triangulated ? "faces" : "cells"] = std::move(cells);
    if (input.has_weights) {
        json weights;
        for (const auto& [edge, value] : input.weights) {
            weights[std::to_string(edge)] = value;
        }
        doc["weights"] = std::move(weights);
    }
    return doc;
}

json condition_json(const hcp::ConditionReport& report) {
    json out;
    out["condition"] = report.condition;
    out["status"] = hcp::to_string(report.status);
    if (report.size_cap > 0) out["size_cap"] = report.size_cap;
    if (!report.note.empty()) out["note"] = report.note;
    json witnesses = json::array();
    for (const auto& w : report.witnesses) {
        witnesses.push_back({{"label", w.label}, {"edges", w.edges},
                             {"margin", w.margin}});
    }
    out["witnesses"] = std::move(witnesses);
    return out;
}

json solve_json(const hcp::SolveResult& result, double tol) {
    json out;
    out["strategy"] = result.strategy;
    out["status"] = hcp::to_string(result.status);
    out["tol"] = tol;
    out["iterations"] = result.iterations;
    out["residual"] = result.residual;
    if (result.strategy == "continuation") out["t_reached"] = result.t_reached;
    out["q"] = result.q;
    json radii = json::array();
    for (double q : result.q) radii.push_back(hcp::r_of_q(q));
    out["radii_by_vertex"] = std::move(radii);
    return out;
}

json radii_map(const hcp::RadiusVector& q) {
    json out;
    for (size_t v = 0; v < q.size(); ++v) {
        out[std::to_string(v)] = hcp::r_of_q(q[v]);
    }
    return out;
}

json verdict_json(const hcp::PatternVerdict& verdict) {
    json out;
    out["all_kept"] = verdict.all_kept;
    out["max_angle_error"] = verdict.max_angle_error;
    json edges = json::array();
    for (const auto& contact : verdict.edges) {
        edges.push_back({{"edge", contact.edge},
                         {"status", hcp::to_string(contact.status)},
                         {"measured", contact.measured},
                         {"error", contact.error}});
    }
    out["edges"] = std::move(edges);
    json incidents = json::array();
    for (const auto& inc : verdict.incidents) {
        incidents.push_back({{"edge", inc.edge},
                             {"witness", inc.witness},
                             {"theta_i", inc.theta_i},
                             {"theta_j", inc.theta_j},
                             {"theta_k", inc.theta_k},
                             {"margin", inc.margin}});
    }
    out["incidents"] = std::move(incidents);
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) {
        throw std::runtime_error("cannot write " + path);
    }
}

void emit_report(const RunConfig& config, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (config.out_path.empty()) {
        std::cout << text;
    } else {
        write_text(config.out_path, text);
    }
}

json base_report(const RunConfig& config, const hcp::PatternInput& input) {
    json report;
    report["schema"] = kSchema;
    report["command"] = config.command;
    report["seed"] = config.seed;
    report["input"] = document_of(input);
    return report;
}

hcp::SolveResult dispatch_solve(const RunConfig& config, const hcp::Triangulation& tri,
                                const hcp::WeightFunction& w) {
    const auto q0 = hcp::default_radius_vector(tri.vertex_count());
    if (config.strategy == "newton") {
        return hcp::newton_solve(tri, w, q0, config.tol);
    }
    if (config.strategy == "flow") {
        return hcp::ricci_flow(tri, w, q0, {}, config.tol);
    }
    return hcp::continuation_solve(tri, w, 11, config.tol);
}

int run_validate(const RunConfig& config, const hcp::PatternInput& input) {
    json report = base_report(config, input);
    json conditions = json::array();
    bool pass = true;

    if (!input.has_weights) {
        // Structure only: reaching this point means the complex validated.
        if (input.triangulated) {
            hcp::validate_triangulation(input.description);
        } else {
            hcp::validate_cell_complex(input.description);
        }
        report["note"] = "no weights in the document; structural checks only";
    } else if (input.triangulated) {
        const auto tri = hcp::validate_triangulation(input.description);
        const auto w = hcp::make_weight_function(tri, input.weights);
        const auto c1 = hcp::check_C1(tri, w);
        const auto c2 = hcp::check_C2(tri, w, config.size_cap);
        auto c3 = hcp::check_C3(tri, w);
        auto r1 = hcp::check_R1(tri, w);
        // Only the face and curve bounds decide solvability, so only they
        // drive the exit code. The edge-pair bound underwrites the primitive
        // contact conclusion and the coefficient bound the rigidity theory;
        // both stay in the report.
        const auto annotate = [](hcp::ConditionReport& r, const char* note) {
            r.note = r.note.empty() ? note : r.note + "; " + note;
        };
        annotate(c3, "informational: needed for primitive contact, not existence");
        annotate(r1, "informational: not required for existence");
        for (const auto& c : {c1, c2, c3, r1}) conditions.push_back(condition_json(c));
        pass = c1.status == hcp::ConditionStatus::PASS
            && c2.status == hcp::ConditionStatus::PASS;
    } else {
        const auto cx = hcp::validate_cell_complex(input.description);
        const auto w = hcp::make_weight_function(cx, input.weights);
        const auto ideal = hcp::check_ideal_conditions(cx, w, config.size_cap);
        conditions.push_back(condition_json(ideal));
        pass = ideal.status == hcp::ConditionStatus::PASS;
    }
    report["conditions"] = std::move(conditions);
    emit_report(config, report);
    return pass ? EXIT_OK : EXIT_VALIDATION;
}

int run_solve(const RunConfig& config, const hcp::PatternInput& input) {
    if (!input.triangulated) {
        throw std::invalid_argument("solve needs a triangulated document; "
                                    "use the ideal command for polygonal cells");
    }
    if (!input.has_weights) {
        throw std::invalid_argument("solve needs per-edge weights");
    }
    const auto tri = hcp::validate_triangulation(input.description);
    const auto w = hcp::make_weight_function(tri, input.weights);
    const auto result = dispatch_solve(config, tri, w);

    json report = base_report(config, input);
    report["solve"] = solve_json(result, config.tol);
    report["radii"] = radii_map(result.q);
    emit_report(config, report);
    return result.status == hcp::SolveStatus::CONVERGED ? EXIT_OK : EXIT_CONVERGENCE;
}

int run_develop(const RunConfig& config, const hcp::PatternInput& input,
                const json* fed_report) {
    if (!input.triangulated) {
        throw std::invalid_argument("develop needs a triangulated document");
    }
    if (!input.has_weights) {
        throw std::invalid_argument("develop needs per-edge weights");
    }
    const auto tri = hcp::validate_triangulation(input.description);
    const auto w = hcp::make_weight_function(tri, input.weights);

    json report = base_report(config, input);
    hcp::RadiusVector q;
    if (fed_report != nullptr) {
        // Reuse the solved coordinates verbatim so the fed pipeline matches
        // the combined invocation bit for bit.
        const auto& solve = fed_report->at("solve");
        q = solve.at("q").get<hcp::RadiusVector>();
        if (static_cast<int>(q.size()) != tri.vertex_count()) {
            throw hcp::input_error("report radii do not cover the vertex set");
        }
        report["solve"] = solve;
    } else {
        const auto result = dispatch_solve(config, tri, w);
        report["solve"] = solve_json(result, config.tol);
        if (result.status != hcp::SolveStatus::CONVERGED) {
            emit_report(config, report);
            return EXIT_CONVERGENCE;
        }
        q = result.q;
    }

    const auto pattern = hcp::develop(tri, w, q);
    const auto verdict = hcp::verify_primitive_contact(pattern, tri, w);
    report["radii"] = radii_map(q);
    report["verdict"] = verdict_json(verdict);
    emit_report(config, report);
    if (!config.svg_path.empty()) {
        write_text(config.svg_path, hcp::to_svg(pattern));
    }
    return verdict.all_kept ? EXIT_OK : EXIT_VERIFICATION;
}

int run_ideal(const RunConfig& config, const hcp::PatternInput& input) {
    if (!input.has_weights) {
        throw std::invalid_argument("ideal needs per-edge weights");
    }
    const auto cx = hcp::validate_cell_complex(input.description);
    const auto w = hcp::make_weight_function(cx, input.weights);
    const auto result = hcp::ideal_solve(cx, w, config.eps_schedule, config.tol);

    json report = base_report(config, input);
    json ideal;
    ideal["status"] = hcp::to_string(result.status);
    ideal["eps_schedule"] = config.eps_schedule;
    json stages = json::array();
    for (const auto& stage : result.stages) {
        stages.push_back({{"eps", stage.eps},
                          {"iterations", stage.iterations},
                          {"residual", stage.residual},
                          {"max_star_radius", stage.max_star_radius},
                          {"star_radii", stage.star_radii}});
    }
    ideal["stages"] = std::move(stages);
    const bool converged = result.status == hcp::SolveStatus::CONVERGED;
    if (converged) {
        json primal;
        for (size_t v = 0; v < result.primal_q.size(); ++v) {
            primal[std::to_string(v)] = hcp::r_of_q(result.primal_q[v]);
        }
        ideal["primal_radii"] = std::move(primal);
    }
    report["ideal"] = std::move(ideal);
    emit_report(config, report);

    if (converged && !config.svg_path.empty()) {
        const auto sub = hcp::subdivide_cell_complex(cx);
        const auto wsub = hcp::subdivided_weights(sub, w, config.eps_schedule.back());
        const auto pattern = hcp::develop(sub.triangulation, wsub, result.last_q);
        write_text(config.svg_path, hcp::to_svg(pattern));
    }
    return converged ? EXIT_OK : EXIT_CONVERGENCE;
}

// Desk-scale property sweep over the geometry kernel: configuration
// existence, derivative symmetry against finite differences, and the
// two-circle limit laws. Prints one line per suite.
int run_selfcheck(const RunConfig& config) {
    std::mt19937_64 gen(config.seed);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi - 1e-9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto sample_angles = [&]() {
        while (true) {
            hcp::Triple t = {angle(gen), angle(gen), angle(gen)};
            if (hcp::check_angle_triple(t).admissible) return t;
        }
    };
    const auto sample_radii = [&](double lo, double hi) {
        hcp::Triple r;
        for (double& value : r) {
            value = lo * std::exp(unit(gen) * std::log(hi / lo));
        }
        return r;
    };

    struct Suite {
        std::string name;
        bool pass = true;
        double worst = 0.0;
    };
    std::vector<Suite> suites;

    Suite existence{"three-circle existence"};
    Suite symmetry{"derivative symmetry"};
    Suite fd{"finite-difference agreement"};
    for (int i = 0; i < 500; ++i) {
        const hcp::Triple t = sample_angles();
        const hcp::Triple r = sample_radii(0.3, 3.0);
        const auto cfg = hcp::three_circle_config(r, t);
        double sum = 0.0;
        for (int a = 0; a < 3; ++a) {
            existence.pass = existence.pass && cfg.inner[a] > 0.0
                          && cfg.inner[a] < std::numbers::pi && cfg.l[a] > 0.0
                          && std::isfinite(cfg.l[a]);
            sum += cfg.inner[a];
        }
        existence.pass = existence.pass && sum < std::numbers::pi;

        const Eigen::Matrix3d jac = hcp::angle_jacobian(r, t);
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                const double scale = std::max(
                    {std::abs(jac(a, b)), std::abs(jac(b, a)), 1e-300});
                symmetry.worst = std::max(
                    symmetry.worst, std::abs(jac(a, b) - jac(b, a)) / scale);
            }
        }

        hcp::Triple q;
        for (int a = 0; a < 3; ++a) q[a] = hcp::q_of_r(r[a]);
        const double h = 1e-6;
        for (int b = 0; b < 3; ++b) {
            hcp::Triple rp = r, rm = r;
            rp[b] = hcp::r_of_q(q[b] + h);
            rm[b] = hcp::r_of_q(q[b] - h);
            const auto cp = hcp::three_circle_config(rp, t);
            const auto cm = hcp::three_circle_config(rm, t);
            for (int a = 0; a < 3; ++a) {
                const double slope = (cp.inner[a] - cm.inner[a]) / (2.0 * h);
                fd.worst = std::max(fd.worst, std::abs(slope - jac(a, b)));
            }
        }
    }
    symmetry.pass = symmetry.worst < 1e-10;
    fd.pass = fd.worst < 1e-6;
    suites.push_back(existence);
    suites.push_back(symmetry);
    suites.push_back(fd);

    Suite limits{"three-circle limit laws"};
    for (int i = 0; i < 200; ++i) {
        // The finite-radius gap of the vanishing law scales like the radius
        // divided by the opposite weight, so keep that weight off zero.
        hcp::Triple t = sample_angles();
        while (t[0] < 0.1) t = sample_angles();
        const hcp::Triple r = sample_radii(0.5, 1.5);
        const auto huge = hcp::three_circle_config({30.0, r[1], r[2]}, t);
        limits.pass = limits.pass && huge.inner[0] < 1e-10;
        limits.worst = std::max(limits.worst, huge.inner[0]);
        const auto tiny = hcp::three_circle_config({1e-8, r[1], r[2]}, t);
        const double gap = std::abs(tiny.inner[0] - (std::numbers::pi - t[0]));
        limits.pass = limits.pass && gap < 1e-6;
        limits.worst = std::max(limits.worst, gap);
        const auto pair = hcp::three_circle_config({1e-8, 1e-8, r[2]}, t);
        const double pair_gap =
            std::abs(pair.inner[0] + pair.inner[1] - std::numbers::pi);
        limits.pass = limits.pass && pair_gap < 1e-5;
        limits.worst = std::max(limits.worst, pair_gap);
    }
    suites.push_back(limits);

    json report;
    report["schema"] = kSchema;
    report["command"] = "selfcheck";
    report["seed"] = config.seed;
    json checks = json::array();
    bool all = true;
    for (const Suite& suite : suites) {
        std::cout << (suite.pass ? "PASS " : "FAIL ") << suite.name
                  << " (worst " << suite.worst << ")\n";
        checks.push_back({{"name", suite.name},
                          {"status", suite.pass ? "PASS" : "FAIL"},
                          {"worst", suite.worst}});
        all = all && suite.pass;
    }
    report["checks"] = std::move(checks);
    if (!config.out_path.empty()) {
        write_text(config.out_path, report.dump(2) + "\n");
    }
    return all ? EXIT_OK : EXIT_VERIFICATION;
}

int run(const RunConfig& config) {
    if (config.command == "selfcheck") {
        return run_selfcheck(config);
    }
    if (config.input_path.empty()) {
        throw CLI::ValidationError("--input is required for " + config.command);
    }
    // Parsed into the order-preserving document type so report sections can
    // be copied back out byte for byte.
    std::ifstream in(config.input_path);
    if (!in) {
        throw hcp::input_error("cannot open " + config.input_path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw hcp::input_error("invalid JSON in " + config.input_path + ": "
                               + e.what());
    }

    // A report written by solve or develop can be fed back in; the embedded
    // input document and solved coordinates are reused as-is.
    json fed;
    const json* fed_ptr = nullptr;
    hcp::PatternInput input;
    if (doc.is_object() && doc.contains("schema")) {
        if (doc["schema"] != kSchema) {
            throw hcp::input_error("unsupported report schema in "
                                   + config.input_path);
        }
        if (!doc.contains("input")) {
            throw hcp::input_error("report carries no input document");
        }
        input = hcp::parse_pattern_input(nlohmann::json(doc["input"]));
        if (doc.contains("solve") && doc["solve"].contains("q")) {
            fed = doc;
            fed_ptr = &fed;
        }
    } else {
        input = hcp::parse_pattern_input(nlohmann::json(doc));
    }

    if (config.command == "validate") return run_validate(config, input);
    if (config.command == "solve") return run_solve(config, input);
    if (config.command == "develop") return run_develop(config, input, fed_ptr);
    return run_ideal(config, input);
}

} // namespace

int main(int argc, char** argv) {
    RunConfig config;
    CLI::App app{"hyperbolic circle pattern tools"};
    app.add_option("--command", config.command, "validate | solve | develop | ideal | selfcheck")
        ->required()
        ->check(CLI::IsMember({"validate", "solve", "develop", "ideal", "selfcheck"}));
    app.add_option("--input", config.input_path, "pattern document or report to feed back");
    app.add_option("--strategy", config.strategy, "solver strategy")
        ->check(CLI::IsMember({"newton", "flow", "continuation"}));
    app.add_option("--tol", config.tol, "curvature tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--size-cap", config.size_cap, "curve enumeration cap")
        ->check(CLI::PositiveNumber);
    app.add_option("--eps-schedule", config.eps_schedule,
                   "decreasing incidence angles for ideal")
        ->delimiter(',');
    app.add_option("--out", config.out_path, "report path (stdout when omitted)");
    app.add_option("--svg", config.svg_path, "render path for develop and ideal");
    app.add_option("--seed", config.seed, "random seed, recorded in reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? EXIT_OK : EXIT_PARSE;
    }

    try {
        return run(config);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARSE;
    } catch (const hcp::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARSE;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARSE;
    } catch (const hcp::complex_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VALIDATION;
    } catch (const hcp::layout_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == hcp::layout_defect::CURVATURE_GATE ? EXIT_VALIDATION
                                                              : EXIT_VERIFICATION;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VALIDATION;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VALIDATION;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INTERNAL;
    }
}
