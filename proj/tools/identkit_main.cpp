#include "identkit/census.hpp"
#include "identkit/cyclespace.hpp"
#include "identkit/graphprops.hpp"
#include "identkit/identcore.hpp"
#include "identkit/ioeq.hpp"
#include "identkit/transforms.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace identkit;
using json = nlohmann::ordered_json;

namespace {

constexpr const char *kVersion = "1.0.0";

struct Common {
    std::string model_path;
    std::string mode = "explicit";
    std::string leaks;
    std::uint64_t seed = kDefaultSeed;
    unsigned trials = kDefaultTrials;
    std::size_t cap = kDefaultEnumerationCap;
    std::string format = "text";
    unsigned jobs = 1;
    std::string out;
};

std::uint64_t default_seed() {
    if (const char *env = std::getenv("IDENTKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            std::cerr << "ignoring unparsable IDENTKIT_SEED '" << env << "'\n";
        }
    }
    return kDefaultSeed;
}

ValidatedModel load_with_leaks(const Common &c) {
    ValidatedModel model = load_model(c.model_path);
    if (c.leaks.empty()) {
        return model;
    }
    if (c.leaks == "all") {
        return with_all_leaks(model);
    }
    if (c.leaks == "none") {
        return with_leaks(model, {});
    }
    return with_leaks(model, parse_vertex_list(c.leaks));
}

// "3", "2..4" or "2,3,4"
std::vector<int> parse_range(const std::string &text) {
    std::vector<int> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        for (int v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
        return out;
    }
    for (Vertex v : parse_vertex_list(text)) {
        out.push_back(v);
    }
    return out;
}

void emit(const Common &c, const std::string &text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) {
        throw Error(ErrorCode::ParseError, "cannot write '" + c.out + "'");
    }
    f << text;
}

json vertices_json(const std::vector<Vertex> &vs) { return json(vs); }

int run_analyze(const Common &c) {
    const ValidatedModel model = load_with_leaks(c);
    const AnalysisReport report = classify_identifiability(model, parse_matrix_mode(c.mode), {c.seed, c.trials});
    emit(c, c.format == "json" ? report_to_json(report) + "\n" : report_to_text(report));
    return 0;
}

int run_ioeq(const Common &c) {
    const ValidatedModel model = load_with_leaks(c);
    const MatrixMode mode = parse_matrix_mode(c.mode);
    const CoefficientMap cmap = coefficient_map(model, mode);
    if (c.format != "json") {
        std::string text;
        for (Vertex j : model.outputs()) {
            text += render_equation(io_equation(model, j, mode)) + "\n";
        }
        text += std::to_string(cmap.size()) + " coefficients\n";
        emit(c, text);
        return 0;
    }
    json doc;
    doc["mode"] = std::string(to_string(mode));
    doc["equations"] = json::array();
    for (Vertex j : model.outputs()) {
        const IOEquation eq = io_equation(model, j, mode);
        json e;
        e["output"] = j;
        e["subgraph"] = vertices_json(eq.subgraph);
        e["lhs"] = json::array();
        for (const auto &p : eq.lhs) {
            e["lhs"].push_back(p.to_string());
        }
        e["rhs"] = json::object();
        for (const auto &[i, coeffs] : eq.rhs) {
            json list = json::array();
            for (const auto &p : coeffs) {
                list.push_back(p.to_string());
            }
            e["rhs"][std::to_string(i)] = list;
        }
        e["text"] = render_equation(eq);
        doc["equations"].push_back(e);
    }
    doc["coefficients"] = json::array();
    for (std::size_t k = 0; k < cmap.size(); ++k) {
        const auto &src = cmap.provenance[k];
        doc["coefficients"].push_back({{"poly", cmap.polys[k].to_string()},
                                       {"output", src.output},
                                       {"side", src.side == CoefficientSource::Side::Lhs ? "lhs" : "rhs"},
                                       {"input", src.input ? json(*src.input) : json(nullptr)},
                                       {"order", src.order}});
    }
    doc["minimality_warning"] = cmap.minimality_warning;
    const auto expected = expected_coefficient_count(model);
    doc["expected_coefficient_count"] = expected ? json(*expected) : json(nullptr);
    emit(c, doc.dump(2) + "\n");
    return 0;
}

int run_cyclespace(const Common &c) {
    const ValidatedModel model = load_with_leaks(c);
    const PathCycleBasis basis = path_cycle_basis(model, c.cap);
    const std::size_t bound = model.edge_count() + model.in_out_union_size();
    if (c.format != "json") {
        std::ostringstream os;
        for (std::size_t r = 0; r < basis.size(); ++r) {
            os << basis.monomial(r) << "\n";
        }
        os << "independent: " << basis.independent_count << " of " << basis.size() << " monomials"
           << " (|E| + |In u Out| = " << bound << ")\n";
        os << "incidence rank: " << incidence_rank(model) << "\n";
        emit(c, os.str());
        return 0;
    }
    json doc;
    std::size_t row = 0;
    doc["self_cycles"] = json::array();
    for (std::size_t k = 0; k < basis.self_cycles.size(); ++k) {
        doc["self_cycles"].push_back(basis.monomial(row++));
    }
    doc["cycles"] = json::array();
    for (const Cycle &cy : basis.cycles) {
        doc["cycles"].push_back({{"vertices", vertices_json(cy.vertices)}, {"monomial", basis.monomial(row++)}});
    }
    doc["io_paths"] = json::array();
    for (const Path &p : basis.io_paths) {
        doc["io_paths"].push_back({{"vertices", vertices_json(p.vertices)}, {"monomial", basis.monomial(row++)}});
    }
    doc["path_cycle_rank"] = basis.independent_count;
    doc["expected_dimension_bound"] = bound;
    doc["incidence_rank"] = incidence_rank(model);
    emit(c, doc.dump(2) + "\n");
    return 0;
}

json certificate_json(const Certificate &cert) {
    json hyps = json::array();
    for (const Hypothesis &h : cert.hypotheses) {
        hyps.push_back({{"description", h.description}, {"holds", h.holds}});
    }
    return {{"theorem", cert.theorem}, {"claim", cert.claim}, {"valid", cert.valid()}, {"hypotheses", hyps}};
}

void emit_model_result(const Common &c, const ValidatedModel &model, const std::vector<Certificate> &certs,
                       const std::optional<AnalysisReport> &report) {
    if (c.format == "json") {
        json doc;
        doc["model"] = json::parse(serialize_model(model));
        doc["certificates"] = json::array();
        for (const auto &cert : certs) {
            doc["certificates"].push_back(certificate_json(cert));
        }
        if (report) {
            doc["verdict"] = std::string(to_string(report->verdict));
            doc["jacobian_rank"] = report->jacobian_rank;
        }
        emit(c, doc.dump(2) + "\n");
        return;
    }
    std::string text = serialize_model(model) + "\n";
    for (const auto &cert : certs) {
        text += certificate_to_text(cert);
    }
    if (report) {
        text += "verdict: " + std::string(to_string(report->verdict)) + " (rank " +
                std::to_string(report->jacobian_rank) + " of " + std::to_string(report->param_count) + ")\n";
    }
    emit(c, text);
}

int run_transform(const Common &c, const std::string &keep, int add, const std::string &attach) {
    const ValidatedModel model = load_with_leaks(c);
    const RankOptions opts{c.seed, c.trials};
    const int chosen = (!keep.empty()) + (add > 0) + (!attach.empty());
    if (chosen != 1) {
        throw CLI::ValidationError("transform", "choose exactly one of --remove-leaks, --add-leak, --attach");
    }
    TransformResult r = [&] {
        if (!keep.empty()) {
            return remove_leaks(model, keep == "none" ? std::vector<Vertex>{} : parse_vertex_list(keep), opts);
        }
        if (add > 0) {
            return add_leak(model, add, opts);
        }
        const auto parts = parse_vertex_list(attach);
        if (parts.size() != 3) {
            throw CLI::ValidationError("--attach", "expects k,l,s");
        }
        return attach_path(model, parts[0], parts[1], parts[2], opts);
    }();
    emit_model_result(c, r.model, {r.checklist}, std::nullopt);
    return 0;
}

int run_construct(const Common &c, const std::string &script_path) {
    const ConstructionScript script = load_construction_script(script_path);
    const ConstructionResult r = run_construction(script, {c.seed, c.trials});
    const AnalysisReport report = classify_identifiability(r.model, MatrixMode::Explicit, {c.seed, c.trials});
    emit_model_result(c, r.model, r.certificates, report);
    return 0;
}

int run_census(const Common &c, const std::string &ns, const std::string &ms, const std::string &sidecar,
               const std::string &checkpoint_dir, bool progress) {
    CensusOptions opts;
    opts.seed = c.seed;
    opts.trials = c.trials;
    opts.jobs = c.jobs;
    opts.checkpoint_dir = checkpoint_dir;
    if (progress) {
        opts.progress = [](std::uint64_t done, std::uint64_t total) {
            std::cerr << "\r" << done << "/" << total << std::flush;
            if (done == total) {
                std::cerr << "\n";
            }
        };
    }
    const auto start = std::chrono::steady_clock::now();
    const auto rows = census_table(parse_range(ns), parse_range(ms), opts);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::uint64_t violations = 0;
    for (const auto &r : rows) {
        violations += r.bound_violations;
    }
    if (c.format == "json") {
        emit(c, census_sidecar_json(rows, opts, seconds) + "\n");
    } else {
        std::ostringstream os;
        write_census_csv(os, rows);
        emit(c, os.str());
    }
    if (!sidecar.empty()) {
        std::ofstream f(sidecar);
        f << census_sidecar_json(rows, opts, seconds) << "\n";
    }
    if (violations) {
        std::cerr << violations << " graphs exceeded the |E| + |In u Out| rank bound\n";
        return 1;
    }
    return 0;
}

void add_common(CLI::App *sub, Common &c, bool needs_model) {
    if (needs_model) {
        sub->add_option("--model", c.model_path, "model JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--leaks", c.leaks, "leak set: all, none, or a list like 1,2");
    }
    sub->add_option("--mode", c.mode, "matrix mode")->check(CLI::IsMember({"explicit", "diag"}));
    sub->add_option("--seed", c.seed, "random seed (default: IDENTKIT_SEED or built in)");
    sub->add_option("--trials", c.trials, "random evaluation points per rank")->check(CLI::Range(1u, 1000u));
    sub->add_option("--cap", c.cap, "cycle/path enumeration cap");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
    sub->add_option("--out", c.out, "write output to this file");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"identifiability analysis for linear compartmental models"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common c;
    c.seed = default_seed();

    auto *analyze = app.add_subcommand("analyze", "rank-based identifiability report");
    add_common(analyze, c, true);
    auto *ioeq = app.add_subcommand("ioeq", "input-output equations and coefficient map");
    add_common(ioeq, c, true);
    auto *cyc = app.add_subcommand("cyclespace", "path/cycle monomials and their rank");
    add_common(cyc, c, true);

    auto *transform = app.add_subcommand("transform", "leak removal/addition and path attachment");
    add_common(transform, c, true);
    std::string keep;
    int add = 0;
    std::string attach;
    transform->add_option("--remove-leaks", keep, "leaks to keep (list or none)");
    transform->add_option("--add-leak", add, "vertex that gets a new leak");
    transform->add_option("--attach", attach, "k,l,s: path of s new vertices from k to l");

    auto *construct = app.add_subcommand("construct", "run a construction script");
    add_common(construct, c, false);
    std::string script;
    construct->add_option("--script", script, "construction script JSON")->required()->check(CLI::ExistingFile);

    auto *census = app.add_subcommand("census", "count graphs with the expected dimension");
    add_common(census, c, false);
    std::string ns = "3";
    std::string ms = "2..4";
    std::string sidecar;
    std::string checkpoint_dir;
    bool progress = false;
    census->add_option("--n", ns, "vertex counts: 4, 3..4 or 3,4");
    census->add_option("--m", ms, "edge counts: 5, 2..4 or 2,3");
    census->add_option("--sidecar", sidecar, "JSON sidecar path");
    census->add_option("--checkpoint-dir", checkpoint_dir, "directory for resumable checkpoints");
    census->add_flag("--progress", progress, "print progress to stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::cerr << "identkit " << kVersion << " seed " << c.seed << "\n";
    try {
        if (*analyze) {
            return run_analyze(c);
        }
        if (*ioeq) {
            return run_ioeq(c);
        }
        if (*cyc) {
            return run_cyclespace(c);
        }
        if (*transform) {
            return run_transform(c, keep, add, attach);
        }
        if (*construct) {
            return run_construct(c, script);
        }
        if (*census) {
            return run_census(c, ns, ms, sidecar, checkpoint_dir, progress);
        }
    } catch (const CLI::ParseError &e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        if (c.format == "json") {
            std::cout << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
