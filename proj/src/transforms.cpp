#include "identkit/transforms.hpp"

#include "identkit/graphprops.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace identkit {

namespace {

bool subset(const std::vector<Vertex> &a, const std::vector<Vertex> &sorted_b) {
    return std::all_of(a.begin(), a.end(),
                       [&](Vertex v) { return std::binary_search(sorted_b.begin(), sorted_b.end(), v); });
}

TransformResult finish(ValidatedModel model, Certificate checklist) {
    TransformResult r{std::move(model), std::nullopt, checklist};
    if (checklist.valid()) {
        r.certificate = std::move(checklist);
    }
    return r;
}

std::size_t explicit_rank(const ValidatedModel &model, const RankOptions &opts) {
    return jacobian_rank(coefficient_map(model, MatrixMode::Explicit), model_seed(opts.seed, model), opts.trials);
}

TransformResult attach_path_impl(const ValidatedModel &model, Vertex k, Vertex l, int s,
                                 std::optional<bool> input_expected, const RankOptions &opts) {
    if (k < 1 || k > model.n() || l < 1 || l > model.n()) {
        throw Error(ErrorCode::AnchorMissing, "anchor " + std::to_string(k < 1 || k > model.n() ? k : l) +
                                                  " is not a vertex of the model");
    }
    if (s < 1) {
        throw Error(ErrorCode::PreconditionViolated, "a path needs at least one new vertex");
    }
    CompartmentalModel raw = model.raw();
    const int first = raw.n + 1;
    raw.n += s;
    raw.edges.push_back({k, first});
    for (int v = first; v < raw.n; ++v) {
        raw.edges.push_back({v, v + 1});
    }
    raw.edges.push_back({raw.n, l});
    for (int v = first; v <= raw.n; ++v) {
        raw.leaks.push_back(v);
    }
    ValidatedModel out = validate(std::move(raw));

    Certificate c{"attach-path", "the extended graph has the expected dimension", {}};
    const bool same_io = model.inputs().size() == 1 && model.outputs() == model.inputs();
    c.hypotheses.push_back({"In = Out = {i}", same_io});
    c.hypotheses.push_back({"Leak = V", model.all_leaks()});
    bool expected = false;
    if (input_expected) {
        expected = *input_expected;
    } else if (same_io && model.all_leaks()) {
        expected = expected_dimension_test(model, opts).holds;
    }
    c.hypotheses.push_back({"input model has the expected dimension", expected});
    return finish(std::move(out), std::move(c));
}

} // namespace

bool Certificate::valid() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis &h) { return h.holds; });
}

bool ConstructionResult::certified() const {
    return !certificates.empty() &&
           std::all_of(certificates.begin(), certificates.end(), [](const Certificate &c) { return c.valid(); });
}

TransformResult remove_leaks(const ValidatedModel &model, const std::vector<Vertex> &keep, const RankOptions &opts) {
    if (!subset(keep, model.leaks())) {
        throw Error(ErrorCode::KeepNotSubsetOfLeak, "leaks to keep must be current leaks");
    }
    ValidatedModel out = with_leaks(model, keep);

    Certificate c{"leak-removal",
                  "the reduced model has the expected dimension; with L = In u Out it is locally identifiable",
                  {}};
    const ValidatedModel full = with_all_leaks(model);
    const bool graph_ok = bound_hypotheses(full) == BoundHypotheses::Certified;
    c.hypotheses.push_back({"SIOC with |Out| = 1, or SC with |In| = 1", graph_ok});
    c.hypotheses.push_back({"Leak = V model is an identifiable path/cycle model",
                            graph_ok && expected_dimension_test(full, opts).holds});
    c.hypotheses.push_back({"In u Out is kept", subset(model.in_out_union(), out.leaks())});
    return finish(std::move(out), std::move(c));
}

TransformResult add_leak(const ValidatedModel &model, Vertex k, const RankOptions &opts) {
    if (k < 1 || k > model.n()) {
        throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(k) + " is outside the model");
    }
    if (model.is_leak(k)) {
        throw Error(ErrorCode::AlreadyLeak, "vertex " + std::to_string(k) + " already has a leak");
    }
    std::vector<Vertex> leaks = model.leaks();
    leaks.push_back(k);
    ValidatedModel out = with_leaks(model, leaks);

    const BoundHypotheses hyp = bound_hypotheses(model);
    Certificate c{hyp == BoundHypotheses::OutputConnectable ? "leak-addition (output connectable)" : "leak-addition",
                  "the model with the extra leak keeps the expected dimension",
                  {}};
    c.hypotheses.push_back({"|L| = |In u Out|", model.leaks().size() == model.in_out_union_size()});
    c.hypotheses.push_back({"SIOC with |Out| = 1, SC with |In| = 1, or output connectable with |Out| = 1",
                            hyp != BoundHypotheses::NotMet});
    const std::size_t bound = model.edge_count() + model.in_out_union_size();
    c.hypotheses.push_back({"model has the expected dimension",
                            hyp != BoundHypotheses::NotMet && explicit_rank(model, opts) == bound});
    return finish(std::move(out), std::move(c));
}

TransformResult attach_path(const ValidatedModel &model, Vertex k, Vertex l, int s, const RankOptions &opts) {
    return attach_path_impl(model, k, l, s, std::nullopt, opts);
}

ConstructionScript parse_construction_script(std::string_view json_text) {
    ConstructionScript script;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        if (!doc.is_object() || !doc.contains("steps") || !doc.contains("final_leak")) {
            throw Error(ErrorCode::ParseError, "a script needs \"steps\" and \"final_leak\"");
        }
        for (const auto &[key, value] : doc.items()) {
            if (key != "steps" && key != "final_leak") {
                throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
            }
        }
        for (const auto &step : doc.at("steps")) {
            if (!step.is_array() || step.size() != 3) {
                throw Error(ErrorCode::ParseError, "each step is [k, l, s]");
            }
            script.steps.push_back({step[0].get<int>(), step[1].get<int>(), step[2].get<int>()});
        }
        script.final_leak = doc.at("final_leak").get<int>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return script;
}

ConstructionScript load_construction_script(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open script file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_construction_script(buffer.str());
}

std::string serialize_construction_script(const ConstructionScript &script) {
    nlohmann::json doc;
    doc["steps"] = nlohmann::json::array();
    for (const PathStep &s : script.steps) {
        doc["steps"].push_back({s.from, s.to, s.count});
    }
    doc["final_leak"] = script.final_leak;
    return doc.dump();
}

ConstructionResult run_construction(const ConstructionScript &script, const RankOptions &opts) {
    ValidatedModel model = validate({1, {}, {1}, {1}, {1}});
    std::vector<Certificate> certs;
    // The lone vertex has c = (a11): rank 1 = |E| + 1.
    bool expected = true;
    for (const PathStep &step : script.steps) {
        TransformResult r = attach_path_impl(model, step.from, step.to, step.count, expected, opts);
        expected = r.checklist.valid();
        certs.push_back(r.checklist);
        model = std::move(r.model);
    }
    if (script.final_leak < 1 || script.final_leak > model.n()) {
        throw Error(ErrorCode::VertexOutOfRange,
                    "final leak " + std::to_string(script.final_leak) + " is not a vertex of the constructed graph");
    }
    model = with_leaks(model, {script.final_leak});

    Certificate last{"one-leak reduction", "the constructed model with one leak is locally identifiable", {}};
    last.hypotheses.push_back({"Leak = V graph is an identifiable cycle model", expected});
    last.hypotheses.push_back({"exactly one leak", model.leaks().size() == 1});
    certs.push_back(std::move(last));
    return {std::move(model), std::move(certs)};
}

std::string certificate_to_text(const Certificate &c) {
    std::ostringstream os;
    os << c.theorem << ": " << c.claim << (c.valid() ? "" : " [not established]") << "\n";
    for (const Hypothesis &h : c.hypotheses) {
        os << "  [" << (h.holds ? "x" : " ") << "] " << h.description << "\n";
    }
    return os.str();
}

} // namespace identkit
