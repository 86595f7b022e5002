#include "identkit/model.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace identkit {

namespace {

void normalize_set(std::vector<Vertex> &vs, int n, const char *what) {
    for (Vertex v : vs) {
        if (v < 1 || v > n) {
            throw Error(ErrorCode::VertexOutOfRange,
                        std::string(what) + " vertex " + std::to_string(v) + " is outside 1.." + std::to_string(n));
        }
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

bool contains(const std::vector<Vertex> &sorted, Vertex v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

} // namespace

ValidatedModel validate(CompartmentalModel raw) {
    if (raw.n < 1) {
        throw Error(ErrorCode::VertexOutOfRange, "a model needs at least one compartment");
    }
    for (const Edge &e : raw.edges) {
        if (e.src == e.dst) {
            throw Error(ErrorCode::SelfLoop, "self-loop at vertex " + std::to_string(e.src));
        }
        if (e.src < 1 || e.src > raw.n || e.dst < 1 || e.dst > raw.n) {
            throw Error(ErrorCode::VertexOutOfRange,
                        "edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " leaves 1.." +
                            std::to_string(raw.n));
        }
    }
    std::sort(raw.edges.begin(), raw.edges.end());
    if (auto dup = std::adjacent_find(raw.edges.begin(), raw.edges.end()); dup != raw.edges.end()) {
        throw Error(ErrorCode::DuplicateEdge,
                    "edge " + std::to_string(dup->src) + "->" + std::to_string(dup->dst) + " listed twice");
    }
    normalize_set(raw.inputs, raw.n, "input");
    normalize_set(raw.outputs, raw.n, "output");
    normalize_set(raw.leaks, raw.n, "leak");
    if (raw.inputs.empty()) {
        throw Error(ErrorCode::EmptyInputSet, "the input set is empty");
    }
    if (raw.outputs.empty()) {
        throw Error(ErrorCode::EmptyOutputSet, "the output set is empty");
    }
    return ValidatedModel(std::move(raw));
}

bool ValidatedModel::has_edge(Vertex src, Vertex dst) const {
    return std::binary_search(raw_.edges.begin(), raw_.edges.end(), Edge{src, dst});
}

bool ValidatedModel::is_input(Vertex v) const { return contains(raw_.inputs, v); }
bool ValidatedModel::is_output(Vertex v) const { return contains(raw_.outputs, v); }
bool ValidatedModel::is_leak(Vertex v) const { return contains(raw_.leaks, v); }

std::vector<Vertex> ValidatedModel::in_out_union() const {
    std::vector<Vertex> u;
    std::set_union(raw_.inputs.begin(), raw_.inputs.end(), raw_.outputs.begin(), raw_.outputs.end(),
                   std::back_inserter(u));
    return u;
}

std::size_t ValidatedModel::in_out_union_size() const { return in_out_union().size(); }

bool ValidatedModel::operator==(const ValidatedModel &o) const {
    return raw_.n == o.raw_.n && raw_.edges == o.raw_.edges && raw_.inputs == o.raw_.inputs &&
           raw_.outputs == o.raw_.outputs && raw_.leaks == o.raw_.leaks;
}

ValidatedModel with_leaks(const ValidatedModel &model, std::vector<Vertex> leaks) {
    CompartmentalModel raw = model.raw();
    raw.leaks = std::move(leaks);
    return validate(std::move(raw));
}

ValidatedModel with_all_leaks(const ValidatedModel &model) {
    std::vector<Vertex> all(static_cast<std::size_t>(model.n()));
    for (int v = 1; v <= model.n(); ++v) {
        all[static_cast<std::size_t>(v - 1)] = v;
    }
    return with_leaks(model, std::move(all));
}

std::string_view to_string(MatrixMode mode) {
    return mode == MatrixMode::Explicit ? "explicit" : "diag";
}

MatrixMode parse_matrix_mode(std::string_view text) {
    if (text == "explicit") {
        return MatrixMode::Explicit;
    }
    if (text == "diag" || text == "diagonal-generic") {
        return MatrixMode::DiagonalGeneric;
    }
    throw Error(ErrorCode::ParseError, "unknown matrix mode '" + std::string(text) + "'");
}

std::vector<Param> model_parameters(const ValidatedModel &model, MatrixMode mode) {
    if (mode == MatrixMode::DiagonalGeneric && !model.all_leaks()) {
        throw Error(ErrorCode::ModeRequiresFullLeaks, "diagonal-generic mode needs a leak in every compartment");
    }
    std::vector<Param> params;
    params.reserve(model.edge_count() + static_cast<std::size_t>(model.n()));
    for (const Edge &e : model.edges()) {
        params.push_back(e.param());
    }
    std::sort(params.begin(), params.end(),
              [](const Param &a, const Param &b) { return std::pair(a.row, a.col) < std::pair(b.row, b.col); });
    if (mode == MatrixMode::Explicit) {
        for (Vertex v : model.leaks()) {
            params.push_back(Param::leak(v));
        }
    } else {
        for (Vertex v = 1; v <= model.n(); ++v) {
            params.push_back(Param::diag(v));
        }
    }
    return params;
}

VariablesPtr model_variables(const ValidatedModel &model, MatrixMode mode) {
    return make_variables(model_parameters(model, mode));
}

SymbolicMatrix compartmental_matrix(const ValidatedModel &model, MatrixMode mode) {
    return compartmental_matrix(model, mode, model_variables(model, mode));
}

SymbolicMatrix compartmental_matrix(const ValidatedModel &model, MatrixMode mode, const VariablesPtr &vars) {
    if (mode == MatrixMode::DiagonalGeneric && !model.all_leaks()) {
        throw Error(ErrorCode::ModeRequiresFullLeaks, "diagonal-generic mode needs a leak in every compartment");
    }
    const auto n = static_cast<std::size_t>(model.n());
    SymbolicMatrix a(vars, n);
    for (const Edge &e : model.edges()) {
        const SparsePoly rate = SparsePoly::variable(vars, e.param());
        const auto src = static_cast<std::size_t>(e.src - 1);
        const auto dst = static_cast<std::size_t>(e.dst - 1);
        a.at(dst, src) = rate;
        if (mode == MatrixMode::Explicit) {
            a.at(src, src) -= rate;
        }
    }
    for (Vertex v = 1; v <= model.n(); ++v) {
        const auto i = static_cast<std::size_t>(v - 1);
        if (mode == MatrixMode::DiagonalGeneric) {
            a.at(i, i) = SparsePoly::variable(vars, Param::diag(v));
        } else if (model.is_leak(v)) {
            a.at(i, i) -= SparsePoly::variable(vars, Param::leak(v));
        }
    }
    return a;
}

// ---------------------------------------------------------------------------

ValidatedModel parse_model(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, "model must be a JSON object");
    }
    static const std::set<std::string> known{"n", "edges", "in", "out", "leak"};
    for (const auto &[key, value] : doc.items()) {
        if (!known.count(key)) {
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
        }
    }
    for (const auto &key : known) {
        if (!doc.contains(key)) {
            throw Error(ErrorCode::ParseError, "missing key '" + key + "'");
        }
    }
    CompartmentalModel raw;
    try {
        raw.n = doc.at("n").get<int>();
        for (const auto &e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw Error(ErrorCode::ParseError, "edges must be [src, dst] pairs");
            }
            raw.edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        raw.inputs = doc.at("in").get<std::vector<int>>();
        raw.outputs = doc.at("out").get<std::vector<int>>();
        raw.leaks = doc.at("leak").get<std::vector<int>>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return validate(std::move(raw));
}

ValidatedModel load_model(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open model file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

std::string serialize_model(const ValidatedModel &model) {
    // Hand-formatted so the text is compact and stable.
    std::ostringstream os;
    auto list = [&os](const std::vector<Vertex> &vs) {
        os << "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            os << (i ? "," : "") << vs[i];
        }
        os << "]";
    };
    os << "{\"n\":" << model.n() << ",\"edges\":[";
    for (std::size_t i = 0; i < model.edges().size(); ++i) {
        const Edge &e = model.edges()[i];
        os << (i ? "," : "") << "[" << e.src << "," << e.dst << "]";
    }
    os << "],\"in\":";
    list(model.inputs());
    os << ",\"out\":";
    list(model.outputs());
    os << ",\"leak\":";
    list(model.leaks());
    os << "}";
    return os.str();
}

std::uint64_t model_hash(const ValidatedModel &model) {
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char c : serialize_model(model)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<Vertex> parse_vertex_list(std::string_view text) {
    std::vector<Vertex> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        if (item.empty()) {
            if (text.empty()) {
                break;
            }
            throw Error(ErrorCode::ParseError, "empty entry in vertex list '" + std::string(text) + "'");
        }
        int v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw Error(ErrorCode::ParseError, "bad vertex '" + std::string(item) + "'");
        }
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

} // namespace identkit
