#include "identkit/ioeq.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace identkit {

namespace {

void require_output(const ValidatedModel &model, Vertex j) {
    if (!model.is_output(j)) {
        throw Error(ErrorCode::PreconditionViolated, "vertex " + std::to_string(j) + " is not an output");
    }
}

IOEquation build(const SymbolicMatrix &a, const std::vector<Vertex> &labels, const ValidatedModel &model, Vertex j) {
    IOEquation eq;
    eq.output = j;
    eq.subgraph = labels;
    eq.lhs = char_poly(a);
    const auto pos = [&](Vertex v) {
        return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), v) - labels.begin()) + 1;
    };
    const std::size_t jpos = pos(j);
    for (Vertex i : model.inputs()) {
        if (std::find(labels.begin(), labels.end(), i) == labels.end()) {
            continue;
        }
        eq.rhs.emplace(i, signed_minor_poly(a, pos(i), jpos));
    }
    return eq;
}

std::string derivative(const char *symbol, Vertex v, std::size_t k) {
    std::string s = symbol + std::to_string(v);
    if (k > 0) {
        s += "^(" + std::to_string(k) + ")";
    }
    return s;
}

void render_side(std::ostringstream &os, const std::vector<SparsePoly> &coeffs, const char *symbol, Vertex v,
                 bool &first) {
    const std::size_t d = coeffs.size();
    for (std::size_t idx = 0; idx < d; ++idx) {
        const SparsePoly &c = coeffs[idx];
        if (c.is_zero()) {
            continue;
        }
        os << (first ? "" : " + ");
        first = false;
        const std::size_t k = d - 1 - idx;
        if (c == SparsePoly::constant(c.variables(), 1)) {
            os << derivative(symbol, v, k);
        } else {
            os << "(" << c.to_string() << ")*" << derivative(symbol, v, k);
        }
    }
}

IOEquation restricted_equation(const ValidatedModel &model, Vertex j, MatrixMode mode, const VariablesPtr &vars) {
    require_output(model, j);
    const Submodel sub = output_reachable_subgraph(model, j);
    if (sub.model.inputs.empty()) {
        throw Error(ErrorCode::NoInputReachesOutput, "no input has a path to output " + std::to_string(j));
    }
    const SymbolicMatrix full = compartmental_matrix(model, mode, vars);
    std::vector<std::size_t> idx;
    for (Vertex v : sub.vertices) {
        idx.push_back(static_cast<std::size_t>(v - 1));
    }
    return build(full.principal_submatrix(idx), sub.vertices, model, j);
}

} // namespace

IOEquation io_equation(const ValidatedModel &model, Vertex j, MatrixMode mode) {
    return restricted_equation(model, j, mode, model_variables(model, mode));
}

IOEquation io_equation_full_matrix(const ValidatedModel &model, Vertex j, MatrixMode mode) {
    require_output(model, j);
    std::vector<Vertex> labels(static_cast<std::size_t>(model.n()));
    for (Vertex v = 1; v <= model.n(); ++v) {
        labels[static_cast<std::size_t>(v - 1)] = v;
    }
    return build(compartmental_matrix(model, mode), labels, model, j);
}

std::string render_equation(const IOEquation &eq) {
    std::ostringstream os;
    os << derivative("y", eq.output, eq.order());
    bool first = false;
    render_side(os, eq.lhs, "y", eq.output, first);
    os << " = ";
    first = true;
    for (const auto &[i, coeffs] : eq.rhs) {
        render_side(os, coeffs, "u", i, first);
    }
    if (first) {
        os << "0";
    }
    return os.str();
}

std::size_t CoefficientMap::distinct_count() const {
    std::set<std::string> seen;
    for (const SparsePoly &p : polys) {
        seen.insert(p.to_string());
    }
    return seen.size();
}

CoefficientMap coefficient_map(const ValidatedModel &model, MatrixMode mode) {
    CoefficientMap cmap;
    cmap.variables = model_variables(model, mode);
    cmap.mode = mode;
    cmap.minimality_warning =
        model.outputs().size() > 1 && !(is_strongly_connected(model) && !model.leaks().empty());

    for (Vertex j : model.outputs()) {
        const IOEquation eq = restricted_equation(model, j, mode, cmap.variables);
        auto push = [&](const SparsePoly &p, CoefficientSource::Side side, std::optional<Vertex> input, int order) {
            if (p.is_zero() || p.is_constant()) {
                return;
            }
            cmap.polys.push_back(p);
            cmap.provenance.push_back({j, side, input, order});
        };
        const int d = static_cast<int>(eq.order());
        for (int k = 0; k < d; ++k) {
            push(eq.lhs[static_cast<std::size_t>(k)], CoefficientSource::Side::Lhs, std::nullopt, d - 1 - k);
        }
        for (const auto &[i, coeffs] : eq.rhs) {
            for (int k = 0; k < d; ++k) {
                push(coeffs[static_cast<std::size_t>(k)], CoefficientSource::Side::Rhs, i, d - 1 - k);
            }
        }
    }
    return cmap;
}

std::optional<long> expected_coefficient_count(const ValidatedModel &model) {
    for (Vertex v : model.in_out_union()) {
        if (!model.is_leak(v)) {
            return std::nullopt;
        }
    }
    const long V = model.n();
    const Digraph g = Digraph::from_model(model);
    auto count_common = [&]() {
        long m = 0;
        for (Vertex v : model.inputs()) {
            m += model.is_output(v) ? 1 : 0;
        }
        return m;
    };

    if (model.outputs().size() == 1 && is_output_connectable(model)) {
        const Vertex j = model.outputs().front();
        long n = 0;
        long dist_sum = 0;
        for (Vertex i : model.inputs()) {
            if (i == j) {
                continue;
            }
            const auto d = dist(g, i, j);
            if (!d) {
                return std::nullopt;
            }
            ++n;
            dist_sum += *d;
        }
        return V + n * V - dist_sum + count_common() * (V - 1);
    }
    if (model.inputs().size() == 1 && is_output_connectable_to_every_output(model)) {
        const Vertex i = model.inputs().front();
        long n = 0;
        long dist_sum = 0;
        for (Vertex j : model.outputs()) {
            if (j == i) {
                continue;
            }
            const auto d = dist(g, i, j);
            if (!d) {
                return std::nullopt;
            }
            ++n;
            dist_sum += *d;
        }
        return V + n * V - dist_sum + count_common() * (V - 1);
    }
    return std::nullopt;
}

} // namespace identkit
