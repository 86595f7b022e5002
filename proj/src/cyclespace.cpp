#include "identkit/cyclespace.hpp"

#include "identkit/graphprops.hpp"
#include "identkit/modular.hpp"

#include <algorithm>
#include <functional>

namespace identkit {

namespace {

std::vector<Edge> walk_edges(const std::vector<Vertex> &vs, bool closed) {
    std::vector<Edge> es;
    for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
        es.push_back({vs[k], vs[k + 1]});
    }
    if (closed && vs.size() > 1) {
        es.push_back({vs.back(), vs.front()});
    }
    return es;
}

void cap_check(std::size_t count, std::size_t cap, const char *what) {
    if (count > cap) {
        throw Error(ErrorCode::CapExceeded,
                    std::string("more than ") + std::to_string(cap) + " " + what + "; raise the cap");
    }
}

// Johnson's circuit search rooted at s over the vertices >= s.
class Johnson {
public:
    Johnson(const Digraph &g, std::size_t cap, std::vector<Cycle> &out) : g_(g), cap_(cap), out_(out) {}

    void run() {
        const auto n = static_cast<std::size_t>(g_.n());
        for (Vertex s = 1; s <= g_.n(); ++s) {
            s_ = s;
            blocked_.assign(n + 1, false);
            b_.assign(n + 1, {});
            circuit(s);
        }
    }

private:
    bool circuit(Vertex v) {
        bool found = false;
        stack_.push_back(v);
        blocked_[static_cast<std::size_t>(v)] = true;
        for (Vertex w : g_.successors(v)) {
            if (w < s_) {
                continue;
            }
            if (w == s_) {
                if (stack_.size() >= 2) {
                    out_.push_back({stack_});
                    cap_check(out_.size(), cap_, "simple cycles");
                }
                found = true;
            } else if (!blocked_[static_cast<std::size_t>(w)] && circuit(w)) {
                found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (Vertex w : g_.successors(v)) {
                if (w < s_) {
                    continue;
                }
                auto &bw = b_[static_cast<std::size_t>(w)];
                if (std::find(bw.begin(), bw.end(), v) == bw.end()) {
                    bw.push_back(v);
                }
            }
        }
        stack_.pop_back();
        return found;
    }

    void unblock(Vertex u) {
        blocked_[static_cast<std::size_t>(u)] = false;
        std::vector<Vertex> pending;
        pending.swap(b_[static_cast<std::size_t>(u)]);
        for (Vertex w : pending) {
            if (blocked_[static_cast<std::size_t>(w)]) {
                unblock(w);
            }
        }
    }

    const Digraph &g_;
    std::size_t cap_;
    std::vector<Cycle> &out_;
    Vertex s_ = 0;
    std::vector<bool> blocked_;
    std::vector<std::vector<Vertex>> b_;
    std::vector<Vertex> stack_;
};

std::vector<Param> edge_columns(const ValidatedModel &model) {
    std::vector<Param> cols;
    for (const Edge &e : model.edges()) {
        cols.push_back(e.param());
    }
    std::sort(cols.begin(), cols.end(),
              [](const Param &a, const Param &b) { return std::pair(a.row, a.col) < std::pair(b.row, b.col); });
    return cols;
}

std::size_t rank_of(const std::vector<std::vector<int>> &rows) {
    std::vector<std::vector<Integer>> m;
    m.reserve(rows.size());
    for (const auto &r : rows) {
        m.emplace_back(r.begin(), r.end());
    }
    return exact_rank(std::move(m));
}

} // namespace

std::vector<Edge> Cycle::edges() const { return walk_edges(vertices, true); }
std::vector<Edge> Path::edges() const { return walk_edges(vertices, false); }

std::vector<Cycle> enumerate_simple_cycles(const ValidatedModel &model, std::size_t cap) {
    std::vector<Cycle> cycles;
    Johnson(Digraph::from_model(model), cap, cycles).run();
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

std::vector<Path> enumerate_io_paths(const ValidatedModel &model, std::size_t cap) {
    const Digraph g = Digraph::from_model(model);
    std::vector<Path> paths;
    std::vector<bool> on_path(static_cast<std::size_t>(model.n()) + 1, false);
    std::vector<Vertex> stack;

    std::function<void(Vertex)> extend = [&](Vertex v) {
        for (Vertex w : g.successors(v)) {
            if (on_path[static_cast<std::size_t>(w)]) {
                continue;
            }
            stack.push_back(w);
            on_path[static_cast<std::size_t>(w)] = true;
            if (model.is_output(w)) {
                paths.push_back({stack});
                cap_check(paths.size(), cap, "input-output paths");
            }
            extend(w);
            on_path[static_cast<std::size_t>(w)] = false;
            stack.pop_back();
        }
    };
    for (Vertex i : model.inputs()) {
        stack = {i};
        on_path[static_cast<std::size_t>(i)] = true;
        extend(i);
        on_path[static_cast<std::size_t>(i)] = false;
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

std::string PathCycleBasis::monomial(std::size_t r) const {
    std::string s;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (exponent_matrix.at(r)[c]) {
            s += (s.empty() ? "" : "*") + columns[c].name();
        }
    }
    return s;
}

PathCycleBasis path_cycle_basis(const ValidatedModel &model, std::size_t cap) {
    PathCycleBasis basis;
    basis.columns = edge_columns(model);
    const std::size_t edge_cols = basis.columns.size();
    for (Vertex v = 1; v <= model.n(); ++v) {
        basis.columns.push_back(Param::diag(v));
        basis.self_cycles.push_back(v);
    }
    basis.cycles = enumerate_simple_cycles(model, cap);
    basis.io_paths = enumerate_io_paths(model, cap);

    auto column_of = [&](const Edge &e) {
        const Param p = e.param();
        return static_cast<std::size_t>(std::find(basis.columns.begin(), basis.columns.end(), p) -
                                        basis.columns.begin());
    };
    auto row_for = [&](const std::vector<Edge> &es) {
        std::vector<int> row(basis.columns.size(), 0);
        for (const Edge &e : es) {
            row[column_of(e)] = 1;
        }
        return row;
    };
    for (Vertex v = 1; v <= model.n(); ++v) {
        std::vector<int> row(basis.columns.size(), 0);
        row[edge_cols + static_cast<std::size_t>(v - 1)] = 1;
        basis.exponent_matrix.push_back(std::move(row));
    }
    for (const Cycle &c : basis.cycles) {
        basis.exponent_matrix.push_back(row_for(c.edges()));
    }
    for (const Path &p : basis.io_paths) {
        basis.exponent_matrix.push_back(row_for(p.edges()));
    }
    basis.independent_count = rank_of(basis.exponent_matrix);
    return basis;
}

std::size_t path_cycle_rank(const ValidatedModel &model, std::size_t cap) {
    return path_cycle_basis(model, cap).independent_count;
}

std::vector<std::vector<int>> incidence_matrix(const ValidatedModel &model) {
    std::vector<std::vector<int>> m(static_cast<std::size_t>(model.n()), std::vector<int>(model.edge_count(), 0));
    for (std::size_t k = 0; k < model.edge_count(); ++k) {
        const Edge &e = model.edges()[k];
        m[static_cast<std::size_t>(e.src - 1)][k] = -1;
        m[static_cast<std::size_t>(e.dst - 1)][k] = 1;
    }
    return m;
}

std::size_t incidence_rank(const ValidatedModel &model) { return rank_of(incidence_matrix(model)); }

std::size_t cycle_indicator_rank(const ValidatedModel &model, std::size_t cap) {
    std::vector<std::vector<int>> rows;
    for (const Cycle &c : enumerate_simple_cycles(model, cap)) {
        std::vector<int> row(model.edge_count(), 0);
        for (const Edge &e : c.edges()) {
            const auto it = std::lower_bound(model.edges().begin(), model.edges().end(), e);
            row[static_cast<std::size_t>(it - model.edges().begin())] = 1;
        }
        rows.push_back(std::move(row));
    }
    return rank_of(rows);
}

} // namespace identkit
