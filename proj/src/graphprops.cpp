#include "identkit/graphprops.hpp"

#include <algorithm>
#include <deque>

namespace identkit {

Digraph::Digraph(int n)
    : n_(n), out_(static_cast<std::size_t>(n)), in_(static_cast<std::size_t>(n)),
      adjacency_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), false) {}

Digraph Digraph::from_model(const ValidatedModel &model) {
    Digraph g(model.n());
    for (const Edge &e : model.edges()) {
        g.add_edge(e.src, e.dst);
    }
    return g;
}

void Digraph::add_edge(Vertex src, Vertex dst) {
    if (src == dst || has_edge(src, dst)) {
        return;
    }
    adjacency_[static_cast<std::size_t>((src - 1) * n_ + (dst - 1))] = true;
    out_[static_cast<std::size_t>(src - 1)].push_back(dst);
    in_[static_cast<std::size_t>(dst - 1)].push_back(src);
    ++edge_count_;
}

bool Digraph::has_edge(Vertex src, Vertex dst) const {
    if (src < 1 || dst < 1 || src > n_ || dst > n_) {
        return false;
    }
    return adjacency_[static_cast<std::size_t>((src - 1) * n_ + (dst - 1))];
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> es;
    for (Vertex s = 1; s <= n_; ++s) {
        for (Vertex d : successors(s)) {
            es.push_back({s, d});
        }
    }
    std::sort(es.begin(), es.end());
    return es;
}

// ---------------------------------------------------------------------------

namespace {

VertexSet bfs(const Digraph &g, Vertex start, bool forward) {
    VertexSet seen(static_cast<std::size_t>(g.n()));
    std::deque<Vertex> queue{start};
    seen.set(static_cast<std::size_t>(start - 1));
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : forward ? g.successors(v) : g.predecessors(v)) {
            if (!seen.test(static_cast<std::size_t>(w - 1))) {
                seen.set(static_cast<std::size_t>(w - 1));
                queue.push_back(w);
            }
        }
    }
    return seen;
}

} // namespace

ReachabilityCache::ReachabilityCache(const Digraph &g) {
    const auto n = static_cast<std::size_t>(g.n());
    forward_.reserve(n);
    backward_.reserve(n);
    for (Vertex v = 1; v <= g.n(); ++v) {
        forward_.push_back(bfs(g, v, true));
        backward_.push_back(bfs(g, v, false));
    }
    // SCC of v is forward(v) ∩ backward(v); number them by smallest member.
    scc_.assign(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        if (scc_[v] != -1) {
            continue;
        }
        const VertexSet component = forward_[v] & backward_[v];
        for (auto w = component.find_first(); w != VertexSet::npos; w = component.find_next(w)) {
            scc_[w] = scc_count_;
        }
        ++scc_count_;
    }
}

bool is_strongly_connected(const Digraph &g) {
    if (g.n() <= 1) {
        return true;
    }
    return bfs(g, 1, true).all() && bfs(g, 1, false).all();
}

bool is_strongly_connected(const ValidatedModel &model) { return is_strongly_connected(Digraph::from_model(model)); }

bool is_weakly_connected(const Digraph &g) {
    if (g.n() <= 1) {
        return true;
    }
    VertexSet seen(static_cast<std::size_t>(g.n()));
    std::deque<Vertex> queue{1};
    seen.set(0);
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        auto visit = [&](Vertex w) {
            if (!seen.test(static_cast<std::size_t>(w - 1))) {
                seen.set(static_cast<std::size_t>(w - 1));
                queue.push_back(w);
            }
        };
        for (Vertex w : g.successors(v)) {
            visit(w);
        }
        for (Vertex w : g.predecessors(v)) {
            visit(w);
        }
    }
    return seen.all();
}

Submodel output_reachable_subgraph(const ValidatedModel &model, Vertex j) {
    if (!model.is_output(j)) {
        throw Error(ErrorCode::PreconditionViolated, "vertex " + std::to_string(j) + " is not an output");
    }
    const Digraph g = Digraph::from_model(model);
    const VertexSet reach = bfs(g, j, false);

    Submodel sub;
    std::vector<int> relabel(static_cast<std::size_t>(model.n()) + 1, 0);
    for (Vertex v = 1; v <= model.n(); ++v) {
        if (reach.test(static_cast<std::size_t>(v - 1))) {
            sub.vertices.push_back(v);
            relabel[static_cast<std::size_t>(v)] = static_cast<int>(sub.vertices.size());
        }
    }
    sub.model.n = static_cast<int>(sub.vertices.size());
    for (const Edge &e : model.edges()) {
        const int s = relabel[static_cast<std::size_t>(e.src)];
        const int d = relabel[static_cast<std::size_t>(e.dst)];
        if (s && d) {
            sub.model.edges.push_back({s, d});
        }
    }
    auto restrict = [&](const std::vector<Vertex> &vs) {
        std::vector<Vertex> out;
        for (Vertex v : vs) {
            if (int r = relabel[static_cast<std::size_t>(v)]) {
                out.push_back(r);
            }
        }
        return out;
    };
    sub.model.inputs = restrict(model.inputs());
    sub.model.outputs = restrict(model.outputs());
    sub.model.leaks = restrict(model.leaks());
    return sub;
}

bool is_output_connectable(const ValidatedModel &model) {
    const Digraph g = Digraph::from_model(model);
    VertexSet covered(static_cast<std::size_t>(model.n()));
    for (Vertex o : model.outputs()) {
        covered |= bfs(g, o, false);
    }
    return covered.all();
}

bool is_output_connectable_to_every_output(const ValidatedModel &model) {
    const Digraph g = Digraph::from_model(model);
    for (Vertex o : model.outputs()) {
        if (!bfs(g, o, false).all()) {
            return false;
        }
    }
    return true;
}

bool is_strongly_input_output_connected(const Digraph &g, const std::vector<Vertex> &inputs,
                                        const std::vector<Vertex> &outputs) {
    if (!is_weakly_connected(g)) {
        return false;
    }
    const ReachabilityCache reach(g);
    VertexSet from_inputs(static_cast<std::size_t>(g.n()));
    VertexSet to_outputs(static_cast<std::size_t>(g.n()));
    for (Vertex i : inputs) {
        from_inputs |= reach.forward(i);
    }
    for (Vertex o : outputs) {
        to_outputs |= reach.backward(o);
    }
    // Edge u->v lies on a simple cycle iff v reaches u. Otherwise, shortest
    // paths i ~> u and v ~> o are necessarily vertex-disjoint (a shared vertex
    // would give a path v ~> u), so they combine into a simple i ~> o path.
    for (Vertex u = 1; u <= g.n(); ++u) {
        for (Vertex v : g.successors(u)) {
            if (reach.reaches(v, u)) {
                continue;
            }
            if (from_inputs.test(static_cast<std::size_t>(u - 1)) && to_outputs.test(static_cast<std::size_t>(v - 1))) {
                continue;
            }
            return false;
        }
    }
    return true;
}

bool is_strongly_input_output_connected(const ValidatedModel &model) {
    return is_strongly_input_output_connected(Digraph::from_model(model), model.inputs(), model.outputs());
}

std::optional<int> dist(const Digraph &g, Vertex i, Vertex j) {
    if (i < 1 || j < 1 || i > g.n() || j > g.n()) {
        throw Error(ErrorCode::VertexOutOfRange, "dist endpoint outside the graph");
    }
    std::vector<int> depth(static_cast<std::size_t>(g.n()), -1);
    std::deque<Vertex> queue{i};
    depth[static_cast<std::size_t>(i - 1)] = 0;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        if (v == j) {
            return depth[static_cast<std::size_t>(v - 1)];
        }
        for (Vertex w : g.successors(v)) {
            if (depth[static_cast<std::size_t>(w - 1)] < 0) {
                depth[static_cast<std::size_t>(w - 1)] = depth[static_cast<std::size_t>(v - 1)] + 1;
                queue.push_back(w);
            }
        }
    }
    return std::nullopt;
}

std::optional<int> dist(const ValidatedModel &model, Vertex i, Vertex j) {
    return dist(Digraph::from_model(model), i, j);
}

IscResult inductively_strongly_connected(const Digraph &g, Vertex start) {
    // Appending v to a strongly connected prefix S keeps it strongly connected
    // exactly when v has an edge into S and an edge out of S. That condition
    // only gets easier as S grows, so greedy extension (smallest label first)
    // finds an ordering whenever any ordering exists.
    IscResult result;
    std::vector<bool> in_prefix(static_cast<std::size_t>(g.n()), false);
    result.ordering.push_back(start);
    in_prefix[static_cast<std::size_t>(start - 1)] = true;
    bool progressed = true;
    while (progressed && static_cast<int>(result.ordering.size()) < g.n()) {
        progressed = false;
        for (Vertex v = 1; v <= g.n(); ++v) {
            if (in_prefix[static_cast<std::size_t>(v - 1)]) {
                continue;
            }
            const auto &succ = g.successors(v);
            const auto &pred = g.predecessors(v);
            const bool into = std::any_of(succ.begin(), succ.end(),
                                          [&](Vertex w) { return in_prefix[static_cast<std::size_t>(w - 1)]; });
            const bool from = std::any_of(pred.begin(), pred.end(),
                                          [&](Vertex w) { return in_prefix[static_cast<std::size_t>(w - 1)]; });
            if (into && from) {
                in_prefix[static_cast<std::size_t>(v - 1)] = true;
                result.ordering.push_back(v);
                progressed = true;
                break;
            }
        }
    }
    result.holds = static_cast<int>(result.ordering.size()) == g.n();
    if (!result.holds) {
        result.ordering.clear();
    }
    return result;
}

IscResult is_inductively_strongly_connected(const ValidatedModel &model, Vertex start) {
    if (start < 1 || start > model.n()) {
        throw Error(ErrorCode::VertexOutOfRange, "start vertex outside the model");
    }
    return inductively_strongly_connected(Digraph::from_model(model), start);
}

bool satisfies_almost_isc(const ValidatedModel &model) {
    if (model.inputs().size() != 1 || model.outputs().size() != 1) {
        throw Error(ErrorCode::PreconditionViolated, "needs exactly one input and one output");
    }
    const Vertex i = model.inputs().front();
    const Vertex j = model.outputs().front();
    if (i == j) {
        throw Error(ErrorCode::PreconditionViolated, "input and output must differ");
    }
    Digraph g = Digraph::from_model(model);
    if (!is_strongly_input_output_connected(g, model.inputs(), model.outputs())) {
        return false;
    }
    const auto d = dist(g, i, j);
    if (!d || static_cast<long>(model.edge_count()) != 2L * model.n() - (*d + 2)) {
        return false;
    }
    if (dist(g, j, i)) {
        return false;
    }
    g.add_edge(j, i);
    return inductively_strongly_connected(g, i).holds || inductively_strongly_connected(g, j).holds;
}

} // namespace identkit
