#pragma once

#include "identkit/model.hpp"

#include <boost/dynamic_bitset.hpp>

#include <optional>
#include <vector>

namespace identkit {

/// Plain simple digraph on vertices 1..n, used when a predicate needs a
/// graph that is not itself a model (e.g. G plus an added edge).
class Digraph {
public:
    explicit Digraph(int n);
    static Digraph from_model(const ValidatedModel &model);

    /// Self-loops and repeated edges are ignored.
    void add_edge(Vertex src, Vertex dst);

    int n() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool has_edge(Vertex src, Vertex dst) const;
    const std::vector<Vertex> &successors(Vertex v) const { return out_[static_cast<std::size_t>(v - 1)]; }
    const std::vector<Vertex> &predecessors(Vertex v) const { return in_[static_cast<std::size_t>(v - 1)]; }
    std::vector<Edge> edges() const;

private:
    int n_;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
    std::vector<bool> adjacency_;
};

/// Bit v-1 stands for vertex v.
using VertexSet = boost::dynamic_bitset<>;

/// Forward/backward reachability for every vertex and the SCC partition.
class ReachabilityCache {
public:
    explicit ReachabilityCache(const Digraph &g);

    /// Reflexive: every vertex reaches itself.
    bool reaches(Vertex from, Vertex to) const { return forward_[idx(from)].test(idx(to)); }
    const VertexSet &forward(Vertex v) const { return forward_[idx(v)]; }
    const VertexSet &backward(Vertex v) const { return backward_[idx(v)]; }
    int scc_of(Vertex v) const { return scc_[idx(v)]; }
    int scc_count() const noexcept { return scc_count_; }

private:
    static std::size_t idx(Vertex v) { return static_cast<std::size_t>(v - 1); }

    std::vector<VertexSet> forward_;
    std::vector<VertexSet> backward_;
    std::vector<int> scc_;
    int scc_count_ = 0;
};

bool is_strongly_connected(const Digraph &g);
bool is_strongly_connected(const ValidatedModel &model);
/// Underlying undirected graph connected.
bool is_weakly_connected(const Digraph &g);

/// Induced submodel on the vertices that reach output j, relabelled 1..|H|
/// in ascending order of the original labels. `vertices[k]` is the original
/// label of new vertex k+1. The submodel may have no inputs, so it is kept
/// as a raw description.
struct Submodel {
    std::vector<Vertex> vertices;
    CompartmentalModel model;
};

Submodel output_reachable_subgraph(const ValidatedModel &model, Vertex j);

bool is_output_connectable(const ValidatedModel &model);
bool is_output_connectable_to_every_output(const ValidatedModel &model);

/// Weakly connected, and every edge lies on a simple directed cycle or on a
/// simple directed path from an input to an output.
bool is_strongly_input_output_connected(const Digraph &g, const std::vector<Vertex> &inputs,
                                        const std::vector<Vertex> &outputs);
bool is_strongly_input_output_connected(const ValidatedModel &model);

/// Length of a shortest directed path; nullopt when j is unreachable.
std::optional<int> dist(const Digraph &g, Vertex i, Vertex j);
std::optional<int> dist(const ValidatedModel &model, Vertex i, Vertex j);

struct IscResult {
    bool holds = false;
    /// Witness ordering starting at the start vertex (empty when !holds).
    std::vector<Vertex> ordering;
};

/// Inductive strong connectivity from `start`: an ordering v1 = start, v2, ...
/// whose every prefix induces a strongly connected subgraph.
IscResult inductively_strongly_connected(const Digraph &g, Vertex start);
IscResult is_inductively_strongly_connected(const ValidatedModel &model, Vertex start);

/// The graph condition for a single-input single-output model with i != j:
/// SIOC, |E| = 2|V| - (dist(i,j) + 2), no path j -> i, and G + (j -> i)
/// inductively strongly connected from i or from j.
bool satisfies_almost_isc(const ValidatedModel &model);

} // namespace identkit
