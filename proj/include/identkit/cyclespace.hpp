#pragma once

#include "identkit/model.hpp"

#include <cstddef>
#include <vector>

namespace identkit {

inline constexpr std::size_t kDefaultEnumerationCap = 100000;

/// A simple cycle as its closed vertex walk v0 -> v1 -> ... -> v0, stored
/// without repeating v0; v0 is the smallest vertex on the cycle.
struct Cycle {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges() const;
    auto operator<=>(const Cycle &) const = default;
};

/// A simple directed path v0 -> ... -> vk with k >= 1.
struct Path {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges() const;
    auto operator<=>(const Path &) const = default;
};

/// All simple cycles of length >= 2 (Johnson's algorithm), ordered by
/// (smallest vertex, then vertex sequence). Throws CapExceeded when there are
/// more than `cap`.
std::vector<Cycle> enumerate_simple_cycles(const ValidatedModel &model, std::size_t cap = kDefaultEnumerationCap);

/// All simple paths from an input to a different output vertex, by input then
/// vertex sequence. Throws CapExceeded.
std::vector<Path> enumerate_io_paths(const ValidatedModel &model, std::size_t cap = kDefaultEnumerationCap);

/// Monomials of the path/cycle map together with their 0/1 exponent vectors.
/// Columns: edge parameters in model parameter order, then a_11..a_nn.
struct PathCycleBasis {
    std::vector<Param> columns;
    std::vector<Vertex> self_cycles;
    std::vector<Cycle> cycles;
    std::vector<Path> io_paths;
    /// Row order: self-cycles, cycles, paths.
    std::vector<std::vector<int>> exponent_matrix;
    std::size_t independent_count = 0;

    std::size_t size() const noexcept { return exponent_matrix.size(); }
    /// Monomial text of row r, e.g. "a23*a32".
    std::string monomial(std::size_t r) const;
};

PathCycleBasis path_cycle_basis(const ValidatedModel &model, std::size_t cap = kDefaultEnumerationCap);
/// Rank over Q of the stacked exponent vectors.
std::size_t path_cycle_rank(const ValidatedModel &model, std::size_t cap = kDefaultEnumerationCap);

/// |V| x |E| matrix: column of edge u->v has -1 in row u and +1 in row v.
/// Columns follow the model's (src, dst) edge order.
std::vector<std::vector<int>> incidence_matrix(const ValidatedModel &model);
std::size_t incidence_rank(const ValidatedModel &model);

/// Rank of the indicator vectors (over edges) of all simple cycles.
std::size_t cycle_indicator_rank(const ValidatedModel &model, std::size_t cap = kDefaultEnumerationCap);

} // namespace identkit
