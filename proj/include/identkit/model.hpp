#pragma once

#include "identkit/sympoly.hpp"

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace identkit {

/// Directed edge src -> dst. Its rate parameter is a_{dst,src}: the matrix
/// entry in row dst, column src. Keep the two orders straight; every
/// parameter list in the library is sorted by (dst, src) while edge lists
/// are sorted by (src, dst).
struct Edge {
    Vertex src = 0;
    Vertex dst = 0;

    Param param() const { return Param::edge(src, dst); }
    auto operator<=>(const Edge &) const = default;
};

/// Unvalidated model description (G, In, Out, Leak) with 1-based vertices.
struct CompartmentalModel {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<Vertex> inputs;
    std::vector<Vertex> outputs;
    std::vector<Vertex> leaks;
};

/// A model whose invariants have been checked: no self-loops or duplicate
/// edges, all vertices in 1..n, nonempty input and output sets. Edges are
/// sorted by (src, dst) and vertex sets are sorted and deduplicated.
class ValidatedModel {
public:
    int n() const noexcept { return raw_.n; }
    const std::vector<Edge> &edges() const noexcept { return raw_.edges; }
    const std::vector<Vertex> &inputs() const noexcept { return raw_.inputs; }
    const std::vector<Vertex> &outputs() const noexcept { return raw_.outputs; }
    const std::vector<Vertex> &leaks() const noexcept { return raw_.leaks; }
    const CompartmentalModel &raw() const noexcept { return raw_; }

    std::size_t edge_count() const noexcept { return raw_.edges.size(); }
    bool has_edge(Vertex src, Vertex dst) const;
    bool is_input(Vertex v) const;
    bool is_output(Vertex v) const;
    bool is_leak(Vertex v) const;
    bool all_leaks() const noexcept { return static_cast<int>(raw_.leaks.size()) == raw_.n; }

    /// |In ∪ Out|
    std::size_t in_out_union_size() const;
    std::vector<Vertex> in_out_union() const;

    bool operator==(const ValidatedModel &) const;

    friend ValidatedModel validate(CompartmentalModel raw);

private:
    explicit ValidatedModel(CompartmentalModel raw) : raw_(std::move(raw)) {}
    CompartmentalModel raw_;
};

ValidatedModel validate(CompartmentalModel raw);

/// Same graph and in/out sets with a different leak set.
ValidatedModel with_leaks(const ValidatedModel &model, std::vector<Vertex> leaks);
ValidatedModel with_all_leaks(const ValidatedModel &model);

enum class MatrixMode {
    /// Diagonal entries are -a_{0i}[i in Leak] - sum of outgoing edge rates.
    Explicit,
    /// Leak = V only: diagonal entries are independent parameters a_{ii}.
    DiagonalGeneric,
};

std::string_view to_string(MatrixMode mode);
MatrixMode parse_matrix_mode(std::string_view text);

/// Parameter order used everywhere: edge parameters sorted by (dst, src),
/// then leaks ascending (explicit mode) or diagonals ascending (diagonal-
/// generic mode).
std::vector<Param> model_parameters(const ValidatedModel &model, MatrixMode mode);
VariablesPtr model_variables(const ValidatedModel &model, MatrixMode mode);

/// The compartmental matrix A(G) over model_variables(model, mode).
SymbolicMatrix compartmental_matrix(const ValidatedModel &model, MatrixMode mode);
/// Same, over a caller-supplied variable set that contains the model's parameters.
SymbolicMatrix compartmental_matrix(const ValidatedModel &model, MatrixMode mode, const VariablesPtr &vars);

/// JSON text {"n", "edges", "in", "out", "leak"}; unknown keys are rejected.
ValidatedModel parse_model(std::string_view json_text);
ValidatedModel load_model(const std::string &path);
std::string serialize_model(const ValidatedModel &model);

/// Stable 64-bit digest of the canonical serialization.
std::uint64_t model_hash(const ValidatedModel &model);

/// Parses "1,2,3" into a vertex list.
std::vector<Vertex> parse_vertex_list(std::string_view text);

} // namespace identkit
