#pragma once

#include "identkit/graphprops.hpp"
#include "identkit/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace identkit {

/// det(dI - A_H) y_j = sum_i (-1)^{i+j} det(dI - A_H)_{ij} u_i, with H the
/// vertices that reach output j. Polynomials live over the full model's
/// variable set so equations of different outputs can be combined.
struct IOEquation {
    Vertex output = 0;
    /// Original labels of H, ascending.
    std::vector<Vertex> subgraph;
    /// Coefficients of y^{(d-1)}, ..., y; y^{(d)} is monic and implicit.
    std::vector<SparsePoly> lhs;
    /// input (original label) -> coefficients of u^{(d-1)}, ..., u.
    std::map<Vertex, std::vector<SparsePoly>> rhs;

    std::size_t order() const noexcept { return lhs.size(); }
};

IOEquation io_equation(const ValidatedModel &model, Vertex j, MatrixMode mode = MatrixMode::Explicit);

/// Same equation computed from the full n x n matrix, without restricting to
/// H. It equals the restricted one times det(dI - A_{V-H}); used as a check.
IOEquation io_equation_full_matrix(const ValidatedModel &model, Vertex j, MatrixMode mode = MatrixMode::Explicit);

/// Text form, e.g. "y2^(2) + (-a11 - a22)*y2^(1) + (a11*a22)*y2 = (a21)*u1".
std::string render_equation(const IOEquation &eq);

struct CoefficientSource {
    enum class Side { Lhs, Rhs };
    Vertex output = 0;
    Side side = Side::Lhs;
    std::optional<Vertex> input;
    /// Derivative order of the y or u factor.
    int order = 0;
};

/// All nonzero, non-constant coefficients in canonical order: outputs
/// ascending; per output, lhs by descending derivative order, then each
/// input ascending by descending derivative order.
struct CoefficientMap {
    VariablesPtr variables;
    std::vector<SparsePoly> polys;
    std::vector<CoefficientSource> provenance;
    MatrixMode mode = MatrixMode::Explicit;
    /// Set for several outputs unless G is strongly connected with a leak.
    bool minimality_warning = false;

    const std::vector<Param> &param_order() const { return variables->params(); }
    std::size_t size() const noexcept { return polys.size(); }
    /// Count with repeated polynomials (shared lhs of several outputs) merged.
    std::size_t distinct_count() const;
};

CoefficientMap coefficient_map(const ValidatedModel &model, MatrixMode mode = MatrixMode::Explicit);

/// |V| + n|V| - sum dist + m(|V|-1) when its graph and leak hypotheses
/// hold, nullopt otherwise.
std::optional<long> expected_coefficient_count(const ValidatedModel &model);

} // namespace identkit
