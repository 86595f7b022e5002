#pragma once

#include "identkit/errors.hpp"

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace identkit {

using Vertex = int;
using Integer = boost::multiprecision::cpp_int;

/// A rate parameter of a compartmental model.
///
/// The pair (row, col) names the matrix position the parameter occupies:
/// an edge src -> dst is a_{dst,src}; a leak from i is a_{0,i}; a generic
/// diagonal entry is a_{i,i}.
struct Param {
    enum class Kind { Edge, Leak, Diag };

    Kind kind = Kind::Edge;
    int row = 0;
    int col = 0;

    static Param edge(Vertex src, Vertex dst) { return {Kind::Edge, dst, src}; }
    static Param leak(Vertex v) { return {Kind::Leak, 0, v}; }
    static Param diag(Vertex v) { return {Kind::Diag, v, v}; }

    /// "a21", or "a_{10,3}" when an index has more than one digit.
    std::string name() const;

    auto operator<=>(const Param &) const = default;
};

/// Ordered variable list shared by every polynomial of one model: the model
/// parameters followed by the differential indeterminate (written "d").
class VariableSet {
public:
    explicit VariableSet(std::vector<Param> params);

    std::size_t param_count() const noexcept { return params_.size(); }
    std::size_t arity() const noexcept { return params_.size() + 1; }
    std::size_t differential_index() const noexcept { return params_.size(); }

    const std::vector<Param> &params() const noexcept { return params_; }
    const Param &param(std::size_t index) const { return params_.at(index); }
    std::optional<std::size_t> index_of(const Param &p) const;
    std::string name(std::size_t index) const;

    bool operator==(const VariableSet &other) const { return params_ == other.params_; }

private:
    std::vector<Param> params_;
};

using VariablesPtr = std::shared_ptr<const VariableSet>;

VariablesPtr make_variables(std::vector<Param> params);

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Terms are kept in descending graded-lexicographic order and
/// zero coefficients are never stored, so structural equality is polynomial
/// equality.
class SparsePoly {
public:
    using Exponents = boost::container::small_vector<std::uint8_t, 28>;

    struct Term {
        Exponents exponents;
        Integer coefficient;
    };

    explicit SparsePoly(VariablesPtr vars);

    static SparsePoly constant(VariablesPtr vars, const Integer &value);
    static SparsePoly variable(VariablesPtr vars, std::size_t index);
    static SparsePoly variable(VariablesPtr vars, const Param &p);
    static SparsePoly differential(VariablesPtr vars);
    /// Builds from arbitrary (unsorted, possibly repeated) terms.
    static SparsePoly from_terms(VariablesPtr vars, std::vector<Term> terms);

    const VariablesPtr &variables() const noexcept { return vars_; }
    const std::vector<Term> &terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    unsigned degree_in(std::size_t var) const;
    unsigned total_degree() const;

    /// Coefficient of var^power, returned as a polynomial free of var.
    SparsePoly coefficient_of_power(std::size_t var, unsigned power) const;

    SparsePoly operator-() const;
    SparsePoly &operator+=(const SparsePoly &rhs);
    SparsePoly &operator-=(const SparsePoly &rhs);
    SparsePoly scaled(const Integer &factor) const;

    friend SparsePoly operator+(SparsePoly lhs, const SparsePoly &rhs) { return lhs += rhs; }
    friend SparsePoly operator-(SparsePoly lhs, const SparsePoly &rhs) { return lhs -= rhs; }
    friend SparsePoly operator*(const SparsePoly &lhs, const SparsePoly &rhs);

    bool operator==(const SparsePoly &other) const;

    /// Canonical rendering, e.g. "-a11*a22 + 2*a21 - 1". Zero renders as "0".
    std::string to_string() const;

private:
    void check_same(const SparsePoly &other) const;

    VariablesPtr vars_;
    std::vector<Term> terms_;
};

/// Descending graded-lexicographic comparison of exponent vectors.
bool grlex_greater(const SparsePoly::Exponents &a, const SparsePoly::Exponents &b);

SparsePoly poly_add(const SparsePoly &a, const SparsePoly &b);
SparsePoly poly_mul(const SparsePoly &a, const SparsePoly &b);
SparsePoly poly_partial(const SparsePoly &p, std::size_t var);
SparsePoly poly_partial(const SparsePoly &p, const Param &var);

/// Integer assignment for every parameter of a VariableSet. With a modulus,
/// evaluation happens in Z/pZ; the modulus must be a prime above 2^60.
struct EvalPoint {
    std::vector<std::int64_t> values;
    std::optional<std::uint64_t> modulus;
};

/// Exact value, or the residue in [0, p) when pt.modulus is set. Polynomials
/// that still contain the differential indeterminate are rejected.
Integer evaluate(const SparsePoly &p, const EvalPoint &pt);

/// Fast modular evaluation with pre-reduced residues (one per parameter).
std::uint64_t evaluate_mod(const SparsePoly &p, std::span<const std::uint64_t> residues,
                           std::uint64_t modulus);

/// Square matrix of polynomials over one VariableSet, row-major.
class SymbolicMatrix {
public:
    SymbolicMatrix(VariablesPtr vars, std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    const VariablesPtr &variables() const noexcept { return vars_; }

    const SparsePoly &at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    SparsePoly &at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

    /// Principal submatrix on the given 0-based indices, in the given order.
    SymbolicMatrix principal_submatrix(std::span<const std::size_t> indices) const;
    /// Matrix with one row and one column removed (0-based).
    SymbolicMatrix without(std::size_t row, std::size_t col) const;

private:
    VariablesPtr vars_;
    std::size_t dim_;
    std::vector<SparsePoly> entries_;
};

/// Exact determinant by row-wise Laplace expansion memoized on the set of
/// consumed columns; zero entries are skipped.
SparsePoly determinant(const SymbolicMatrix &m);

/// Coefficients of d^{n-1}, ..., d^0 of det(dI - M). The leading d^n
/// coefficient is 1 and is not returned.
std::vector<SparsePoly> char_poly(const SymbolicMatrix &m);

/// Coefficients of d^{n-1}, ..., d^0 of (-1)^{i+j} det((dI - M) without row i,
/// column j); i and j are 1-based. Leading entries may be zero.
std::vector<SparsePoly> signed_minor_poly(const SymbolicMatrix &m, std::size_t i, std::size_t j);

} // namespace identkit
