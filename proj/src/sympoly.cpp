#include "identkit/sympoly.hpp"

#include "identkit/modular.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace identkit {

namespace {

std::string index_label(int row, int col) {
    if (row < 10 && col < 10) {
        return "a" + std::to_string(row) + std::to_string(col);
    }
    return "a_{" + std::to_string(row) + "," + std::to_string(col) + "}";
}

struct GrlexGreaterCmp {
    bool operator()(const SparsePoly::Exponents &a, const SparsePoly::Exponents &b) const {
        return grlex_greater(a, b);
    }
};

using TermMap = std::map<SparsePoly::Exponents, Integer, GrlexGreaterCmp>;

unsigned degree_of(const SparsePoly::Exponents &e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

} // namespace

std::string Param::name() const { return index_label(row, col); }

VariableSet::VariableSet(std::vector<Param> params) : params_(std::move(params)) {}

std::optional<std::size_t> VariableSet::index_of(const Param &p) const {
    auto it = std::find(params_.begin(), params_.end(), p);
    if (it == params_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - params_.begin());
}

std::string VariableSet::name(std::size_t index) const {
    if (index == differential_index()) {
        return "d";
    }
    return params_.at(index).name();
}

VariablesPtr make_variables(std::vector<Param> params) {
    return std::make_shared<const VariableSet>(std::move(params));
}

bool grlex_greater(const SparsePoly::Exponents &a, const SparsePoly::Exponents &b) {
    const unsigned da = degree_of(a);
    const unsigned db = degree_of(b);
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

// ---------------------------------------------------------------------------

SparsePoly::SparsePoly(VariablesPtr vars) : vars_(std::move(vars)) {
    if (!vars_) {
        throw Error(ErrorCode::VariableMismatch, "polynomial requires a variable set");
    }
}

SparsePoly SparsePoly::constant(VariablesPtr vars, const Integer &value) {
    SparsePoly p(std::move(vars));
    if (value != 0) {
        p.terms_.push_back({Exponents(p.vars_->arity(), 0), value});
    }
    return p;
}

SparsePoly SparsePoly::variable(VariablesPtr vars, std::size_t index) {
    SparsePoly p(std::move(vars));
    if (index >= p.vars_->arity()) {
        throw Error(ErrorCode::VariableMismatch, "variable index out of range");
    }
    Exponents e(p.vars_->arity(), 0);
    e[index] = 1;
    p.terms_.push_back({std::move(e), Integer(1)});
    return p;
}

SparsePoly SparsePoly::variable(VariablesPtr vars, const Param &param) {
    auto idx = vars->index_of(param);
    if (!idx) {
        throw Error(ErrorCode::VariableMismatch, "parameter " + param.name() + " is not in the variable set");
    }
    return variable(std::move(vars), *idx);
}

SparsePoly SparsePoly::differential(VariablesPtr vars) {
    const auto idx = vars->differential_index();
    return variable(std::move(vars), idx);
}

SparsePoly SparsePoly::from_terms(VariablesPtr vars, std::vector<Term> terms) {
    SparsePoly p(std::move(vars));
    TermMap acc;
    for (auto &t : terms) {
        if (t.exponents.size() != p.vars_->arity()) {
            throw Error(ErrorCode::VariableMismatch, "exponent vector has the wrong arity");
        }
        acc[t.exponents] += t.coefficient;
    }
    for (auto &[e, c] : acc) {
        if (c != 0) {
            p.terms_.push_back({e, std::move(c)});
        }
    }
    return p;
}

bool SparsePoly::is_constant() const noexcept {
    if (terms_.empty()) {
        return true;
    }
    return terms_.size() == 1 && degree_of(terms_.front().exponents) == 0;
}

unsigned SparsePoly::degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto &t : terms_) {
        d = std::max<unsigned>(d, t.exponents.at(var));
    }
    return d;
}

unsigned SparsePoly::total_degree() const {
    // Terms are sorted by descending total degree.
    return terms_.empty() ? 0 : degree_of(terms_.front().exponents);
}

SparsePoly SparsePoly::coefficient_of_power(std::size_t var, unsigned power) const {
    SparsePoly out(vars_);
    for (const auto &t : terms_) {
        if (t.exponents.at(var) == power) {
            Term copy = t;
            copy.exponents[var] = 0;
            out.terms_.push_back(std::move(copy));
        }
    }
    // Every selected term loses the same power of var, so the order holds.
    return out;
}

void SparsePoly::check_same(const SparsePoly &other) const {
    if (vars_ != other.vars_ && !(*vars_ == *other.vars_)) {
        throw Error(ErrorCode::VariableMismatch, "polynomials are over different variable lists");
    }
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly out = *this;
    for (auto &t : out.terms_) {
        t.coefficient = -t.coefficient;
    }
    return out;
}

SparsePoly &SparsePoly::operator+=(const SparsePoly &rhs) {
    check_same(rhs);
    if (rhs.terms_.empty()) {
        return *this;
    }
    std::vector<Term> merged;
    merged.reserve(terms_.size() + rhs.terms_.size());
    auto a = terms_.begin();
    auto b = rhs.terms_.begin();
    while (a != terms_.end() || b != rhs.terms_.end()) {
        if (b == rhs.terms_.end() || (a != terms_.end() && grlex_greater(a->exponents, b->exponents))) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || grlex_greater(b->exponents, a->exponents)) {
            merged.push_back(*b++);
        } else {
            Integer c = a->coefficient + b->coefficient;
            if (c != 0) {
                merged.push_back({std::move(a->exponents), std::move(c)});
            }
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

SparsePoly &SparsePoly::operator-=(const SparsePoly &rhs) { return *this += -rhs; }

SparsePoly SparsePoly::scaled(const Integer &factor) const {
    if (factor == 0) {
        return SparsePoly(vars_);
    }
    SparsePoly out = *this;
    for (auto &t : out.terms_) {
        t.coefficient *= factor;
    }
    return out;
}

SparsePoly operator*(const SparsePoly &lhs, const SparsePoly &rhs) {
    lhs.check_same(rhs);
    SparsePoly out(lhs.vars_);
    if (lhs.terms_.empty() || rhs.terms_.empty()) {
        return out;
    }
    const std::size_t arity = lhs.vars_->arity();
    TermMap acc;
    SparsePoly::Exponents e(arity, 0);
    for (const auto &a : lhs.terms_) {
        for (const auto &b : rhs.terms_) {
            for (std::size_t k = 0; k < arity; ++k) {
                const unsigned s = unsigned(a.exponents[k]) + b.exponents[k];
                if (s > 255) {
                    throw Error(ErrorCode::VariableMismatch, "exponent overflow");
                }
                e[k] = static_cast<std::uint8_t>(s);
            }
            auto [it, inserted] = acc.try_emplace(e, Integer(a.coefficient * b.coefficient));
            if (!inserted) {
                it->second += a.coefficient * b.coefficient;
            }
        }
    }
    out.terms_.reserve(acc.size());
    for (auto &[exp, c] : acc) {
        if (c != 0) {
            out.terms_.push_back({exp, std::move(c)});
        }
    }
    return out;
}

bool SparsePoly::operator==(const SparsePoly &other) const {
    if (!(*vars_ == *other.vars_) || terms_.size() != other.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].exponents != other.terms_[i].exponents ||
            terms_[i].coefficient != other.terms_[i].coefficient) {
            return false;
        }
    }
    return true;
}

std::string SparsePoly::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms_) {
        Integer c = t.coefficient;
        const bool negative = c < 0;
        if (negative) {
            c = -c;
        }
        if (first) {
            if (negative) {
                os << "-";
            }
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;

        std::vector<std::string> factors;
        for (std::size_t k = 0; k < t.exponents.size(); ++k) {
            const unsigned power = t.exponents[k];
            if (power == 0) {
                continue;
            }
            std::string f = vars_->name(k);
            if (power > 1) {
                f += "^" + std::to_string(power);
            }
            factors.push_back(std::move(f));
        }
        if (factors.empty()) {
            os << c;
            continue;
        }
        if (c != 1) {
            os << c << "*";
        }
        for (std::size_t k = 0; k < factors.size(); ++k) {
            os << (k ? "*" : "") << factors[k];
        }
    }
    return os.str();
}

SparsePoly poly_add(const SparsePoly &a, const SparsePoly &b) { return a + b; }

SparsePoly poly_mul(const SparsePoly &a, const SparsePoly &b) { return a * b; }

SparsePoly poly_partial(const SparsePoly &p, std::size_t var) {
    if (var >= p.variables()->arity()) {
        throw Error(ErrorCode::VariableMismatch, "variable index out of range");
    }
    std::vector<SparsePoly::Term> terms;
    for (const auto &t : p.terms()) {
        const unsigned power = t.exponents[var];
        if (power == 0) {
            continue;
        }
        SparsePoly::Term d{t.exponents, t.coefficient * power};
        d.exponents[var] = static_cast<std::uint8_t>(power - 1);
        terms.push_back(std::move(d));
    }
    return SparsePoly::from_terms(p.variables(), std::move(terms));
}

SparsePoly poly_partial(const SparsePoly &p, const Param &var) {
    auto idx = p.variables()->index_of(var);
    if (!idx) {
        throw Error(ErrorCode::VariableMismatch, "parameter " + var.name() + " is not in the variable set");
    }
    return poly_partial(p, *idx);
}

Integer evaluate(const SparsePoly &p, const EvalPoint &pt) {
    const auto &vars = *p.variables();
    if (pt.values.size() != vars.param_count()) {
        throw Error(ErrorCode::VariableMismatch, "evaluation point does not cover every parameter");
    }
    if (p.degree_in(vars.differential_index()) > 0) {
        throw Error(ErrorCode::VariableMismatch, "cannot evaluate a polynomial in the differential indeterminate");
    }
    if (pt.modulus) {
        const std::uint64_t m = *pt.modulus;
        std::vector<std::uint64_t> residues(pt.values.size());
        for (std::size_t i = 0; i < residues.size(); ++i) {
            residues[i] = reduce_signed(pt.values[i], m);
        }
        return Integer(evaluate_mod(p, residues, m));
    }
    Integer total = 0;
    for (const auto &t : p.terms()) {
        Integer term = t.coefficient;
        for (std::size_t k = 0; k < vars.param_count(); ++k) {
            for (unsigned e = 0; e < t.exponents[k]; ++e) {
                term *= pt.values[k];
            }
        }
        total += term;
    }
    return total;
}

std::uint64_t evaluate_mod(const SparsePoly &p, std::span<const std::uint64_t> residues, std::uint64_t modulus) {
    const auto &vars = *p.variables();
    if (residues.size() != vars.param_count()) {
        throw Error(ErrorCode::VariableMismatch, "evaluation point does not cover every parameter");
    }
    std::uint64_t total = 0;
    for (const auto &t : p.terms()) {
        if (t.exponents[vars.differential_index()] != 0) {
            throw Error(ErrorCode::VariableMismatch, "cannot evaluate a polynomial in the differential indeterminate");
        }
        std::uint64_t term = reduce_integer(t.coefficient, modulus);
        for (std::size_t k = 0; k < residues.size() && term != 0; ++k) {
            for (unsigned e = 0; e < t.exponents[k]; ++e) {
                term = mul_mod(term, residues[k], modulus);
            }
        }
        total = add_mod(total, term, modulus);
    }
    return total;
}

// ---------------------------------------------------------------------------

SymbolicMatrix::SymbolicMatrix(VariablesPtr vars, std::size_t dim)
    : vars_(std::move(vars)), dim_(dim), entries_(dim * dim, SparsePoly(vars_)) {}

SymbolicMatrix SymbolicMatrix::principal_submatrix(std::span<const std::size_t> indices) const {
    SymbolicMatrix out(vars_, indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        for (std::size_t c = 0; c < indices.size(); ++c) {
            out.at(r, c) = at(indices[r], indices[c]);
        }
    }
    return out;
}

SymbolicMatrix SymbolicMatrix::without(std::size_t row, std::size_t col) const {
    if (row >= dim_ || col >= dim_) {
        throw Error(ErrorCode::PreconditionViolated, "row/column index out of range");
    }
    SymbolicMatrix out(vars_, dim_ - 1);
    for (std::size_t r = 0, rr = 0; r < dim_; ++r) {
        if (r == row) {
            continue;
        }
        for (std::size_t c = 0, cc = 0; c < dim_; ++c) {
            if (c == col) {
                continue;
            }
            out.at(rr, cc++) = at(r, c);
        }
        ++rr;
    }
    return out;
}

namespace {

class DeterminantExpander {
public:
    explicit DeterminantExpander(const SymbolicMatrix &m) : m_(m) {
        if (m.dim() > 30) {
            throw Error(ErrorCode::PreconditionViolated, "matrix too large for subset-memoized expansion");
        }
    }

    SparsePoly run() { return expand(0); }

private:
    // Determinant of rows popcount(used)..dim-1 restricted to unused columns.
    SparsePoly expand(std::uint32_t used) {
        const std::size_t row = static_cast<std::size_t>(std::popcount(used));
        if (row == m_.dim()) {
            return SparsePoly::constant(m_.variables(), 1);
        }
        if (auto it = memo_.find(used); it != memo_.end()) {
            return it->second;
        }
        SparsePoly total(m_.variables());
        int position = 0;
        for (std::size_t col = 0; col < m_.dim(); ++col) {
            if (used & (1u << col)) {
                continue;
            }
            const SparsePoly &entry = m_.at(row, col);
            if (!entry.is_zero()) {
                SparsePoly minor = expand(used | (1u << col));
                if (!minor.is_zero()) {
                    SparsePoly product = entry * minor;
                    if (position % 2 == 0) {
                        total += product;
                    } else {
                        total -= product;
                    }
                }
            }
            ++position;
        }
        memo_.emplace(used, total);
        return total;
    }

    const SymbolicMatrix &m_;
    std::unordered_map<std::uint32_t, SparsePoly> memo_;
};

SymbolicMatrix differential_minus(const SymbolicMatrix &m) {
    SymbolicMatrix out(m.variables(), m.dim());
    const SparsePoly d = SparsePoly::differential(m.variables());
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) {
            out.at(r, c) = r == c ? d - m.at(r, c) : -m.at(r, c);
        }
    }
    return out;
}

std::vector<SparsePoly> split_by_differential(const SparsePoly &p, std::size_t count) {
    const std::size_t d = p.variables()->differential_index();
    std::vector<SparsePoly> out;
    out.reserve(count);
    for (std::size_t k = count; k-- > 0;) {
        out.push_back(p.coefficient_of_power(d, static_cast<unsigned>(k)));
    }
    return out;
}

} // namespace

SparsePoly determinant(const SymbolicMatrix &m) {
    if (m.dim() == 0) {
        return SparsePoly::constant(m.variables(), 1);
    }
    return DeterminantExpander(m).run();
}

std::vector<SparsePoly> char_poly(const SymbolicMatrix &m) {
    const SparsePoly det = determinant(differential_minus(m));
    return split_by_differential(det, m.dim());
}

std::vector<SparsePoly> signed_minor_poly(const SymbolicMatrix &m, std::size_t i, std::size_t j) {
    if (i < 1 || j < 1 || i > m.dim() || j > m.dim()) {
        throw Error(ErrorCode::PreconditionViolated, "minor indices must lie in 1..dim");
    }
    SparsePoly det = determinant(differential_minus(m).without(i - 1, j - 1));
    if ((i + j) % 2 == 1) {
        det = -det;
    }
    return split_by_differential(det, m.dim());
}

} // namespace identkit
