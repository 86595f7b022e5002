#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "identkit/cyclespace.hpp"
#include "identkit/ioeq.hpp"
#include "properties.hpp"

#include <sstream>

using namespace identkit;
using namespace identkit::testing;

namespace {

// "a11*a22 - a23*a32 + 2*a21"; names are a<row><col> with single digits.
SparsePoly poly_from(const VariablesPtr &vars, const std::string &text) {
    SparsePoly total(vars);
    std::istringstream in(text[0] == '-' ? "- " + text.substr(1) : "+ " + text);
    std::string sign, term;
    while (in >> sign >> term) {
        SparsePoly t = SparsePoly::constant(vars, sign == "-" ? -1 : 1);
        std::istringstream factors(term);
        std::string f;
        while (std::getline(factors, f, '*')) {
            if (f[0] != 'a') {
                t = t.scaled(std::stoi(f));
                continue;
            }
            const int row = f[1] - '0';
            const int col = f[2] - '0';
            const Param p = row == 0 ? Param::leak(col) : row == col ? Param::diag(row) : Param::edge(col, row);
            t = t * SparsePoly::variable(vars, p);
        }
        total += t;
    }
    return total;
}

const CompartmentalModel kChain4{4, {{1, 2}, {2, 3}, {3, 2}, {3, 4}, {4, 3}}, {1}, {2}, {1, 2, 3, 4}};

} // namespace

TEST_CASE("four-compartment chain equation, term for term") {
    const auto model = validate(kChain4);
    const auto eq = io_equation(model, 2, MatrixMode::DiagonalGeneric);
    const auto &vars = eq.lhs.front().variables();
    const std::vector<std::string> lhs{
        "-a11 - a22 - a33 - a44",
        "a11*a22 - a23*a32 + a11*a33 + a22*a33 - a34*a43 + a11*a44 + a22*a44 + a33*a44",
        "a11*a23*a32 - a11*a22*a33 + a11*a34*a43 + a22*a34*a43 - a11*a22*a44 + a23*a32*a44 - a11*a33*a44 - "
        "a22*a33*a44",
        "-a11*a22*a34*a43 - a11*a23*a32*a44 + a11*a22*a33*a44",
    };
    const std::vector<std::string> rhs{"0", "a21", "-a21*a33 - a21*a44", "a21*a33*a44 - a21*a34*a43"};
    REQUIRE(eq.order() == 4);
    CHECK(eq.subgraph == std::vector<Vertex>{1, 2, 3, 4});
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(eq.lhs[k] == poly_from(vars, lhs[k]));
    }
    REQUIRE(eq.rhs.size() == 1);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(eq.rhs.at(1)[k] == (k == 0 ? SparsePoly(vars) : poly_from(vars, rhs[k])));
    }
    CHECK(render_equation(eq) ==
          "y2^(4) + (-a11 - a22 - a33 - a44)*y2^(3) + (-a23*a32 - a34*a43 + a11*a22 + a11*a33 + a11*a44 + a22*a33 + "
          "a22*a44 + a33*a44)*y2^(2) + (a23*a32*a11 + a23*a32*a44 + a34*a43*a11 + a34*a43*a22 - a11*a22*a33 - "
          "a11*a22*a44 - a11*a33*a44 - a22*a33*a44)*y2^(1) + (-a23*a32*a11*a44 - a34*a43*a11*a22 + "
          "a11*a22*a33*a44)*y2 = (a21)*u1^(2) + (-a21*a33 - a21*a44)*u1^(1) + (-a21*a34*a43 + a21*a33*a44)*u1");
    const auto cmap = coefficient_map(model, MatrixMode::DiagonalGeneric);
    CHECK(cmap.size() == 7);
    CHECK(expected_coefficient_count(model) == 7);
}

TEST_CASE("small equations") {
    const auto one = validate({1, {}, {1}, {1}, {1}});
    const auto eq = io_equation(one, 1);
    REQUIRE(eq.order() == 1);
    CHECK(eq.lhs[0].to_string() == "a01");
    CHECK(render_equation(eq) == "y1^(1) + (a01)*y1 = u1");
    const auto cmap = coefficient_map(one);
    REQUIRE(cmap.size() == 1);
    CHECK(cmap.polys[0].to_string() == "a01");

    const auto chain = io_equation(validate({2, {{1, 2}}, {1}, {2}, {1, 2}}), 2, MatrixMode::DiagonalGeneric);
    CHECK(chain.lhs[0].to_string() == "-a11 - a22");
    CHECK(chain.lhs[1].to_string() == "a11*a22");
    CHECK(chain.rhs.at(1)[1].to_string() == "a21");
}

TEST_CASE("restriction to the output-reachable subgraph") {
    // Vertex 3 is downstream of the output and must not appear.
    const auto model = validate({3, {{1, 2}, {2, 3}}, {1}, {2}, {1, 2, 3}});
    const auto eq = io_equation(model, 2, MatrixMode::DiagonalGeneric);
    CHECK(eq.subgraph == std::vector<Vertex>{1, 2});
    CHECK(eq.order() == 2);
    CHECK(eq.lhs[0].to_string() == "-a11 - a22");

    CHECK_THROWS_AS(io_equation(validate({2, {{2, 1}}, {1}, {2}, {}}), 2), Error);
    CHECK_THROWS_AS(io_equation(validate({2, {{1, 2}}, {1}, {2}, {}}), 1), Error);
}

TEST_CASE("coefficient map ordering and provenance") {
    const auto model = validate({3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {2, 3}, {1, 2, 3}});
    const auto cmap = coefficient_map(model, MatrixMode::DiagonalGeneric);
    REQUIRE(cmap.size() == 3 + 2 + 3 + 1);
    CHECK(cmap.distinct_count() == 6);
    CHECK(expected_coefficient_count(model) == 6);
    CHECK(cmap.provenance[0].output == 2);
    CHECK(cmap.provenance[0].side == CoefficientSource::Side::Lhs);
    CHECK(cmap.provenance[0].order == 2);
    CHECK(cmap.provenance[3].side == CoefficientSource::Side::Rhs);
    CHECK(cmap.provenance[3].input == 1);
    CHECK(cmap.provenance[3].order == 1);
    CHECK(cmap.provenance[5].output == 3);
    CHECK_FALSE(cmap.minimality_warning);

    const auto loose = validate({3, {{1, 2}, {1, 3}}, {1}, {2, 3}, {1, 2, 3}});
    CHECK(coefficient_map(loose).minimality_warning);

    const auto chain = coefficient_map(validate(kChain4));
    std::vector<std::string> names;
    for (const auto &p : chain.param_order()) {
        names.push_back(p.name());
    }
    CHECK(names == std::vector<std::string>{"a21", "a23", "a32", "a34", "a43", "a01", "a02", "a03", "a04"});
}

TEST_CASE("expected coefficient count") {
    CHECK(expected_coefficient_count(validate({4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}, {1}, {1}, {1, 2, 3, 4}})) == 7);
    // hypotheses fail: leak missing on the output
    CHECK_FALSE(expected_coefficient_count(validate({4, kChain4.edges, {1}, {2}, {1}})).has_value());
    // not output connectable
    CHECK_FALSE(expected_coefficient_count(validate({3, {{1, 2}}, {1}, {2}, {1, 2}})).has_value());
}

TEST_CASE("full-matrix equation carries the extra factor") {
    const auto r = run_property("subgraph-equivalence", base_seed(), kDefaultCases, [](Rng &rng) -> std::optional<std::string> {
        for (;;) {
            const auto model = draw_reachable_model(rng, 5, rng.chance(0.5));
            const MatrixMode mode = model.all_leaks() && rng.chance(0.5) ? MatrixMode::DiagonalGeneric
                                                                         : MatrixMode::Explicit;
            const Vertex j = model.outputs().front();
            const auto small = io_equation(model, j, mode);
            if (small.subgraph.size() == static_cast<std::size_t>(model.n())) {
                continue;
            }
            const auto big = io_equation_full_matrix(model, j, mode);
            const auto &vars = small.lhs.front().variables();
            const auto A = compartmental_matrix(model, mode, vars);
            std::vector<std::size_t> rest;
            for (Vertex v = 1; v <= model.n(); ++v) {
                if (!std::binary_search(small.subgraph.begin(), small.subgraph.end(), v)) {
                    rest.push_back(static_cast<std::size_t>(v - 1));
                }
            }
            const auto as_poly = [&](const std::vector<SparsePoly> &coeffs, bool monic) {
                const auto d = SparsePoly::differential(vars);
                SparsePoly p = monic ? SparsePoly::constant(vars, 1) : SparsePoly(vars);
                for (const auto &c : coeffs) {
                    p = p * d + c;
                }
                return p;
            };
            const SparsePoly factor = as_poly(char_poly(A.principal_submatrix(rest)), true);
            if (!(as_poly(big.lhs, true) == as_poly(small.lhs, true) * factor)) {
                return "lhs differs on " + serialize_model(model);
            }
            for (const auto &[i, coeffs] : small.rhs) {
                if (!(as_poly(big.rhs.at(i), false) == as_poly(coeffs, false) * factor)) {
                    return "rhs of input " + std::to_string(i) + " differs on " + serialize_model(model);
                }
            }
            return std::nullopt;
        }
    });
    CHECK(r.ok());
}

TEST_CASE("every monomial factors through paths and cycles") {
    const auto r = run_property("path-cycle-factorization", base_seed(), kDefaultCases, [](Rng &rng) -> std::optional<std::string> {
        const auto model = draw_reachable_model(rng, 4, true);
        const auto cmap = coefficient_map(model, MatrixMode::DiagonalGeneric);
        const auto basis = path_cycle_basis(model);
        std::vector<std::size_t> column_of;
        for (const Param &p : cmap.param_order()) {
            const auto it = std::find(basis.columns.begin(), basis.columns.end(), p);
            if (it == basis.columns.end()) {
                return "parameter " + p.name() + " missing from the basis columns";
            }
            column_of.push_back(static_cast<std::size_t>(it - basis.columns.begin()));
        }
        for (const auto &poly : cmap.polys) {
            for (const auto &term : poly.terms()) {
                std::vector<int> target(basis.columns.size());
                for (std::size_t k = 0; k < column_of.size(); ++k) {
                    target[column_of[k]] = term.exponents[k];
                }
                if (!decomposes(target, basis.exponent_matrix)) {
                    return "a monomial of " + poly.to_string() + " does not factor in " + serialize_model(model);
                }
            }
        }
        return std::nullopt;
    });
    CHECK(r.ok());
}
