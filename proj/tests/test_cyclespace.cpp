#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "identkit/cyclespace.hpp"
#include "identkit/graphprops.hpp"
#include "properties.hpp"

using namespace identkit;
using namespace identkit::testing;

namespace {

ValidatedModel fixture(const std::string &name) { return load_model(std::string(IDENTKIT_FIXTURES) + "/" + name); }

ValidatedModel complete(int n) {
    std::vector<Edge> edges;
    for (int u = 1; u <= n; ++u) {
        for (int v = 1; v <= n; ++v) {
            if (u != v) {
                edges.push_back({u, v});
            }
        }
    }
    return validate({n, edges, {1}, {1}, {}});
}

std::vector<std::string> monomials(const PathCycleBasis &b) {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < b.size(); ++r) {
        out.push_back(b.monomial(r));
    }
    return out;
}

} // namespace

TEST_CASE("cycles") {
    const auto chain = enumerate_simple_cycles(fixture("ex2_1.json"));
    REQUIRE(chain.size() == 2);
    CHECK(chain[0].vertices == std::vector<Vertex>{2, 3});
    CHECK(chain[1].vertices == std::vector<Vertex>{3, 4});
    CHECK(enumerate_simple_cycles(validate({3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1}, {}})).size() == 1);
    CHECK(enumerate_simple_cycles(complete(3)).size() == 5);
    CHECK(enumerate_simple_cycles(complete(4)).size() == 20);
    CHECK_THROWS_AS(enumerate_simple_cycles(complete(6), 10), Error);
}

TEST_CASE("input-output paths") {
    const auto chain = enumerate_io_paths(fixture("ex2_1.json"));
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].vertices == std::vector<Vertex>{1, 2});

    const auto star = enumerate_io_paths(fixture("ex2_19_m.json"));
    std::vector<std::vector<Vertex>> got;
    for (const auto &p : star) {
        got.push_back(p.vertices);
    }
    CHECK(got == std::vector<std::vector<Vertex>>{{1, 2, 3}, {1, 2, 4}, {2, 3}, {2, 4}});

    CHECK(enumerate_io_paths(validate({1, {}, {1}, {1}, {1}})).empty());
    CHECK_THROWS_AS(enumerate_io_paths(validate({6, complete(6).edges(), {1}, {2}, {}}), 5), Error);
}

TEST_CASE("path/cycle rank") {
    const auto chain = path_cycle_basis(fixture("ex2_1.json"));
    CHECK(chain.independent_count == 7);
    CHECK(monomials(chain) ==
          std::vector<std::string>{"a11", "a22", "a33", "a44", "a23*a32", "a34*a43", "a21"});

    const auto m = path_cycle_basis(fixture("ex2_19_m.json"));
    CHECK(m.size() == 4 + 3 + 4);
    CHECK(m.independent_count == 10);
    CHECK(path_cycle_rank(fixture("ex2_19_mprime.json")) == 12);
}

TEST_CASE("incidence matrix") {
    const auto chain = fixture("ex2_1.json");
    const auto E = incidence_matrix(chain);
    REQUIRE(E.size() == 4);
    for (std::size_t c = 0; c < chain.edge_count(); ++c) {
        int plus = 0, minus = 0;
        for (const auto &row : E) {
            plus += row[c] == 1;
            minus += row[c] == -1;
        }
        CHECK(plus == 1);
        CHECK(minus == 1);
    }
    CHECK(E[0][0] == -1);
    CHECK(E[1][0] == 1);
    CHECK(incidence_rank(chain) == 3);
    CHECK(incidence_rank(validate({4, {{1, 2}, {3, 4}}, {1}, {1}, {}})) == 2);
    CHECK(incidence_rank(validate({2, {{1, 2}}, {1}, {1}, {}})) == 1);
}

TEST_CASE("enumeration against brute force") {
    const auto r = run_property("cycle-path-enumeration", base_seed(), kDefaultCases, [](Rng &rng) -> std::optional<std::string> {
        const int n = rng.range(1, 6);
        const auto edges = random_edges(rng, n, 0.2 + 0.1 * rng.range(0, 4));
        const auto model = validate({n, edges, random_subset(rng, n, 1, n), random_subset(rng, n, 1, n), {}});
        std::vector<std::vector<Vertex>> cycles;
        for (const auto &c : enumerate_simple_cycles(model)) {
            cycles.push_back(c.vertices);
        }
        if (cycles != brute_cycles(n, edges)) {
            return "cycles differ on " + serialize_model(model);
        }
        std::vector<std::vector<Vertex>> paths, expected;
        for (const auto &p : enumerate_io_paths(model)) {
            paths.push_back(p.vertices);
        }
        for (Vertex i : model.inputs()) {
            for (Vertex j : model.outputs()) {
                if (i != j) {
                    for (auto &p : brute_paths(n, edges, i, j)) {
                        expected.push_back(std::move(p));
                    }
                }
            }
        }
        std::sort(paths.begin(), paths.end());
        std::sort(expected.begin(), expected.end());
        if (paths != expected) {
            return "paths differ on " + serialize_model(model);
        }
        const auto basis = path_cycle_basis(model);
        for (const auto &row : basis.exponent_matrix) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (row[k] != 0 && row[k] != 1) {
                    return "exponent outside {0, 1}";
                }
            }
        }
        return std::nullopt;
    });
    CHECK(r.ok());
}

TEST_CASE("cycle space dimensions") {
    const auto r = run_property("cycle-space", base_seed(), kDefaultCases, [](Rng &rng) -> std::optional<std::string> {
        for (;;) {
            const int n = rng.range(2, 6);
            const auto edges = random_edges(rng, n, 0.3 + 0.1 * rng.range(0, 3));
            if (rng.chance(0.5)) {
                if (!brute_strongly_connected(n, edges)) {
                    continue;
                }
                const auto model = validate({n, edges, {1}, {1}, {}});
                const std::size_t kernel = edges.size() - static_cast<std::size_t>(n) + 1;
                if (cycle_indicator_rank(model) != kernel || incidence_rank(model) != static_cast<std::size_t>(n - 1)) {
                    return "cycle space dimension wrong on " + serialize_model(model);
                }
                return std::nullopt;
            }
            const Vertex j = rng.range(1, n);
            const auto in = random_subset(rng, n, 1, n);
            const auto model = validate({n, edges, in, {j}, {}});
            if (!is_output_connectable(model)) {
                continue;
            }
            if (path_cycle_rank(model) > edges.size() + model.in_out_union_size()) {
                return "rank above |E| + |In u Out| on " + serialize_model(model);
            }
            return std::nullopt;
        }
    });
    CHECK(r.ok());
}
