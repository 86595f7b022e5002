#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "identkit/graphprops.hpp"
#include "properties.hpp"

using namespace identkit;
using namespace identkit::testing;

namespace {

const std::vector<Edge> kChain4{{1, 2}, {2, 3}, {3, 2}, {3, 4}, {4, 3}};

ValidatedModel make(int n, std::vector<Edge> edges, std::vector<Vertex> in, std::vector<Vertex> out) {
    return validate({n, std::move(edges), std::move(in), std::move(out), {}});
}

} // namespace

TEST_CASE("strong connectivity") {
    CHECK_FALSE(is_strongly_connected(make(4, kChain4, {1}, {2})));
    CHECK(is_strongly_connected(make(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1})));
    CHECK(is_strongly_connected(make(5, {{1, 2}, {2, 3}, {3, 1}, {2, 4}, {4, 5}, {5, 3}}, {1}, {1})));
    CHECK(is_strongly_connected(make(1, {}, {1}, {1})));
}

TEST_CASE("output-reachable subgraph") {
    const auto chain = output_reachable_subgraph(make(4, kChain4, {1}, {2}), 2);
    CHECK(chain.vertices == std::vector<Vertex>{1, 2, 3, 4});

    const auto fan = output_reachable_subgraph(make(3, {{1, 2}, {3, 2}, {3, 1}}, {1}, {2}), 2);
    CHECK(fan.vertices == std::vector<Vertex>{1, 2, 3});

    const auto lone = output_reachable_subgraph(make(3, {{1, 2}}, {1}, {3}), 3);
    CHECK(lone.vertices == std::vector<Vertex>{3});
    CHECK(lone.model.n == 1);
    CHECK(lone.model.inputs.empty());

    const auto relabelled = output_reachable_subgraph(make(4, {{2, 4}, {4, 2}, {1, 3}}, {2}, {4}), 4);
    CHECK(relabelled.vertices == std::vector<Vertex>{2, 4});
    CHECK(relabelled.model.edges.size() == 2);
    CHECK(relabelled.model.inputs == std::vector<Vertex>{1});
    CHECK(relabelled.model.outputs == std::vector<Vertex>{2});

    CHECK_THROWS_AS(output_reachable_subgraph(make(2, {{1, 2}}, {1}, {2}), 1), Error);
}

TEST_CASE("output connectable") {
    CHECK(is_output_connectable(make(3, {{1, 2}, {3, 2}}, {1}, {2})));
    CHECK_FALSE(is_output_connectable(make(2, {}, {1}, {1})));
    const auto cycle = make(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {2, 3});
    CHECK(is_output_connectable(cycle));
    CHECK(is_output_connectable_to_every_output(cycle));
    CHECK_FALSE(is_output_connectable_to_every_output(make(3, {{1, 2}, {1, 3}}, {1}, {2, 3})));
}

TEST_CASE("strongly input-output connected") {
    CHECK(is_strongly_input_output_connected(make(4, kChain4, {1}, {2})));
    CHECK_FALSE(is_strongly_input_output_connected(make(3, {{1, 2}, {3, 2}}, {1}, {2})));
    CHECK(is_strongly_input_output_connected(make(2, {{1, 2}}, {1}, {2})));
    CHECK_FALSE(is_strongly_input_output_connected(make(3, {{1, 2}}, {1}, {2})));
}

TEST_CASE("dist") {
    const auto chain = make(4, kChain4, {1}, {2});
    CHECK(dist(chain, 1, 2) == 1);
    CHECK(dist(chain, 1, 4) == 3);
    CHECK_FALSE(dist(chain, 2, 1).has_value());
    CHECK(dist(chain, 3, 3) == 0);
    CHECK(dist(make(4, {{1, 2}, {2, 3}, {3, 4}, {4, 2}, {3, 2}}, {1}, {2}), 1, 2) == 1);
}

TEST_CASE("inductive strong connectivity") {
    CHECK_FALSE(is_inductively_strongly_connected(make(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1}), 1).holds);
    const auto r = is_inductively_strongly_connected(make(3, {{1, 2}, {2, 1}, {2, 3}, {3, 2}}, {1}, {1}), 1);
    CHECK(r.holds);
    CHECK(r.ordering == std::vector<Vertex>{1, 2, 3});
    auto plus = kChain4;
    plus.push_back({2, 1});
    const auto p = is_inductively_strongly_connected(make(4, plus, {1}, {2}), 1);
    CHECK(p.holds);
    CHECK(p.ordering == std::vector<Vertex>{1, 2, 3, 4});
}

TEST_CASE("almost inductively strongly connected") {
    CHECK(satisfies_almost_isc(make(4, {{1, 2}, {2, 3}, {3, 4}, {4, 2}, {3, 2}}, {1}, {2})));
    CHECK(satisfies_almost_isc(make(4, kChain4, {1}, {2})));
    CHECK(satisfies_almost_isc(make(2, {{1, 2}}, {1}, {2})));
    CHECK_FALSE(satisfies_almost_isc(make(3, {{1, 2}, {2, 3}, {3, 2}, {2, 1}}, {1}, {2})));
    CHECK_THROWS_AS(satisfies_almost_isc(make(2, {{1, 2}}, {1, 2}, {2})), Error);
    CHECK_THROWS_AS(satisfies_almost_isc(make(2, {{1, 2}}, {1}, {1})), Error);
}

TEST_CASE("predicates against brute force") {
    const auto r = run_property("graph-predicates", base_seed(), 300, [](Rng &rng) -> std::optional<std::string> {
        const int n = rng.range(1, 6);
        const auto edges = random_edges(rng, n, 0.15 + 0.1 * rng.range(0, 4));
        const auto in = random_subset(rng, n, 1, n);
        const auto out = random_subset(rng, n, 1, n);
        const auto model = make(n, edges, in, out);
        const bool sc = is_strongly_connected(model);
        const bool sioc = is_strongly_input_output_connected(model);
        if (sc != brute_strongly_connected(n, edges)) {
            return "strong connectivity differs on " + serialize_model(model);
        }
        if (sioc != brute_sioc(n, edges, in, out)) {
            return "SIOC differs on " + serialize_model(model);
        }
        for (Vertex a = 1; a <= n; ++a) {
            for (Vertex b = 1; b <= n; ++b) {
                if (dist(model, a, b) != brute_dist(n, edges, a, b)) {
                    return "dist differs on " + serialize_model(model);
                }
            }
        }
        // A graph is SIOC with one output j iff adding j -> every input makes it
        // strongly connected; symmetrically for one input.
        if (out.size() == 1 || in.size() == 1) {
            auto closed = edges;
            for (Vertex j : out) {
                for (Vertex i : in) {
                    if (i != j && std::find(closed.begin(), closed.end(), Edge{j, i}) == closed.end()) {
                        closed.push_back({j, i});
                    }
                }
            }
            if (sioc != brute_strongly_connected(n, closed)) {
                return "closing edges disagree with SIOC on " + serialize_model(model);
            }
        }
        if (out.size() == 1 && sioc && !is_output_connectable(model)) {
            return "SIOC but not output connectable";
        }
        if (sc && !is_output_connectable_to_every_output(model)) {
            return "SC but not output connectable to every output";
        }
        if (sc && n > 1 && static_cast<int>(edges.size()) < n) {
            return "SC with fewer than |V| edges";
        }
        if (sioc && in.size() == 1 && out.size() == 1 && in != out && static_cast<int>(edges.size()) < n - 1) {
            return "SIOC with fewer than |V| - 1 edges";
        }
        return std::nullopt;
    });
    CHECK(r.ok());
}
