#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "properties.hpp"

using namespace identkit::testing;

TEST_CASE("randomized suites") {
    for (const auto &p : core_properties()) {
        SUBCASE(p.name) {
            const PropertyResult r = p.run(base_seed(), kDefaultCases);
            INFO("seed " << r.seed);
            INFO("first failure: " << (r.notes.empty() ? "none" : r.notes.front()));
            CHECK(r.cases >= 200);
            CHECK(r.failures == 0);
        }
    }
}
