#pragma once

#include "oracles.hpp"

#include <functional>
#include <string>
#include <vector>

namespace identkit::testing {

inline constexpr int kDefaultCases = 200;

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> notes;

    bool ok() const { return failures == 0 && cases > 0; }
};

/// A check returns a failure description, or nothing when the case passes.
using Check = std::function<std::optional<std::string>(Rng &)>;

/// Runs `cases` checks, each with its own RNG seeded from (seed, name, case).
/// Prints one summary line with the seed.
PropertyResult run_property(const std::string &name, std::uint64_t seed, int cases, const Check &check);

/// Leak = V model with (SIOC and |Out| = 1) or (SC and |In| = 1), n in [2, max_n].
ValidatedModel draw_bound_model(Rng &rng, int max_n);
/// Random model on 1..max_n where every output is reached by some input.
ValidatedModel draw_reachable_model(Rng &rng, int max_n, bool full_leaks);

PropertyResult determinant_oracle(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult cycle_expansion(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult derivative_identity(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult coefficient_count(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult highest_order_term(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult path_cycle_rank_sioc(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult rank_bound(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult leak_removal(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult leak_addition(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult identifiable_iff_path_cycle(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult mode_consistency(std::uint64_t seed, int cases = kDefaultCases);
PropertyResult evaluation_rank_agreement(std::uint64_t seed, int cases = kDefaultCases);

struct NamedProperty {
    const char *name;
    PropertyResult (*run)(std::uint64_t, int);
};

/// The randomized suites that gate acceptance.
const std::vector<NamedProperty> &core_properties();

} // namespace identkit::testing
