#pragma once

#include "identkit/cyclespace.hpp"
#include "identkit/ioeq.hpp"
#include "identkit/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace identkit {

inline constexpr std::uint64_t kDefaultSeed = 20240101;
inline constexpr unsigned kDefaultTrials = 3;

struct RankOptions {
    std::uint64_t seed = kDefaultSeed;
    unsigned trials = kDefaultTrials;
};

/// Jacobian of the coefficient map, built with poly_partial and evaluated at
/// random integer points in [-10^4, 10^4] \ {0} modulo random primes in
/// (2^61, 2^62). Returns the largest rank seen over the trials.
std::size_t jacobian_rank(const CoefficientMap &cmap, std::uint64_t seed, unsigned trials = kDefaultTrials);

/// Same rank without expanding any polynomial. The coefficient vector of an
/// output is an invertible linear image of the values det(z I - A_H) and
/// adj(z I - A_H)_{j i} at d distinct points z, whose parameter gradients
/// come from (z I - A_H)^{-1}. Used by the census.
std::size_t evaluation_jacobian_rank(const ValidatedModel &model, MatrixMode mode, std::uint64_t seed,
                                     unsigned trials = kDefaultTrials);

/// Seed of the RNG stream for one model.
std::uint64_t model_seed(std::uint64_t seed, const ValidatedModel &model);

enum class ScreenStatus { CertifiedUnidentifiable, Inconclusive, Skipped };
std::string_view to_string(ScreenStatus s);

struct ScreenResult {
    std::string name;
    ScreenStatus status = ScreenStatus::Skipped;
    std::string detail;
};

/// Structural screens that certify unidentifiability without any rank
/// computation: leak count, exchange, direct edge, and short path.
std::vector<ScreenResult> necessary_conditions(const ValidatedModel &model);

enum class Verdict { LocallyIdentifiable, Unidentifiable, ExpectedDimension, BelowExpectedDimension, NotApplicable };
std::string_view to_string(Verdict v);

struct AnalysisReport {
    explicit AnalysisReport(ValidatedModel m) : model(std::move(m)) {}

    ValidatedModel model;
    MatrixMode mode = MatrixMode::Explicit;
    std::size_t param_count = 0;
    std::size_t coeff_count = 0;
    std::size_t jacobian_rank = 0;
    /// |E| + |In u Out|
    std::size_t expected_dimension_bound = 0;
    /// Whether that bound is a proven maximum for this graph.
    bool bound_certified = false;
    std::optional<long> expected_coefficient_count;
    /// Rank of the same graph with Leak = V (diagonal-generic), when Leak != V.
    std::optional<std::size_t> full_leak_rank;
    Verdict verdict = Verdict::NotApplicable;
    bool strongly_connected = false;
    bool sioc = false;
    bool output_connectable = false;
    bool minimality_warning = false;
    std::vector<ScreenResult> screens;
    std::uint64_t seed = 0;
    unsigned trials = 0;
};

AnalysisReport classify_identifiability(const ValidatedModel &model, MatrixMode mode = MatrixMode::Explicit,
                                        const RankOptions &opts = {});

std::string report_to_json(const AnalysisReport &report);
std::string report_to_text(const AnalysisReport &report);

enum class BoundHypotheses {
    /// (SIOC and |Out| = 1) or (SC and |In| = 1): |E| + |In u Out| is the maximum.
    Certified,
    /// Output connectable with |Out| = 1: the single-output relaxation.
    OutputConnectable,
    NotMet,
};
std::string_view to_string(BoundHypotheses h);

struct ExpectedDimensionResult {
    bool holds = false;
    std::size_t rank = 0;
    std::size_t bound = 0;
    BoundHypotheses hypotheses = BoundHypotheses::NotMet;
};

/// Rank of the Leak = V model in diagonal-generic mode against |E| + |In u Out|.
/// The result is computed even when the hypotheses fail; check `hypotheses`.
ExpectedDimensionResult expected_dimension_test(const ValidatedModel &model, const RankOptions &opts = {});

BoundHypotheses bound_hypotheses(const ValidatedModel &model);

struct PathCycleResult {
    bool identifiable = false;
    std::size_t rank = 0;
    PathCycleBasis basis;
};

/// Throws HypothesesNotMet unless Leak = V and ((SIOC and |Out| = 1) or
/// (SC and |In| = 1)).
PathCycleResult is_identifiable_path_cycle_model(const ValidatedModel &model, const RankOptions &opts = {});

/// |E| + |In u Out| <= expected coefficient count, evaluated with leaks on
/// In u Out added. Throws HypothesesNotMet when the count does not apply.
bool edge_formula_check(const ValidatedModel &model);

/// Output connectable, |Out| = 1, Leak = V; true when the rank reaches
/// |E| + |In u Out|, which makes every a_ii locally identifiable.
bool self_cycles_identifiable(const ValidatedModel &model, const RankOptions &opts = {});

} // namespace identkit
