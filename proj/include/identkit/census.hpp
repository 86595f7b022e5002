#pragma once

#include "identkit/identcore.hpp"
#include "identkit/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace identkit {

/// C(n, k) in 64 bits; throws CapExceeded on overflow.
std::uint64_t binomial(unsigned n, unsigned k);

/// Labeled simple digraphs on n vertices with m edges. Edge slots are the
/// ordered pairs (u, v), u != v, in lexicographic order; graphs are the
/// m-subsets of slots in lexicographic order.
class GraphEnumerator {
public:
    GraphEnumerator(int n, int m);

    std::uint64_t total() const noexcept { return total_; }
    const std::vector<Edge> &slots() const noexcept { return slots_; }

    /// Slot indices of graph number `index`.
    std::vector<int> unrank(std::uint64_t index) const;
    /// Advances to the next subset; false after the last.
    bool next(std::vector<int> &combination) const;
    std::vector<Edge> edges_of(const std::vector<int> &combination) const;

private:
    int n_;
    int m_;
    std::uint64_t total_;
    std::vector<Edge> slots_;
};

void enumerate_graphs(int n, int m, const std::function<void(const std::vector<Edge> &)> &visit);

enum class CensusColumn {
    StronglyConnected,
    ExpdimIn1Out1,
    ExpdimIn1Out23,
    SiocIn1Out2,
    ExpdimIn1Out2,
    SiocIn13Out2,
    ExpdimIn13Out2,
};
inline constexpr std::size_t kCensusColumns = 7;
std::string_view column_name(CensusColumn c);

struct CensusRow {
    int n = 0;
    int m = 0;
    std::uint64_t total = 0;
    std::uint64_t enumerated = 0;
    /// nullopt is NA.
    std::array<std::optional<std::uint64_t>, kCensusColumns> counts{};
    /// Graphs whose rank exceeded |E| + |In u Out| (must stay empty).
    std::uint64_t bound_violations = 0;
    std::vector<std::string> violation_examples;

    std::optional<std::uint64_t> &operator[](CensusColumn c) { return counts[static_cast<std::size_t>(c)]; }
    const std::optional<std::uint64_t> &operator[](CensusColumn c) const {
        return counts[static_cast<std::size_t>(c)];
    }
};

/// Which cells are NA at (n, m), from hypothesis impossibility alone.
std::array<bool, kCensusColumns> census_na_pattern(int n, int m);

struct CensusOptions {
    std::uint64_t seed = kDefaultSeed;
    unsigned trials = kDefaultTrials;
    unsigned jobs = 1;
    std::uint64_t block_size = 10000;
    /// Directory for per-row checkpoint files; empty disables them.
    std::string checkpoint_dir;
    /// Called after each finished block with (done, total) graph counts.
    std::function<void(std::uint64_t, std::uint64_t)> progress;
};

/// Per-graph classification; exposed for tests and the discrepancy report.
struct GraphClassification {
    bool strongly_connected = false;
    std::optional<bool> expdim_in1_out1;
    std::optional<bool> expdim_in1_out23;
    bool sioc_in1_out2 = false;
    std::optional<bool> expdim_in1_out2;
    bool sioc_in13_out2 = false;
    std::optional<bool> expdim_in13_out2;
    std::array<std::size_t, 4> ranks{};
    bool bound_violated = false;
};

GraphClassification classify_graph(int n, const std::vector<Edge> &edges, std::uint64_t graph_seed, unsigned trials,
                                   const std::array<bool, kCensusColumns> &na);

std::uint64_t census_graph_seed(std::uint64_t seed, int n, int m, std::uint64_t index);

CensusRow census_row(int n, int m, const CensusOptions &opts = {});
std::vector<CensusRow> census_table(const std::vector<int> &ns, const std::vector<int> &ms,
                                    const CensusOptions &opts = {});

std::string census_csv_header();
std::string census_csv_line(const CensusRow &row);
void write_census_csv(std::ostream &os, const std::vector<CensusRow> &rows);
std::string census_sidecar_json(const std::vector<CensusRow> &rows, const CensusOptions &opts, double seconds);

/// Graphs at (n, m) whose expected-dimension verdicts differ between seeds,
/// with their ranks; empty when every seed agrees.
std::vector<std::string> census_discrepancy_report(int n, int m, const std::vector<std::uint64_t> &seeds,
                                                   unsigned trials = kDefaultTrials);

} // namespace identkit
