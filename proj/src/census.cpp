#include "identkit/census.hpp"

#include "identkit/graphprops.hpp"
#include "identkit/modular.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace identkit {

std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw Error(ErrorCode::CapExceeded, "binomial coefficient exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

GraphEnumerator::GraphEnumerator(int n, int m) : n_(n), m_(m) {
    for (Vertex u = 1; u <= n; ++u) {
        for (Vertex v = 1; v <= n; ++v) {
            if (u != v) {
                slots_.push_back({u, v});
            }
        }
    }
    if (m < 0 || m > static_cast<int>(slots_.size())) {
        throw Error(ErrorCode::PreconditionViolated, "edge count outside 0..n(n-1)");
    }
    total_ = binomial(static_cast<unsigned>(slots_.size()), static_cast<unsigned>(m));
}

std::vector<int> GraphEnumerator::unrank(std::uint64_t index) const {
    if (index >= total_) {
        throw Error(ErrorCode::PreconditionViolated, "graph index out of range");
    }
    const int N = static_cast<int>(slots_.size());
    std::vector<int> comb;
    comb.reserve(static_cast<std::size_t>(m_));
    int next = 0;
    for (int pos = 0; pos < m_; ++pos) {
        for (int c = next;; ++c) {
            // subsets whose entry at pos is c
            const std::uint64_t block = binomial(static_cast<unsigned>(N - c - 1), static_cast<unsigned>(m_ - pos - 1));
            if (index < block) {
                comb.push_back(c);
                next = c + 1;
                break;
            }
            index -= block;
        }
    }
    return comb;
}

bool GraphEnumerator::next(std::vector<int> &comb) const {
    const int N = static_cast<int>(slots_.size());
    int i = m_ - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == N - m_ + i) {
        --i;
    }
    if (i < 0) {
        return false;
    }
    ++comb[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < m_; ++k) {
        comb[static_cast<std::size_t>(k)] = comb[static_cast<std::size_t>(k - 1)] + 1;
    }
    return true;
}

std::vector<Edge> GraphEnumerator::edges_of(const std::vector<int> &comb) const {
    std::vector<Edge> es;
    es.reserve(comb.size());
    for (int c : comb) {
        es.push_back(slots_[static_cast<std::size_t>(c)]);
    }
    return es;
}

void enumerate_graphs(int n, int m, const std::function<void(const std::vector<Edge> &)> &visit) {
    const GraphEnumerator en(n, m);
    if (en.total() == 0) {
        return;
    }
    std::vector<int> comb = en.unrank(0);
    do {
        visit(en.edges_of(comb));
    } while (en.next(comb));
}

std::string_view column_name(CensusColumn c) {
    switch (c) {
    case CensusColumn::StronglyConnected: return "strongly_connected";
    case CensusColumn::ExpdimIn1Out1: return "expdim_in1_out1";
    case CensusColumn::ExpdimIn1Out23: return "expdim_in1_out23";
    case CensusColumn::SiocIn1Out2: return "sioc_in1_out2";
    case CensusColumn::ExpdimIn1Out2: return "expdim_in1_out2";
    case CensusColumn::SiocIn13Out2: return "sioc_in13_out2";
    case CensusColumn::ExpdimIn13Out2: return "expdim_in13_out2";
    }
    return "";
}

std::array<bool, kCensusColumns> census_na_pattern(int n, int m) {
    std::array<bool, kCensusColumns> na{};
    auto set = [&](CensusColumn c, bool v) { na[static_cast<std::size_t>(c)] = v; };
    // Strong connectivity needs m >= n; weak connectivity m >= n - 1.
    const bool no_sc = m < n;
    const bool no_sioc = m < n - 1 || n < 2;
    const bool no_three = n < 3;
    // Largest possible coefficient count is reached with every dist = 1:
    // 2n - 1 for one input/output pair, 3n - 2 for the two-pair columns.
    set(CensusColumn::StronglyConnected, no_sc);
    set(CensusColumn::ExpdimIn1Out1, no_sc || m + 1 > 2 * n - 1);
    set(CensusColumn::ExpdimIn1Out23, no_sc || no_three || m + 3 > 3 * n - 2);
    set(CensusColumn::SiocIn1Out2, no_sioc);
    set(CensusColumn::ExpdimIn1Out2, no_sioc || m + 2 > 2 * n - 1);
    set(CensusColumn::SiocIn13Out2, no_sioc || no_three);
    set(CensusColumn::ExpdimIn13Out2, no_sioc || no_three || m + 3 > 3 * n - 2);
    return na;
}

std::uint64_t census_graph_seed(std::uint64_t seed, int n, int m, std::uint64_t index) {
    return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(n) * 1000 + static_cast<std::uint64_t>(m)), index);
}

namespace {

bool na_at(const std::array<bool, kCensusColumns> &na, CensusColumn c) { return na[static_cast<std::size_t>(c)]; }

ValidatedModel full_leak_model(int n, const std::vector<Edge> &edges, std::vector<Vertex> in, std::vector<Vertex> out) {
    std::vector<Vertex> all(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) {
        all[static_cast<std::size_t>(v - 1)] = v;
    }
    return validate({n, edges, std::move(in), std::move(out), std::move(all)});
}

struct ConfigOutcome {
    bool expected = false;
    std::size_t rank = 0;
    bool violated = false;
};

ConfigOutcome evaluate_config(int n, const std::vector<Edge> &edges, std::vector<Vertex> in, std::vector<Vertex> out,
                              std::uint64_t seed, unsigned trials) {
    const ValidatedModel model = full_leak_model(n, edges, std::move(in), std::move(out));
    ConfigOutcome r;
    try {
        r.rank = evaluation_jacobian_rank(model, MatrixMode::DiagonalGeneric, seed, trials);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::NoInputReachesOutput) {
            throw;
        }
        return r;
    }
    const std::size_t bound = edges.size() + model.in_out_union_size();
    r.expected = r.rank == bound;
    r.violated = r.rank > bound;
    return r;
}

std::string graph_text(const std::vector<Edge> &edges) {
    std::string s = "{";
    for (std::size_t k = 0; k < edges.size(); ++k) {
        s += (k ? "," : "") + std::to_string(edges[k].src) + "->" + std::to_string(edges[k].dst);
    }
    return s + "}";
}

struct BlockResult {
    std::array<std::uint64_t, kCensusColumns> counts{};
    std::uint64_t graphs = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> examples;
};

BlockResult run_block(const GraphEnumerator &en, int n, int m, std::uint64_t begin, std::uint64_t end,
                      const CensusOptions &opts, const std::array<bool, kCensusColumns> &na) {
    BlockResult br;
    std::vector<int> comb = en.unrank(begin);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        const std::vector<Edge> edges = en.edges_of(comb);
        const GraphClassification gc = classify_graph(n, edges, census_graph_seed(opts.seed, n, m, idx), opts.trials, na);
        auto bump = [&](CensusColumn c, bool v) { br.counts[static_cast<std::size_t>(c)] += v ? 1 : 0; };
        bump(CensusColumn::StronglyConnected, gc.strongly_connected);
        bump(CensusColumn::ExpdimIn1Out1, gc.expdim_in1_out1.value_or(false));
        bump(CensusColumn::ExpdimIn1Out23, gc.expdim_in1_out23.value_or(false));
        bump(CensusColumn::SiocIn1Out2, gc.sioc_in1_out2);
        bump(CensusColumn::ExpdimIn1Out2, gc.expdim_in1_out2.value_or(false));
        bump(CensusColumn::SiocIn13Out2, gc.sioc_in13_out2);
        bump(CensusColumn::ExpdimIn13Out2, gc.expdim_in13_out2.value_or(false));
        if (gc.bound_violated) {
            ++br.violations;
            if (br.examples.size() < 10) {
                br.examples.push_back(graph_text(edges));
            }
        }
        ++br.graphs;
        if (idx + 1 < end) {
            en.next(comb);
        }
    }
    return br;
}

nlohmann::json block_to_json(const BlockResult &b) {
    return {{"counts", b.counts}, {"graphs", b.graphs}, {"violations", b.violations}, {"examples", b.examples}};
}

BlockResult block_from_json(const nlohmann::json &j) {
    BlockResult b;
    b.counts = j.at("counts").get<std::array<std::uint64_t, kCensusColumns>>();
    b.graphs = j.at("graphs").get<std::uint64_t>();
    b.violations = j.at("violations").get<std::uint64_t>();
    b.examples = j.at("examples").get<std::vector<std::string>>();
    return b;
}

class Checkpoint {
public:
    Checkpoint(const CensusOptions &opts, int n, int m) : opts_(opts), n_(n), m_(m) {
        if (opts.checkpoint_dir.empty()) {
            return;
        }
        std::filesystem::create_directories(opts.checkpoint_dir);
        path_ = std::filesystem::path(opts.checkpoint_dir) /
                ("census_n" + std::to_string(n) + "_m" + std::to_string(m) + ".json");
        std::ifstream in(path_);
        if (!in) {
            return;
        }
        try {
            const auto doc = nlohmann::json::parse(in);
            if (doc.at("seed").get<std::uint64_t>() != opts.seed || doc.at("trials").get<unsigned>() != opts.trials ||
                doc.at("block_size").get<std::uint64_t>() != opts.block_size) {
                return;
            }
            for (const auto &[key, value] : doc.at("blocks").items()) {
                done_.emplace(std::stoull(key), block_from_json(value));
            }
        } catch (const std::exception &) {
            done_.clear(); // unreadable checkpoint: start over
        }
    }

    const std::map<std::uint64_t, BlockResult> &done() const { return done_; }

    void record(std::uint64_t block, const BlockResult &result) {
        std::lock_guard lock(mutex_);
        done_.emplace(block, result);
        if (path_.empty()) {
            return;
        }
        nlohmann::json doc{{"n", n_},
                           {"m", m_},
                           {"seed", opts_.seed},
                           {"trials", opts_.trials},
                           {"block_size", opts_.block_size},
                           {"blocks", nlohmann::json::object()}};
        for (const auto &[idx, b] : done_) {
            doc["blocks"][std::to_string(idx)] = block_to_json(b);
        }
        const auto tmp = path_.string() + ".tmp";
        {
            std::ofstream out(tmp);
            out << doc.dump();
        }
        std::filesystem::rename(tmp, path_);
    }

private:
    const CensusOptions &opts_;
    int n_;
    int m_;
    std::filesystem::path path_;
    std::map<std::uint64_t, BlockResult> done_;
    std::mutex mutex_;
};

} // namespace

GraphClassification classify_graph(int n, const std::vector<Edge> &edges, std::uint64_t graph_seed, unsigned trials,
                                   const std::array<bool, kCensusColumns> &na) {
    GraphClassification gc;
    Digraph g(n);
    for (const Edge &e : edges) {
        g.add_edge(e.src, e.dst);
    }
    auto run = [&](std::size_t slot, std::vector<Vertex> in, std::vector<Vertex> out) {
        const ConfigOutcome r = evaluate_config(n, edges, std::move(in), std::move(out), mix_seed(graph_seed, slot), trials);
        gc.ranks[slot] = r.rank;
        gc.bound_violated = gc.bound_violated || r.violated;
        return r.expected;
    };

    gc.strongly_connected = !na_at(na, CensusColumn::StronglyConnected) && is_strongly_connected(g);
    if (gc.strongly_connected) {
        if (!na_at(na, CensusColumn::ExpdimIn1Out1)) {
            gc.expdim_in1_out1 = run(0, {1}, {1});
        }
        if (!na_at(na, CensusColumn::ExpdimIn1Out23)) {
            gc.expdim_in1_out23 = run(1, {1}, {2, 3});
        }
    }
    if (!na_at(na, CensusColumn::SiocIn1Out2)) {
        gc.sioc_in1_out2 = is_strongly_input_output_connected(g, {1}, {2});
        if (gc.sioc_in1_out2 && !na_at(na, CensusColumn::ExpdimIn1Out2)) {
            gc.expdim_in1_out2 = run(2, {1}, {2});
        }
    }
    if (!na_at(na, CensusColumn::SiocIn13Out2)) {
        gc.sioc_in13_out2 = is_strongly_input_output_connected(g, {1, 3}, {2});
        if (gc.sioc_in13_out2 && !na_at(na, CensusColumn::ExpdimIn13Out2)) {
            gc.expdim_in13_out2 = run(3, {1, 3}, {2});
        }
    }
    return gc;
}

CensusRow census_row(int n, int m, const CensusOptions &opts) {
    const GraphEnumerator en(n, m);
    const auto na = census_na_pattern(n, m);
    CensusRow row;
    row.n = n;
    row.m = m;
    row.total = en.total();

    const std::uint64_t block = std::max<std::uint64_t>(opts.block_size, 1);
    const std::uint64_t blocks = (en.total() + block - 1) / block;
    Checkpoint checkpoint(opts, n, m);
    std::vector<std::uint64_t> todo;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        if (!checkpoint.done().count(b)) {
            todo.push_back(b);
        }
    }

    std::atomic<std::size_t> cursor{0};
    std::atomic<std::uint64_t> finished{0};
    for (const auto &[idx, b] : checkpoint.done()) {
        finished += b.graphs;
    }
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (std::size_t k = cursor++; k < todo.size(); k = cursor++) {
                const std::uint64_t b = todo[k];
                const std::uint64_t begin = b * block;
                const std::uint64_t end = std::min(en.total(), begin + block);
                const BlockResult r = run_block(en, n, m, begin, end, opts, na);
                checkpoint.record(b, r);
                const std::uint64_t now = finished += r.graphs;
                if (opts.progress) {
                    std::lock_guard lock(progress_mutex);
                    opts.progress(now, en.total());
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            failure = std::current_exception();
            cursor = todo.size();
        }
    };
    const unsigned jobs = opts.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.jobs;
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::array<std::uint64_t, kCensusColumns> sums{};
    for (const auto &[idx, b] : checkpoint.done()) {
        for (std::size_t c = 0; c < kCensusColumns; ++c) {
            sums[c] += b.counts[c];
        }
        row.enumerated += b.graphs;
        row.bound_violations += b.violations;
        for (const auto &ex : b.examples) {
            if (row.violation_examples.size() < 10) {
                row.violation_examples.push_back(ex);
            }
        }
    }
    for (std::size_t c = 0; c < kCensusColumns; ++c) {
        if (!na[c]) {
            row.counts[c] = sums[c];
        }
    }
    return row;
}

std::vector<CensusRow> census_table(const std::vector<int> &ns, const std::vector<int> &ms, const CensusOptions &opts) {
    std::vector<CensusRow> rows;
    for (int n : ns) {
        for (int m : ms) {
            if (m >= 0 && m <= n * (n - 1)) {
                rows.push_back(census_row(n, m, opts));
            }
        }
    }
    return rows;
}

std::string census_csv_header() {
    std::string h = "n,m,total";
    for (std::size_t c = 0; c < kCensusColumns; ++c) {
        h += ",";
        h += column_name(static_cast<CensusColumn>(c));
    }
    return h;
}

std::string census_csv_line(const CensusRow &row) {
    std::string s = std::to_string(row.n) + "," + std::to_string(row.m) + "," + std::to_string(row.total);
    for (const auto &cell : row.counts) {
        s += "," + (cell ? std::to_string(*cell) : std::string("NA"));
    }
    return s;
}

void write_census_csv(std::ostream &os, const std::vector<CensusRow> &rows) {
    os << census_csv_header() << "\n";
    for (const auto &r : rows) {
        os << census_csv_line(r) << "\n";
    }
}

std::string census_sidecar_json(const std::vector<CensusRow> &rows, const CensusOptions &opts, double seconds) {
    nlohmann::ordered_json doc;
    doc["seed"] = opts.seed;
    doc["trials"] = opts.trials;
    doc["runtime_seconds"] = seconds;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json row;
        row["n"] = r.n;
        row["m"] = r.m;
        row["total"] = r.total;
        row["enumerated"] = r.enumerated;
        for (std::size_t c = 0; c < kCensusColumns; ++c) {
            const std::string key(column_name(static_cast<CensusColumn>(c)));
            row[key] = r.counts[c] ? nlohmann::ordered_json(*r.counts[c]) : nlohmann::ordered_json("NA");
        }
        row["bound_violations"] = r.bound_violations;
        row["violation_examples"] = r.violation_examples;
        doc["rows"].push_back(row);
    }
    return doc.dump(2);
}

std::vector<std::string> census_discrepancy_report(int n, int m, const std::vector<std::uint64_t> &seeds,
                                                   unsigned trials) {
    std::vector<std::string> report;
    const GraphEnumerator en(n, m);
    const auto na = census_na_pattern(n, m);
    if (en.total() == 0 || seeds.empty()) {
        return report;
    }
    std::vector<int> comb = en.unrank(0);
    std::uint64_t idx = 0;
    do {
        const std::vector<Edge> edges = en.edges_of(comb);
        std::vector<GraphClassification> runs;
        for (std::uint64_t s : seeds) {
            runs.push_back(classify_graph(n, edges, census_graph_seed(s, n, m, idx), trials, na));
        }
        const bool differ = std::any_of(runs.begin(), runs.end(), [&](const GraphClassification &g) {
            return g.ranks != runs.front().ranks;
        });
        if (differ) {
            std::ostringstream os;
            os << "graph #" << idx << " " << graph_text(edges) << " ranks by seed:";
            for (std::size_t k = 0; k < seeds.size(); ++k) {
                os << " [" << seeds[k] << ": " << runs[k].ranks[0] << "," << runs[k].ranks[1] << ","
                   << runs[k].ranks[2] << "," << runs[k].ranks[3] << "]";
            }
            report.push_back(os.str());
        }
        ++idx;
    } while (en.next(comb));
    return report;
}

} // namespace identkit
