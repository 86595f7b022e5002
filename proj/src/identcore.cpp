#include "identkit/identcore.hpp"

#include "identkit/graphprops.hpp"
#include "identkit/modular.hpp"

#include "json.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace identkit {

namespace {

constexpr std::int64_t kValueBound = 10000;

struct TrialPoint {
    std::uint64_t prime = 0;
    std::vector<std::uint64_t> residues;
    std::mt19937_64 rng;
};

TrialPoint draw_point(std::uint64_t seed, unsigned trial, std::size_t params) {
    TrialPoint pt{0, {}, std::mt19937_64(mix_seed(seed, trial))};
    pt.prime = random_prime_61_62(pt.rng);
    std::uniform_int_distribution<std::int64_t> value(-kValueBound, kValueBound - 1);
    pt.residues.reserve(params);
    for (std::size_t k = 0; k < params; ++k) {
        std::int64_t v = value(pt.rng);
        if (v >= 0) {
            ++v; // skip zero: [-B, -1] u [1, B]
        }
        pt.residues.push_back(reduce_signed(v, pt.prime));
    }
    return pt;
}

// Where a parameter sits in A: A[row][col] += sign * theta.
struct Placement {
    std::size_t param;
    std::size_t row;
    std::size_t col;
    bool negative;
};

std::vector<Placement> placements(MatrixMode mode, const std::vector<Param> &params) {
    std::vector<Placement> out;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const Param &p = params[k];
        switch (p.kind) {
        case Param::Kind::Edge: {
            const auto dst = static_cast<std::size_t>(p.row - 1);
            const auto src = static_cast<std::size_t>(p.col - 1);
            out.push_back({k, dst, src, false});
            if (mode == MatrixMode::Explicit) {
                out.push_back({k, src, src, true});
            }
            break;
        }
        case Param::Kind::Leak:
            out.push_back({k, static_cast<std::size_t>(p.col - 1), static_cast<std::size_t>(p.col - 1), true});
            break;
        case Param::Kind::Diag:
            out.push_back({k, static_cast<std::size_t>(p.row - 1), static_cast<std::size_t>(p.row - 1), false});
            break;
        }
    }
    return out;
}

using Dense = std::vector<std::vector<std::uint64_t>>;

// Gauss-Jordan inverse mod p; returns false when singular.
bool invert(Dense m, Dense &inv, std::uint64_t &det, std::uint64_t p) {
    const std::size_t n = m.size();
    inv.assign(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
    }
    det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) {
            ++piv;
        }
        if (piv == n) {
            return false;
        }
        if (piv != c) {
            std::swap(m[piv], m[c]);
            std::swap(inv[piv], inv[c]);
            det = det ? p - det : 0;
        }
        det = mul_mod(det, m[c][c], p);
        const std::uint64_t f = inv_mod(m[c][c], p);
        for (std::size_t k = 0; k < n; ++k) {
            m[c][k] = mul_mod(m[c][k], f, p);
            inv[c][k] = mul_mod(inv[c][k], f, p);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) {
                continue;
            }
            const std::uint64_t g = m[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                m[r][k] = sub_mod(m[r][k], mul_mod(g, m[c][k], p), p);
                inv[r][k] = sub_mod(inv[r][k], mul_mod(g, inv[c][k], p), p);
            }
        }
    }
    return true;
}

struct OutputBlock {
    std::vector<std::size_t> vertices; // 0-based, ascending
    std::size_t output_pos = 0;
    std::vector<std::size_t> input_pos;
};

std::string join(const std::vector<Vertex> &vs) {
    std::string s;
    for (Vertex v : vs) {
        s += (s.empty() ? "" : ",") + std::to_string(v);
    }
    return s;
}

} // namespace

std::uint64_t model_seed(std::uint64_t seed, const ValidatedModel &model) { return mix_seed(seed, model_hash(model)); }

std::size_t jacobian_rank(const CoefficientMap &cmap, std::uint64_t seed, unsigned trials) {
    const std::size_t params = cmap.variables->param_count();
    if (cmap.polys.empty() || params == 0) {
        return 0;
    }
    std::vector<std::vector<SparsePoly>> partials(cmap.polys.size());
    for (std::size_t r = 0; r < cmap.polys.size(); ++r) {
        partials[r].reserve(params);
        for (std::size_t c = 0; c < params; ++c) {
            partials[r].push_back(poly_partial(cmap.polys[r], c));
        }
    }
    const std::size_t ceiling = std::min(cmap.polys.size(), params);
    std::size_t best = 0;
    for (unsigned t = 0; t < std::max(trials, 1u) && best < ceiling; ++t) {
        const TrialPoint pt = draw_point(seed, t, params);
        Dense rows(cmap.polys.size(), std::vector<std::uint64_t>(params));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < params; ++c) {
                rows[r][c] = evaluate_mod(partials[r][c], pt.residues, pt.prime);
            }
        }
        best = std::max(best, rank_mod(std::move(rows), pt.prime));
    }
    return best;
}

std::size_t evaluation_jacobian_rank(const ValidatedModel &model, MatrixMode mode, std::uint64_t seed,
                                     unsigned trials) {
    const std::vector<Param> params = model_parameters(model, mode);
    if (params.empty()) {
        return 0;
    }
    const std::vector<Placement> place = placements(mode, params);
    const auto n = static_cast<std::size_t>(model.n());

    std::vector<OutputBlock> blocks;
    for (Vertex j : model.outputs()) {
        const Submodel sub = output_reachable_subgraph(model, j);
        if (sub.model.inputs.empty()) {
            throw Error(ErrorCode::NoInputReachesOutput, "no input has a path to output " + std::to_string(j));
        }
        OutputBlock b;
        for (std::size_t k = 0; k < sub.vertices.size(); ++k) {
            const Vertex v = sub.vertices[k];
            b.vertices.push_back(static_cast<std::size_t>(v - 1));
            if (v == j) {
                b.output_pos = k;
            }
            if (model.is_input(v)) {
                b.input_pos.push_back(k);
            }
        }
        blocks.push_back(std::move(b));
    }

    std::size_t row_count = 0;
    for (const auto &b : blocks) {
        row_count += b.vertices.size() * (1 + b.input_pos.size());
    }
    const std::size_t ceiling = std::min(row_count, params.size());
    std::size_t best = 0;
    for (unsigned t = 0; t < std::max(trials, 1u) && best < ceiling; ++t) {
        TrialPoint pt = draw_point(seed, t, params.size());
        const std::uint64_t p = pt.prime;
        Dense a(n, std::vector<std::uint64_t>(n, 0));
        for (const Placement &pl : place) {
            const std::uint64_t v = pt.residues[pl.param];
            a[pl.row][pl.col] = pl.negative ? sub_mod(a[pl.row][pl.col], v, p) : add_mod(a[pl.row][pl.col], v, p);
        }
        std::uniform_int_distribution<std::uint64_t> zdist(1, p - 1);
        Dense rows;
        rows.reserve(row_count);
        for (const OutputBlock &b : blocks) {
            const std::size_t d = b.vertices.size();
            // local index of each full vertex, or d when outside H
            std::vector<std::size_t> local(n, d);
            for (std::size_t k = 0; k < d; ++k) {
                local[b.vertices[k]] = k;
            }
            std::vector<std::uint64_t> used;
            while (used.size() < d) {
                const std::uint64_t z = zdist(pt.rng);
                if (std::find(used.begin(), used.end(), z) != used.end()) {
                    continue;
                }
                Dense m(d, std::vector<std::uint64_t>(d));
                for (std::size_t r = 0; r < d; ++r) {
                    for (std::size_t c = 0; c < d; ++c) {
                        const std::uint64_t entry = a[b.vertices[r]][b.vertices[c]];
                        m[r][c] = r == c ? sub_mod(z, entry, p) : (entry ? p - entry : 0);
                    }
                }
                Dense inv;
                std::uint64_t det = 0;
                if (!invert(std::move(m), inv, det, p)) {
                    continue;
                }
                used.push_back(z);
                // d/dA_rc det(zI - A) = -det * inv[c][r]
                std::vector<std::uint64_t> lhs(params.size(), 0);
                std::vector<std::vector<std::uint64_t>> rhs(b.input_pos.size(),
                                                            std::vector<std::uint64_t>(params.size(), 0));
                const std::size_t jj = b.output_pos;
                for (const Placement &pl : place) {
                    const std::size_t r = local[pl.row];
                    const std::size_t c = local[pl.col];
                    if (r == d || c == d) {
                        continue;
                    }
                    // sign of d/dtheta of A_rc, then the minus from M = zI - A
                    const bool flip = !pl.negative;
                    auto accumulate = [&](std::uint64_t &slot, std::uint64_t dm) {
                        slot = flip ? sub_mod(slot, dm, p) : add_mod(slot, dm, p);
                    };
                    accumulate(lhs[pl.param], mul_mod(det, inv[c][r], p));
                    // adj(M)_{jj,ii} = det * inv[jj][ii]
                    for (std::size_t q = 0; q < b.input_pos.size(); ++q) {
                        const std::size_t ii = b.input_pos[q];
                        const std::uint64_t x = mul_mod(inv[c][r], inv[jj][ii], p);
                        const std::uint64_t y = mul_mod(inv[jj][r], inv[c][ii], p);
                        accumulate(rhs[q][pl.param], mul_mod(det, sub_mod(x, y, p), p));
                    }
                }
                rows.push_back(std::move(lhs));
                for (auto &row : rhs) {
                    rows.push_back(std::move(row));
                }
            }
        }
        best = std::max(best, rank_mod(std::move(rows), p));
    }
    return best;
}

std::string_view to_string(ScreenStatus s) {
    switch (s) {
    case ScreenStatus::CertifiedUnidentifiable: return "certified-unidentifiable";
    case ScreenStatus::Inconclusive: return "inconclusive";
    case ScreenStatus::Skipped: return "skipped";
    }
    return "skipped";
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::LocallyIdentifiable: return "locally-identifiable";
    case Verdict::Unidentifiable: return "unidentifiable";
    case Verdict::ExpectedDimension: return "expected-dimension";
    case Verdict::BelowExpectedDimension: return "below-expected-dimension";
    case Verdict::NotApplicable: return "not-applicable";
    }
    return "not-applicable";
}

std::string_view to_string(BoundHypotheses h) {
    switch (h) {
    case BoundHypotheses::Certified: return "certified";
    case BoundHypotheses::OutputConnectable: return "output-connectable";
    case BoundHypotheses::NotMet: return "not-met";
    }
    return "not-met";
}

std::vector<ScreenResult> necessary_conditions(const ValidatedModel &model) {
    const Digraph g = Digraph::from_model(model);
    const bool sc = is_strongly_connected(g);
    const bool sioc = is_strongly_input_output_connected(g, model.inputs(), model.outputs());
    const auto V = static_cast<long>(model.n());
    const auto E = static_cast<long>(model.edge_count());
    const auto L = static_cast<long>(model.leaks().size());
    const auto io = static_cast<long>(model.in_out_union_size());
    const bool siso = model.inputs().size() == 1 && model.outputs().size() == 1;
    const Vertex i = model.inputs().front();
    const Vertex j = model.outputs().front();

    std::vector<ScreenResult> out;

    ScreenResult leak{"leak-count", ScreenStatus::Skipped, ""};
    if ((sioc && model.outputs().size() == 1) || (sc && model.inputs().size() == 1)) {
        leak.status = L > io ? ScreenStatus::CertifiedUnidentifiable : ScreenStatus::Inconclusive;
        leak.detail = "|L| = " + std::to_string(L) + ", |In u Out| = " + std::to_string(io);
    } else {
        leak.detail = "needs SIOC with one output or SC with one input";
    }
    out.push_back(leak);

    ScreenResult exchange{"exchange", ScreenStatus::Skipped, ""};
    if (sc && siso && i == j && V >= 2 && E == 2 * V - 2 && L == 1) {
        bool has_exchange = false;
        for (const Edge &e : model.edges()) {
            has_exchange = has_exchange || model.has_edge(e.dst, e.src);
        }
        exchange.status = has_exchange ? ScreenStatus::Inconclusive : ScreenStatus::CertifiedUnidentifiable;
        exchange.detail = has_exchange ? "has a 2-cycle" : "no 2-cycle";
    } else {
        exchange.detail = "needs SC, In = Out = {i}, |E| = 2|V|-2, one leak";
    }
    out.push_back(exchange);

    ScreenResult direct{"direct-edge", ScreenStatus::Skipped, ""};
    if (sioc && siso && i != j && L == io && E == 2 * V - 3) {
        const bool edge = model.has_edge(i, j);
        direct.status = edge ? ScreenStatus::Inconclusive : ScreenStatus::CertifiedUnidentifiable;
        direct.detail = edge ? "edge input -> output present" : "no edge input -> output";
    } else {
        direct.detail = "needs SIOC, single input != output, |L| = |In u Out|, |E| = 2|V|-3";
    }
    out.push_back(direct);

    ScreenResult path{"short-path", ScreenStatus::Skipped, ""};
    const long k = 2 * V - 2 - E;
    if (sioc && siso && i != j && L == io && k >= 1) {
        const auto d = dist(g, i, j);
        const bool ok = d && *d <= k;
        path.status = ok ? ScreenStatus::Inconclusive : ScreenStatus::CertifiedUnidentifiable;
        path.detail = "k = " + std::to_string(k) + ", dist = " + (d ? std::to_string(*d) : std::string("none"));
    } else {
        path.detail = "needs SIOC, single input != output, |L| = |In u Out|, |E| <= 2|V|-3";
    }
    out.push_back(path);
    return out;
}

BoundHypotheses bound_hypotheses(const ValidatedModel &model) {
    const Digraph g = Digraph::from_model(model);
    if ((model.outputs().size() == 1 && is_strongly_input_output_connected(g, model.inputs(), model.outputs())) ||
        (model.inputs().size() == 1 && is_strongly_connected(g))) {
        return BoundHypotheses::Certified;
    }
    if (model.outputs().size() == 1 && is_output_connectable(model)) {
        return BoundHypotheses::OutputConnectable;
    }
    return BoundHypotheses::NotMet;
}

AnalysisReport classify_identifiability(const ValidatedModel &model, MatrixMode mode, const RankOptions &opts) {
    AnalysisReport report(model);
    report.mode = mode;
    report.seed = opts.seed;
    report.trials = opts.trials;

    const Digraph g = Digraph::from_model(model);
    report.strongly_connected = is_strongly_connected(g);
    report.sioc = is_strongly_input_output_connected(g, model.inputs(), model.outputs());
    report.output_connectable = is_output_connectable(model);

    const CoefficientMap cmap = coefficient_map(model, mode);
    report.minimality_warning = cmap.minimality_warning;
    report.param_count = cmap.param_order().size();
    report.coeff_count = cmap.size();
    report.jacobian_rank = jacobian_rank(cmap, model_seed(opts.seed, model), opts.trials);
    report.expected_dimension_bound = model.edge_count() + model.in_out_union_size();
    report.bound_certified = bound_hypotheses(model) == BoundHypotheses::Certified;
    report.expected_coefficient_count = expected_coefficient_count(model);
    if (!model.all_leaks()) {
        const ValidatedModel full = with_all_leaks(model);
        report.full_leak_rank = jacobian_rank(coefficient_map(full, MatrixMode::DiagonalGeneric),
                                              model_seed(opts.seed, full), opts.trials);
    }

    if (report.param_count == 0) {
        report.verdict = Verdict::NotApplicable;
    } else if (report.jacobian_rank == report.param_count) {
        report.verdict = Verdict::LocallyIdentifiable;
    } else if (model.all_leaks()) {
        report.verdict = report.jacobian_rank == report.expected_dimension_bound ? Verdict::ExpectedDimension
                                                                                 : Verdict::BelowExpectedDimension;
    } else {
        report.verdict = Verdict::Unidentifiable;
    }

    report.screens = necessary_conditions(model);
    ScreenResult count{"coefficient-count", ScreenStatus::Inconclusive, ""};
    const std::size_t distinct = cmap.distinct_count();
    count.detail = std::to_string(report.param_count) + " parameters, " + std::to_string(distinct) +
                   " distinct coefficients";
    if (report.param_count > distinct) {
        count.status = ScreenStatus::CertifiedUnidentifiable;
    }
    report.screens.push_back(count);
    return report;
}

std::string report_to_json(const AnalysisReport &r) {
    nlohmann::ordered_json doc;
    doc["model"] = nlohmann::ordered_json::parse(serialize_model(r.model));
    doc["mode"] = std::string(to_string(r.mode));
    doc["param_count"] = r.param_count;
    doc["coeff_count"] = r.coeff_count;
    doc["jacobian_rank"] = r.jacobian_rank;
    doc["expected_dimension_bound"] = r.expected_dimension_bound;
    doc["bound_certified"] = r.bound_certified;
    doc["expected_coefficient_count"] =
        r.expected_coefficient_count ? nlohmann::ordered_json(*r.expected_coefficient_count) : nullptr;
    doc["full_leak_rank"] = r.full_leak_rank ? nlohmann::ordered_json(*r.full_leak_rank) : nullptr;
    doc["verdict"] = std::string(to_string(r.verdict));
    doc["flags"] = {{"strongly_connected", r.strongly_connected},
                    {"sioc", r.sioc},
                    {"output_connectable", r.output_connectable},
                    {"minimality_warning", r.minimality_warning}};
    auto screens = nlohmann::ordered_json::array();
    for (const ScreenResult &s : r.screens) {
        screens.push_back({{"name", s.name}, {"status", std::string(to_string(s.status))}, {"detail", s.detail}});
    }
    doc["necessary_conditions"] = screens;
    doc["seed"] = r.seed;
    doc["trials"] = r.trials;
    return doc.dump(2);
}

std::string report_to_text(const AnalysisReport &r) {
    std::ostringstream os;
    os << "model: " << serialize_model(r.model) << "\n";
    os << "mode: " << to_string(r.mode) << "\n";
    os << "verdict: " << to_string(r.verdict) << "\n";
    os << "jacobian rank: " << r.jacobian_rank << " of " << r.param_count << " parameters (" << r.coeff_count
       << " coefficients)\n";
    os << "|E| + |In u Out|: " << r.expected_dimension_bound << (r.bound_certified ? " (certified maximum)" : "")
       << "\n";
    if (r.expected_coefficient_count) {
        os << "expected coefficient count: " << *r.expected_coefficient_count << "\n";
    }
    if (r.full_leak_rank) {
        os << "rank with Leak = V: " << *r.full_leak_rank << "\n";
    }
    os << "strongly connected: " << (r.strongly_connected ? "yes" : "no")
       << ", SIOC: " << (r.sioc ? "yes" : "no")
       << ", output connectable: " << (r.output_connectable ? "yes" : "no") << "\n";
    if (r.minimality_warning) {
        os << "warning: several outputs without a strongly connected graph and a leak\n";
    }
    for (const ScreenResult &s : r.screens) {
        os << "  " << s.name << ": " << to_string(s.status) << " (" << s.detail << ")\n";
    }
    os << "seed " << r.seed << ", trials " << r.trials << "\n";
    return os.str();
}

ExpectedDimensionResult expected_dimension_test(const ValidatedModel &model, const RankOptions &opts) {
    if (!model.all_leaks()) {
        throw Error(ErrorCode::PreconditionViolated, "the expected-dimension test needs Leak = V");
    }
    ExpectedDimensionResult res;
    res.hypotheses = bound_hypotheses(model);
    res.bound = model.edge_count() + model.in_out_union_size();
    res.rank = jacobian_rank(coefficient_map(model, MatrixMode::DiagonalGeneric), model_seed(opts.seed, model),
                             opts.trials);
    res.holds = res.rank == res.bound;
    return res;
}

PathCycleResult is_identifiable_path_cycle_model(const ValidatedModel &model, const RankOptions &opts) {
    if (!model.all_leaks() || bound_hypotheses(model) != BoundHypotheses::Certified) {
        throw Error(ErrorCode::HypothesesNotMet,
                    "needs Leak = V and either SIOC with one output or SC with one input (in " +
                        join(model.inputs()) + ", out " + join(model.outputs()) + ")");
    }
    PathCycleResult res;
    const ExpectedDimensionResult ed = expected_dimension_test(model, opts);
    res.identifiable = ed.holds;
    res.rank = ed.rank;
    res.basis = path_cycle_basis(model);
    return res;
}

bool edge_formula_check(const ValidatedModel &model) {
    std::vector<Vertex> leaks = model.leaks();
    for (Vertex v : model.in_out_union()) {
        leaks.push_back(v);
    }
    const auto count = expected_coefficient_count(with_leaks(model, leaks));
    if (!count) {
        throw Error(ErrorCode::HypothesesNotMet, "the expected coefficient count does not apply to this graph");
    }
    return static_cast<long>(model.edge_count() + model.in_out_union_size()) <= *count;
}

bool self_cycles_identifiable(const ValidatedModel &model, const RankOptions &opts) {
    if (model.outputs().size() != 1 || !model.all_leaks() || !is_output_connectable(model)) {
        throw Error(ErrorCode::HypothesesNotMet, "needs one output, an output-connectable graph and Leak = V");
    }
    return expected_dimension_test(model, opts).holds;
}

} // namespace identkit
