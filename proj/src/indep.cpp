#include "tamelab/indep.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

namespace tamelab::indep {

namespace {

constexpr std::int64_t kNoWitness = std::numeric_limits<std::int64_t>::min();

void validate_coords(const std::vector<std::int64_t>& coords, std::size_t cap) {
    if (coords.size() > cap)
        throw WindowTooLarge("coordinate set of size " + std::to_string(coords.size()) +
                             " exceeds cap " + std::to_string(cap));
    for (std::size_t i = 1; i < coords.size(); ++i)
        if (coords[i - 1] >= coords[i])
            throw MalformedSpec("coordinates must be sorted and distinct");
}

// Shared scan context: the materialized line plus pair bookkeeping.
struct ScanContext {
    std::vector<std::uint8_t> line;
    std::int64_t line_base = 0;   // index of line[0]
    std::uint8_t b0 = 0, b1 = 1;  // pair symbols as line cells

    void load(const SymbolicSource& source, const ShiftRange& range,
              std::int64_t min_coord, std::int64_t max_coord, SymbolPair pair) {
        pair.validate();
        if (source.domain() != sources::Domain::integer_line)
            throw DimensionMismatch("freeness: source is not Z-indexed");
        if (range.count() < 1) throw UsageError("freeness: empty shift range");
        b0 = static_cast<std::uint8_t>(pair.s0);
        b1 = static_cast<std::uint8_t>(pair.s1);
        line_base = range.lo + min_coord;
        source.line(line_base, range.hi + max_coord, line);
    }

    // -1 skip (ambiguous), -2 disqualified (symbol outside pair), else pattern
    std::int64_t pattern_at(std::int64_t m, const std::vector<std::int64_t>& coords) const {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            std::uint8_t c = line[static_cast<std::size_t>(m + coords[i] - line_base)];
            if (c == sources::kAmbiguousCell) return -1;
            if (c == b1)
                v |= std::uint64_t(1) << i;
            else if (c != b0)
                return -2;
        }
        return static_cast<std::int64_t>(v);
    }
};

} // namespace

FreeResult is_free(const SymbolicSource& source,
                   const std::vector<std::int64_t>& coords, SymbolPair pair,
                   const ShiftRange& range, int workers) {
    validate_coords(coords, 24);
    std::size_t k = coords.size();
    std::size_t patterns = std::size_t(1) << k;

    ScanContext ctx;
    std::int64_t minc = coords.empty() ? 0 : coords.front();
    std::int64_t maxc = coords.empty() ? 0 : coords.back();
    ctx.load(source, range, minc, maxc, pair);

    // big tables don't pay for per-chunk copies
    int scan_workers = patterns <= (std::size_t(1) << 20) ? workers : 1;

    std::vector<std::vector<std::int64_t>> tables(
        static_cast<std::size_t>(std::max(scan_workers, 1)));
    std::vector<std::uint64_t> skips(tables.size(), 0);
    std::mutex mu;

    for_chunks(range.lo, range.hi, scan_workers,
               [&](int chunk, std::int64_t lo, std::int64_t hi) {
        std::vector<std::int64_t> table(patterns, kNoWitness);
        std::uint64_t skipped = 0;
        for (std::int64_t m = lo; m <= hi; ++m) {
            std::int64_t p = ctx.pattern_at(m, coords);
            if (p == -1) { ++skipped; continue; }
            if (p == -2) continue;   // disqualified, not a skip
            auto& slot = table[static_cast<std::size_t>(p)];
            if (slot == kNoWitness) slot = m;
        }
        std::lock_guard<std::mutex> g(mu);
        tables[static_cast<std::size_t>(chunk)] = std::move(table);
        skips[static_cast<std::size_t>(chunk)] = skipped;
    });

    std::vector<std::int64_t> witnesses(patterns, kNoWitness);
    std::uint64_t skipped = 0;
    for (std::size_t c = 0; c < tables.size(); ++c) {
        skipped += skips[c];
        if (tables[c].empty()) continue;
        for (std::size_t p = 0; p < patterns; ++p) {
            std::int64_t w = tables[c][p];
            if (w == kNoWitness) continue;
            if (witnesses[p] == kNoWitness || w < witnesses[p]) witnesses[p] = w;
        }
    }

    std::vector<std::uint64_t> missing;
    for (std::size_t p = 0; p < patterns; ++p)
        if (witnesses[p] == kNoWitness) missing.push_back(p);

    if (!missing.empty()) {
        MissingPatterns mp;
        mp.missing = std::move(missing);
        mp.present = patterns - mp.missing.size();
        mp.tainted = skipped > 0;
        return mp;
    }

    FreeSetCertificate cert;
    cert.coords = coords;
    cert.pair = pair;
    cert.witnesses = std::move(witnesses);
    cert.budget = range;
    cert.tainted = skipped > 0;
    cert.verified = verify_certificate(source, cert).ok;
    return cert;
}

VerifyOutcome verify_certificate(const SymbolicSource& source,
                                 const FreeSetCertificate& cert) {
    VerifyOutcome out;
    std::size_t k = cert.coords.size();
    if (cert.witnesses.size() != (std::size_t(1) << k)) {
        out.note = "witness table size != 2^|A|";
        return out;
    }
    for (std::size_t i = 1; i < cert.coords.size(); ++i)
        if (cert.coords[i - 1] >= cert.coords[i]) {
            out.note = "coordinates not sorted";
            return out;
        }
    for (std::size_t p = 0; p < cert.witnesses.size(); ++p) {
        std::int64_t m = cert.witnesses[p];
        if (m < cert.budget.lo || m > cert.budget.hi) {
            out.note = "witness outside declared budget";
            return out;
        }
        for (std::size_t i = 0; i < k; ++i) {
            Symbol want = (p >> i) & 1 ? cert.pair.s1 : cert.pair.s0;
            Symbol got;
            try {
                got = source.eval(m + cert.coords[i]);
            } catch (const AmbiguousBoundary&) {
                out.tainted = true;
                out.note = "witness re-evaluation hit an ambiguous boundary";
                return out;
            }
            if (got != want) {
                out.note = "pattern mismatch at shift " + std::to_string(m);
                return out;
            }
        }
    }
    out.ok = true;
    return out;
}

namespace {

struct SearchState {
    const ScanContext* ctx;
    const std::vector<std::int64_t>* window;
    ShiftRange range;
    int k_max;
    std::uint64_t node_budget;
    SearchReport report;
    std::vector<std::int64_t> current;

    // true iff current+<c> realizes all 2^(size+1) patterns in budget
    bool candidate_free(std::int64_t c, bool* tainted) {
        current.push_back(c);
        std::size_t want = std::size_t(1) << current.size();
        std::vector<bool> seen(want, false);
        std::size_t found = 0;
        for (std::int64_t m = range.lo; m <= range.hi; ++m) {
            std::int64_t p = ctx->pattern_at(m, current);
            if (p == -1) { *tainted = true; continue; }
            if (p == -2) continue;
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = true;
                if (++found == want) break;
            }
        }
        current.pop_back();
        return found == want;
    }

    void dfs(std::size_t next_index) {
        if (static_cast<int>(current.size()) >= k_max) return;
        for (std::size_t j = next_index; j < window->size(); ++j) {
            if (report.budget_hit) return;
            if (report.nodes >= node_budget) {
                report.budget_hit = true;
                return;
            }
            ++report.nodes;
            bool tainted = false;
            bool ok = candidate_free((*window)[j], &tainted);
            report.tainted = report.tainted || tainted;
            if (!ok) continue;   // prune: supersets cannot recover
            current.push_back((*window)[j]);
            if (static_cast<int>(current.size()) > report.k_star) {
                report.k_star = static_cast<int>(current.size());
                report.best = FreeSetCertificate{};
                report.best->coords = current;
            }
            dfs(j + 1);
            current.pop_back();
        }
    }
};

} // namespace

SearchReport max_free_size(const SymbolicSource& source,
                           const std::vector<std::int64_t>& window,
                           SymbolPair pair, const ShiftRange& range, int k_max,
                           std::uint64_t node_budget, int workers) {
    validate_coords(window, 64);
    if (k_max < 0) throw UsageError("max_free_size: k_max must be >= 0");
    if (k_max > 24) throw WindowTooLarge("max_free_size: k_max exceeds 24");

    SearchReport report;
    report.budget = range;
    if (window.empty() || k_max == 0) {
        report.exhaustive = true;
        return report;
    }

    ScanContext ctx;
    ctx.load(source, range, window.front(), window.back(), pair);

    SearchState st;
    st.ctx = &ctx;
    st.window = &window;
    st.range = range;
    st.k_max = k_max;
    st.node_budget = node_budget;
    st.report.budget = range;
    st.dfs(0);
    report = std::move(st.report);
    report.budget = range;
    report.exhaustive = !report.budget_hit;

    if (report.best) {
        // build the witness certificate for the best set found
        FreeResult r = is_free(source, report.best->coords, pair, range, workers);
        if (auto* cert = std::get_if<FreeSetCertificate>(&r)) {
            report.best = *cert;
        } else {
            // cannot happen: the set was just scanned as free over the same range
            throw std::logic_error("max_free_size: best candidate failed re-scan");
        }
    }
    return report;
}

std::vector<DensityPoint> free_density_profile(
    const SymbolicSource& source, const std::vector<std::int64_t>& lengths,
    SymbolPair pair, std::int64_t per_length_budget, std::uint64_t node_budget,
    int workers) {
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i - 1] >= lengths[i])
            throw MalformedSpec("density profile: lengths must be increasing");
    std::vector<DensityPoint> out;
    for (std::int64_t L : lengths) {
        std::vector<std::int64_t> window(static_cast<std::size_t>(L));
        for (std::int64_t i = 0; i < L; ++i)
            window[static_cast<std::size_t>(i)] = i;
        ShiftRange range = source.natural_range(per_length_budget);
        SearchReport rep = max_free_size(source, window, pair, range,
                                         static_cast<int>(std::min<std::int64_t>(L, 24)),
                                         node_budget, workers);
        DensityPoint pt;
        pt.length = L;
        pt.k_star = rep.k_star;
        pt.ratio = static_cast<double>(rep.k_star) / static_cast<double>(L);
        pt.exhaustive = rep.exhaustive;
        out.push_back(pt);
    }
    return out;
}

} // namespace tamelab::indep
