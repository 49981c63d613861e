#include "tamelab/wapset.hpp"

#include <algorithm>
#include <cmath>

namespace tamelab::wapset {

namespace {

// Dense bit row over [-N, N] (2N+1 bits).
struct BitRow {
    std::vector<std::uint64_t> words;
    std::int64_t bits = 0;

    static BitRow ones(std::int64_t bits) {
        BitRow r;
        r.bits = bits;
        r.words.assign(static_cast<std::size_t>((bits + 63) / 64), ~std::uint64_t(0));
        std::int64_t tail = bits % 64;
        if (tail) r.words.back() = (~std::uint64_t(0)) >> (64 - tail);
        return r;
    }

    bool any() const {
        for (auto w : words)
            if (w) return true;
        return false;
    }

    std::int64_t popcount() const {
        std::int64_t c = 0;
        for (auto w : words) c += __builtin_popcountll(w);
        return c;
    }
};

// Membership of D over [-2N, 2N], padded one word for shifted extraction.
struct DMap {
    std::vector<std::uint64_t> words;
    std::int64_t span = 0;   // 4N+1

    static DMap build(const sources::IntegerSetSpec& d, std::int64_t N) {
        DMap m;
        m.span = 4 * N + 1;
        m.words.assign(static_cast<std::size_t>((m.span + 63) / 64) + 1, 0);
        for (std::int64_t x = -2 * N; x <= 2 * N; ++x)
            if (d.contains(x)) {
                std::int64_t pos = x + 2 * N;
                m.words[static_cast<std::size_t>(pos >> 6)] |=
                    std::uint64_t(1) << (pos & 63);
            }
        return m;
    }

    std::uint64_t extract(std::int64_t bitpos) const {
        auto w = static_cast<std::size_t>(bitpos >> 6);
        int sh = static_cast<int>(bitpos & 63);
        std::uint64_t v = words[w] >> sh;
        if (sh) v |= words[w + 1] << (64 - sh);
        return v;
    }
};

// row &= bits of (b + D) over [-N, N]: bit j corresponds to x = -N + j, and
// x in b+D iff D(x-b), i.e. DMap bit j + (N - b).
void and_shifted(BitRow& row, const DMap& dmap, std::int64_t N, std::int64_t b) {
    std::int64_t base = N - b;
    for (std::size_t w = 0; w < row.words.size(); ++w)
        row.words[w] &= dmap.extract(base + static_cast<std::int64_t>(w) * 64);
    std::int64_t tail = row.bits % 64;
    if (tail) row.words.back() &= (~std::uint64_t(0)) >> (64 - tail);
}

std::vector<std::vector<std::size_t>> subsets_size_ascending(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    // lexicographic combinations per size, sizes ascending
    for (std::size_t s = 0; s <= n; ++s) {
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            if (s == 0) break;
            std::size_t i = s;
            while (i > 0 && idx[i - 1] == n - (s - (i - 1))) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

std::string growth_label(const std::vector<std::int64_t>& sizes,
                         const std::vector<std::int64_t>& horizons) {
    std::int64_t s0 = sizes.front(), s1 = sizes.back();
    if (s1 <= s0) return "bounded";
    double num = std::log(static_cast<double>(s1) /
                          std::max<double>(1.0, static_cast<double>(s0)));
    double den = std::log(static_cast<double>(horizons.back()) /
                          static_cast<double>(horizons.front()));
    double e = den > 0 ? num / den : 0.0;
    if (e < 0.1) return "bounded";
    if (e < 0.75) return "sublinear";
    if (e <= 1.25) return "linear";
    return "superlinear";
}

} // namespace

void RuppertProbe::validate() const {
    d_set.validate();
    b_set.validate();
    if (f_max < 0) throw UsageError("ruppert: f_max must be >= 0");
    if (horizons.size() < 3)
        throw MalformedSpec("ruppert: need at least 3 horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1) throw MalformedSpec("ruppert: horizons must be >= 1");
        if (i > 0 && horizons[i - 1] >= horizons[i])
            throw MalformedSpec("ruppert: horizons must be strictly increasing");
    }
}

RuppertVerdict ruppert_test(const RuppertProbe& probe, int workers) {
    probe.validate();
    std::int64_t n_min = probe.horizons.front();

    // first f_max elements of B, by |value| ascending, within the smallest horizon
    auto pool = probe.b_set.enumerate_within(
        n_min, static_cast<std::size_t>(probe.f_max));
    if (static_cast<int>(pool.size()) < probe.f_max)
        throw InsufficientB("ruppert: B has only " + std::to_string(pool.size()) +
                            " elements within the smallest horizon, need " +
                            std::to_string(probe.f_max));

    auto subsets = subsets_size_ascending(pool.size());
    std::size_t cells = subsets.size();
    std::size_t h_count = probe.horizons.size();

    // sizes[f][h]
    std::vector<std::vector<std::int64_t>> sizes(
        cells, std::vector<std::int64_t>(h_count, 0));

    for_chunks(0, static_cast<std::int64_t>(h_count) - 1, workers,
               [&](int, std::int64_t h_lo, std::int64_t h_hi) {
        for (std::int64_t h = h_lo; h <= h_hi; ++h) {
            std::int64_t N = probe.horizons[static_cast<std::size_t>(h)];
            std::int64_t width = 2 * N + 1;
            DMap dmap = DMap::build(probe.d_set, N);
            auto b_in = probe.b_set.enumerate_within(
                N, static_cast<std::size_t>(width));

            // core = intersection over b in (B cap [-N,N]) \ pool
            BitRow core = BitRow::ones(width);
            for (std::int64_t b : b_in) {
                if (std::find(pool.begin(), pool.end(), b) != pool.end()) continue;
                and_shifted(core, dmap, N, b);
                if (!core.any()) break;
            }

            for (std::size_t f = 0; f < cells; ++f) {
                BitRow s_row = BitRow::ones(width);
                for (std::size_t i : subsets[f])
                    and_shifted(s_row, dmap, N, pool[i]);
                BitRow t_row = core;
                for (std::size_t i = 0; i < pool.size(); ++i) {
                    if (std::find(subsets[f].begin(), subsets[f].end(), i) !=
                        subsets[f].end())
                        continue;
                    and_shifted(t_row, dmap, N, pool[i]);
                }
                // |S \ T|
                std::int64_t c = 0;
                for (std::size_t w = 0; w < s_row.words.size(); ++w)
                    c += __builtin_popcountll(s_row.words[w] & ~t_row.words[w]);
                sizes[f][static_cast<std::size_t>(h)] = c;
            }
        }
    });

    RuppertVerdict verdict;
    verdict.horizons = probe.horizons;
    for (std::size_t f = 0; f < cells; ++f) {
        FCell cell;
        for (std::size_t i : subsets[f]) cell.f.push_back(pool[i]);
        cell.sizes = sizes[f];
        verdict.table.push_back(std::move(cell));
    }

    // PASS: first F whose size is constant across the last two horizons
    for (std::size_t f = 0; f < cells; ++f) {
        if (sizes[f][h_count - 1] == sizes[f][h_count - 2]) {
            verdict.outcome = RuppertOutcome::pass;
            verdict.f = verdict.table[f].f;
            verdict.sizes = sizes[f];
            verdict.growth = "bounded";
            return verdict;
        }
    }

    // FAIL: report the F with the smallest final-horizon size (first on ties)
    std::size_t best = 0;
    for (std::size_t f = 1; f < cells; ++f)
        if (sizes[f][h_count - 1] < sizes[best][h_count - 1]) best = f;
    verdict.outcome = RuppertOutcome::fail_evidence;
    verdict.f = verdict.table[best].f;
    verdict.sizes = sizes[best];
    verdict.growth = growth_label(verdict.sizes, probe.horizons);
    return verdict;
}

CountabilityNote wap_countability_note(const sources::IntegerSetSpec& d_set,
                                       int n_max, std::int64_t M,
                                       std::int64_t window, int k_max,
                                       std::uint64_t node_budget, int workers) {
    auto source = sources::SymbolicSource::indicator(d_set);
    CountabilityNote note;
    note.complexity = lang::complexity_table(source, n_max, M, workers);
    std::vector<std::int64_t> win(static_cast<std::size_t>(window));
    for (std::int64_t i = 0; i < window; ++i) win[static_cast<std::size_t>(i)] = i;
    note.search = indep::max_free_size(source, win, indep::SymbolPair{0, 1},
                                       source.natural_range(M), k_max,
                                       node_budget, workers);
    return note;
}

} // namespace tamelab::wapset
