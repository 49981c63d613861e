#include "tamelab/lang.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace tamelab::lang {

// ---------------------------------------------------------------------------
// CoordinateSet

CoordinateSet CoordinateSet::line(std::vector<std::int64_t> coords) {
    CoordinateSet k;
    k.arity = 1;
    k.flat = std::move(coords);
    k.validate();
    return k;
}

CoordinateSet CoordinateSet::contiguous(std::int64_t n) {
    CoordinateSet k;
    k.arity = 1;
    k.flat.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) k.flat[static_cast<std::size_t>(i)] = i;
    k.validate();
    return k;
}

CoordinateSet CoordinateSet::lattice(int arity, std::vector<std::int64_t> rows) {
    CoordinateSet k;
    k.arity = arity;
    k.flat = std::move(rows);
    k.validate();
    return k;
}

std::int64_t CoordinateSet::min_coord() const {
    return *std::min_element(flat.begin(), flat.end());
}

std::int64_t CoordinateSet::max_coord() const {
    return *std::max_element(flat.begin(), flat.end());
}

bool CoordinateSet::is_prefix_of(const CoordinateSet& larger) const {
    if (arity != larger.arity || flat.size() > larger.flat.size()) return false;
    return std::equal(flat.begin(), flat.end(), larger.flat.begin());
}

void CoordinateSet::validate() const {
    if (arity < 1) throw MalformedSpec("coordinate set: arity must be >= 1");
    if (flat.empty()) return;   // empty sets are allowed (vacuous windows)
    if (flat.size() % static_cast<std::size_t>(arity) != 0)
        throw MalformedSpec("coordinate set: ragged rows");
    if (size() > 64)
        throw WindowTooLarge("coordinate set: more than 64 coordinates");
    for (std::size_t i = 1; i < size(); ++i) {
        auto a = row(i - 1), b = row(i);
        if (!std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()))
            throw MalformedSpec("coordinate set: rows must be sorted and distinct");
    }
}

// ---------------------------------------------------------------------------
// extract_patterns (integer line)

namespace {

struct LocalStore {
    std::set<std::uint64_t> binary;
    std::set<std::vector<std::uint8_t>> general;
    std::uint64_t skipped = 0;
};

} // namespace

PatternStore extract_patterns(const SymbolicSource& source, const CoordinateSet& K,
                              const ShiftRange& range, int workers) {
    K.validate();
    if (K.arity != 1)
        throw DimensionMismatch("extract_patterns: lattice window needs a box budget");
    if (source.domain() != sources::Domain::integer_line)
        throw DimensionMismatch("extract_patterns: source is not Z-indexed");
    if (range.count() < 1) throw UsageError("extract_patterns: empty shift range");

    PatternStore store;
    store.window = K;
    store.alphabet = source.alphabet();
    store.range = range;
    store.shifts_scanned = range.count();
    if (K.flat.empty()) {
        // the unique empty pattern is realized by every shift
        if (store.alphabet == 2)
            store.binary.insert(0);
        else
            store.general.insert({});
        return store;
    }

    std::int64_t minc = K.min_coord(), maxc = K.max_coord();
    std::vector<std::uint8_t> line;
    source.line(range.lo + minc, range.hi + maxc, line);

    std::vector<std::size_t> offsets(K.size());
    for (std::size_t i = 0; i < K.size(); ++i)
        offsets[i] = static_cast<std::size_t>(K.at(i) - minc);

    bool binary = store.alphabet == 2;
    std::vector<LocalStore> locals(static_cast<std::size_t>(std::max(workers, 1)));
    std::mutex mu;   // guards nothing hot: locals are indexed by chunk

    for_chunks(range.lo, range.hi, workers,
               [&](int chunk, std::int64_t lo, std::int64_t hi) {
        LocalStore local;
        std::vector<std::uint8_t> row(K.size());
        for (std::int64_t m = lo; m <= hi; ++m) {
            std::size_t base = static_cast<std::size_t>(m - range.lo);
            bool skip = false;
            if (binary) {
                std::uint64_t mask = 0;
                for (std::size_t i = 0; i < offsets.size(); ++i) {
                    std::uint8_t c = line[base + offsets[i]];
                    if (c == sources::kAmbiguousCell) { skip = true; break; }
                    mask |= static_cast<std::uint64_t>(c & 1u) << i;
                }
                if (skip) { ++local.skipped; continue; }
                local.binary.insert(mask);
            } else {
                for (std::size_t i = 0; i < offsets.size(); ++i) {
                    std::uint8_t c = line[base + offsets[i]];
                    if (c == sources::kAmbiguousCell) { skip = true; break; }
                    row[i] = c;
                }
                if (skip) { ++local.skipped; continue; }
                local.general.insert(row);
            }
        }
        std::lock_guard<std::mutex> g(mu);
        locals[static_cast<std::size_t>(chunk)] = std::move(local);
    });

    for (auto& local : locals) {
        store.binary.merge(local.binary);
        store.general.merge(local.general);
        store.skipped += local.skipped;
    }
    return store;
}

// ---------------------------------------------------------------------------
// extract_patterns (lattice box)

PatternStore extract_patterns(const SymbolicSource& source, const CoordinateSet& K,
                              const LatticeBox& box, int workers) {
    (void)workers;   // box budgets are small; sequential keeps this simple
    K.validate();
    int k = source.generators();
    if (K.arity != k || static_cast<int>(box.radii.size()) != k)
        throw DimensionMismatch("extract_patterns: window/box arity != source arity");
    for (auto r : box.radii)
        if (r < 0) throw UsageError("extract_patterns: negative box radius");

    PatternStore store;
    store.window = K;
    store.alphabet = source.alphabet();
    store.box = box;
    store.shifts_scanned = box.count();
    if (K.flat.empty()) {
        if (store.alphabet == 2) store.binary.insert(0);
        else store.general.insert({});
        return store;
    }

    bool binary = store.alphabet == 2;
    std::vector<std::int64_t> shift(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        shift[static_cast<std::size_t>(i)] = -box.radii[static_cast<std::size_t>(i)];
    std::vector<std::int64_t> point(static_cast<std::size_t>(k));
    std::vector<std::uint8_t> row(K.size());

    bool done = false;
    while (!done) {
        bool skip = false;
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < K.size() && !skip; ++i) {
            auto r = K.row(i);
            for (int a = 0; a < k; ++a)
                point[static_cast<std::size_t>(a)] =
                    r[static_cast<std::size_t>(a)] + shift[static_cast<std::size_t>(a)];
            try {
                Symbol s = source.eval_lattice(point);
                if (binary)
                    mask |= static_cast<std::uint64_t>(s & 1) << i;
                else
                    row[i] = static_cast<std::uint8_t>(s);
            } catch (const AmbiguousBoundary&) {
                skip = true;
            }
        }
        if (skip)
            ++store.skipped;
        else if (binary)
            store.binary.insert(mask);
        else
            store.general.insert(row);

        // odometer over the box
        int axis = 0;
        for (; axis < k; ++axis) {
            auto i = static_cast<std::size_t>(axis);
            if (shift[i] < box.radii[i]) { ++shift[i]; break; }
            shift[i] = -box.radii[i];
        }
        if (axis == k) done = true;
    }
    return store;
}

// ---------------------------------------------------------------------------
// complexity_table: partition refinement over the materialized line

ComplexityTable complexity_table(const SymbolicSource& source, int n_max,
                                 std::int64_t M, int workers) {
    (void)workers;   // refinement is sequential; line evaluation dominates only
                     // for exotic sources and stays deterministic either way
    if (n_max < 1) throw UsageError("complexity_table: n_max must be >= 1");
    if (source.domain() != sources::Domain::integer_line)
        throw DimensionMismatch("complexity_table: source is not Z-indexed");

    ShiftRange range = source.natural_range(M);
    std::vector<std::uint8_t> line;
    source.line(range.lo, range.hi + n_max - 1, line);

    std::size_t P = static_cast<std::size_t>(range.count());
    int alpha = source.alphabet();

    ComplexityTable table;
    table.budget = M;
    table.range = range;
    table.p.resize(static_cast<std::size_t>(n_max));
    table.skipped.resize(static_cast<std::size_t>(n_max));

    // alive window-start positions with their current group id
    std::vector<std::uint32_t> pos(P), grp(P, 0);
    for (std::size_t i = 0; i < P; ++i) pos[i] = static_cast<std::uint32_t>(i);
    std::vector<std::uint32_t> buf(P), grp_buf(P);
    std::size_t groups = 1;

    for (int n = 1; n <= n_max; ++n) {
        // drop positions whose n-th cell is ambiguous
        std::size_t alive = 0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            std::uint8_t c = line[pos[i] + static_cast<std::size_t>(n) - 1];
            if (c == sources::kAmbiguousCell) continue;
            pos[alive] = pos[i];
            grp[alive] = grp[i];
            ++alive;
        }
        pos.resize(alive);
        grp.resize(alive);
        table.skipped[static_cast<std::size_t>(n - 1)] =
            static_cast<std::uint64_t>(P - alive);

        if (alive == 0) {
            table.p[static_cast<std::size_t>(n - 1)] = 0;
            groups = 0;
            continue;
        }

        // LSD radix: counting sort by the new symbol, then stable by group
        auto key = [&](std::uint32_t p_) {
            return line[p_ + static_cast<std::size_t>(n) - 1];
        };
        std::vector<std::uint32_t> cnt(static_cast<std::size_t>(alpha) + 1, 0);
        for (std::size_t i = 0; i < alive; ++i) ++cnt[key(pos[i])];
        std::uint32_t run = 0;
        for (auto& c : cnt) { std::uint32_t t = c; c = run; run += t; }
        buf.resize(alive);
        grp_buf.resize(alive);
        for (std::size_t i = 0; i < alive; ++i) {
            std::uint32_t slot = cnt[key(pos[i])]++;
            buf[slot] = pos[i];
            grp_buf[slot] = grp[i];
        }
        std::vector<std::uint32_t> cntg(groups, 0);
        for (std::size_t i = 0; i < alive; ++i) ++cntg[grp_buf[i]];
        run = 0;
        for (auto& c : cntg) { std::uint32_t t = c; c = run; run += t; }
        for (std::size_t i = 0; i < alive; ++i) {
            std::uint32_t slot = cntg[grp_buf[i]]++;
            pos[slot] = buf[i];
            grp[slot] = grp_buf[i];
        }
        // assign new group ids along the (group, symbol)-sorted order
        std::uint32_t next_id = 0;
        std::uint32_t prev_grp = 0;
        std::uint8_t prev_sym = 0;
        std::vector<std::uint32_t> new_grp(alive);
        for (std::size_t i = 0; i < alive; ++i) {
            std::uint8_t s = key(pos[i]);
            if (i == 0 || grp[i] != prev_grp || s != prev_sym) {
                prev_grp = grp[i];
                prev_sym = s;
                next_id = (i == 0) ? 0 : next_id + 1;
            }
            new_grp[i] = next_id;
        }
        grp = std::move(new_grp);
        groups = next_id + 1;
        table.p[static_cast<std::size_t>(n - 1)] = static_cast<std::int64_t>(groups);
    }
    return table;
}

std::string ComplexityTable::to_csv() const {
    std::ostringstream out;
    out << "n,p_n,budget,tainted\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        out << (i + 1) << ',' << p[i] << ',' << budget << ','
            << (skipped[i] > 0 ? "true" : "false") << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// projection growth

namespace {

struct LinearFit {
    double slope = 0.0, intercept = 0.0, sse = 0.0;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinearFit f;
    std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    double d = static_cast<double>(n) * sxx - sx * sx;
    if (d == 0) {
        f.intercept = n ? sy / static_cast<double>(n) : 0.0;
    } else {
        f.slope = (static_cast<double>(n) * sxy - sx * sy) / d;
        f.intercept = (sy - f.slope * sx) / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double r = ys[i] - (f.slope * xs[i] + f.intercept);
        f.sse += r * r;
    }
    return f;
}

} // namespace

GrowthFit fit_growth(std::span<const std::pair<std::int64_t, std::int64_t>> counts) {
    GrowthFit fit;
    if (counts.size() >= 3) {
        auto last = counts.size();
        if (counts[last - 1].second == counts[last - 2].second &&
            counts[last - 2].second == counts[last - 3].second) {
            fit.label = GrowthLabel::bounded;
            return fit;
        }
    }
    if (counts.size() < 2) {
        fit.label = GrowthLabel::bounded;
        return fit;
    }
    std::vector<double> lx, lgy, x;
    for (auto& [k, c] : counts) {
        double cc = std::max<double>(static_cast<double>(c), 1.0);
        lx.push_back(std::log2(std::max<double>(static_cast<double>(k), 1.0)));
        x.push_back(static_cast<double>(k));
        lgy.push_back(std::log2(cc));
    }
    LinearFit poly = least_squares(lx, lgy);   // log2 y ~ e * log2 k
    LinearFit expo = least_squares(x, lgy);    // log2 y ~ r * k
    fit.exponent = poly.slope;
    fit.rate = expo.slope;
    // residual dominance: the exponential fit must win decisively, not by a
    // sliver -- polynomial data with a near-doubling head otherwise slips
    // past (a true exponential drives sse to ~0)
    if (expo.slope >= 0.5 && expo.sse < 0.5 * poly.sse)
        fit.label = GrowthLabel::exponential;
    else if (poly.slope >= 1.5)
        fit.label = GrowthLabel::polynomial;
    else if (poly.slope >= 0.75)
        fit.label = GrowthLabel::linear;
    else
        fit.label = GrowthLabel::bounded;
    return fit;
}

std::string GrowthFit::describe() const {
    std::ostringstream out;
    switch (label) {
        case GrowthLabel::bounded: out << "bounded"; break;
        case GrowthLabel::linear: out << "linear"; break;
        case GrowthLabel::polynomial: out << "polynomial"; break;
        case GrowthLabel::exponential: out << "exponential"; break;
    }
    return out.str();
}

ProjectionGrowth projection_growth(const SymbolicSource& source,
                                   std::span<const CoordinateSet> prefixes,
                                   const ShiftRange& range, int workers) {
    if (prefixes.empty()) throw UsageError("projection_growth: no prefixes");
    for (std::size_t i = 1; i < prefixes.size(); ++i) {
        if (!(prefixes[i - 1].size() < prefixes[i].size()) ||
            !prefixes[i - 1].is_prefix_of(prefixes[i]))
            throw MalformedSpec("projection_growth: prefixes must be strictly nested");
    }
    ProjectionGrowth out;
    for (const auto& K : prefixes) {
        PatternStore store = extract_patterns(source, K, range, workers);
        out.counts.emplace_back(static_cast<std::int64_t>(K.size()),
                                static_cast<std::int64_t>(store.size()));
        out.tainted = out.tainted || store.tainted();
    }
    out.fit = fit_growth(out.counts);
    return out;
}

} // namespace tamelab::lang
