#pragma once

// Finite languages of a source: observed restrictions of orbit translates to
// coordinate sets, word-complexity tables, and projection-growth probes.
// Ambiguous evaluations are skipped and counted, never silently classified;
// any skip taints the output.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tamelab/shift.hpp"
#include "tamelab/sources.hpp"

namespace tamelab::lang {

using sources::Symbol;
using sources::SymbolicSource;

// Sorted distinct indices; integers (arity 1) or lattice points (arity k,
// stored row-major, rows in lexicographic order).
struct CoordinateSet {
    int arity = 1;
    std::vector<std::int64_t> flat;

    static CoordinateSet line(std::vector<std::int64_t> coords);
    static CoordinateSet contiguous(std::int64_t n);            // {0..n-1}
    static CoordinateSet lattice(int arity, std::vector<std::int64_t> rows);

    std::size_t size() const {
        return arity > 0 ? flat.size() / static_cast<std::size_t>(arity) : 0;
    }
    std::int64_t at(std::size_t i) const { return flat[i]; }    // arity-1 view
    std::span<const std::int64_t> row(std::size_t i) const {
        return {flat.data() + i * static_cast<std::size_t>(arity),
                static_cast<std::size_t>(arity)};
    }
    std::int64_t min_coord() const;
    std::int64_t max_coord() const;
    bool is_prefix_of(const CoordinateSet& larger) const;
    void validate() const;   // sorted rows, distinct, size <= 64
};

struct PatternStore {
    CoordinateSet window;
    int alphabet = 2;
    std::set<std::uint64_t> binary;                 // alphabet == 2
    std::set<std::vector<std::uint8_t>> general;    // otherwise
    std::uint64_t skipped = 0;                      // ambiguous shifts
    std::int64_t shifts_scanned = 0;
    ShiftRange range{0, 0};
    std::optional<LatticeBox> box;

    std::size_t size() const {
        return alphabet == 2 ? binary.size() : general.size();
    }
    bool tainted() const { return skipped > 0; }
};

// Exactly { (eval(source, a + m))_{a in K} : m in range, unambiguous }.
// The pattern of a shift packs symbols with K's first (smallest) coordinate
// as the least-significant position.
PatternStore extract_patterns(const SymbolicSource& source, const CoordinateSet& K,
                              const ShiftRange& range, int workers = 1);

// Lattice variant: shifts run over the axis-aligned box.
PatternStore extract_patterns(const SymbolicSource& source, const CoordinateSet& K,
                              const LatticeBox& box, int workers = 1);

struct ComplexityTable {
    std::vector<std::int64_t> p;          // p[n-1] = p(n), n = 1..n_max
    std::vector<std::uint64_t> skipped;   // per n
    std::int64_t budget = 0;              // requested M
    ShiftRange range{0, 0};

    bool tainted() const {
        for (auto s : skipped)
            if (s) return true;
        return false;
    }
    std::string to_csv() const;           // columns n, p_n, budget, tainted
};

// p(n) = number of distinct length-n windows over the budget; computed by
// partition refinement over the materialized line (identical, by
// construction, to extract_patterns on {0..n-1}).
ComplexityTable complexity_table(const SymbolicSource& source, int n_max,
                                 std::int64_t M, int workers = 1);

enum class GrowthLabel { bounded, linear, polynomial, exponential };

struct GrowthFit {
    GrowthLabel label = GrowthLabel::bounded;
    double exponent = 0.0;    // count ~ c * |K|^e
    double rate = 0.0;        // count ~ c * 2^(r |K|)
    std::string describe() const;
};

// Least-squares fits on log-transformed counts; thresholds are fixed:
// exponential iff rate >= 0.5 with residual dominance, polynomial iff
// e >= 1.5, linear iff 0.75 <= e < 1.5, bounded iff the last three counts
// are equal (or nothing grows).
GrowthFit fit_growth(std::span<const std::pair<std::int64_t, std::int64_t>> counts);

struct ProjectionGrowth {
    std::vector<std::pair<std::int64_t, std::int64_t>> counts;  // (|K|, count)
    GrowthFit fit;
    bool tainted = false;
};

ProjectionGrowth projection_growth(const SymbolicSource& source,
                                   std::span<const CoordinateSet> prefixes,
                                   const ShiftRange& range, int workers = 1);

} // namespace tamelab::lang
