#pragma once

// Freeness of coordinate sets with machine-checkable witness certificates,
// plus branch-and-bound search for maximum free sets. A set A is free (for a
// symbol pair) when every pattern in {s0,s1}^A is realized by some in-budget
// shift whose full restriction uses only {s0,s1}.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tamelab/lang.hpp"
#include "tamelab/shift.hpp"
#include "tamelab/sources.hpp"

namespace tamelab::indep {

using sources::Symbol;
using sources::SymbolicSource;

struct SymbolPair {
    Symbol s0 = 0;
    Symbol s1 = 1;
    void validate() const {
        if (s0 == s1) throw MalformedSpec("symbol pair: symbols must differ");
    }
};

struct FreeSetCertificate {
    std::vector<std::int64_t> coords;      // sorted ascending
    SymbolPair pair;
    std::vector<std::int64_t> witnesses;   // witnesses[p] realizes pattern p;
                                           // bit i of p = (symbol at coords[i]
                                           // equals s1), LSB = smallest coord
    ShiftRange budget{0, 0};
    bool verified = false;
    bool tainted = false;
};

struct MissingPatterns {
    std::vector<std::uint64_t> missing;    // ascending pattern values
    std::uint64_t present = 0;
    bool tainted = false;
};

using FreeResult = std::variant<FreeSetCertificate, MissingPatterns>;

// Witness scan over the shift range; parallel chunks merge by keeping the
// smallest witness shift per pattern, so results are worker-count
// independent. |A| <= 24.
FreeResult is_free(const SymbolicSource& source,
                   const std::vector<std::int64_t>& coords, SymbolPair pair,
                   const ShiftRange& range, int workers = 1);

struct VerifyOutcome {
    bool ok = false;
    bool tainted = false;
    std::string note;
};

// Re-evaluates every witness; true iff all patterns reproduce exactly.
VerifyOutcome verify_certificate(const SymbolicSource& source,
                                 const FreeSetCertificate& cert);

struct SearchReport {
    int k_star = 0;
    std::optional<FreeSetCertificate> best;
    bool exhaustive = false;
    std::uint64_t nodes = 0;
    bool budget_hit = false;
    bool tainted = false;
    ShiftRange budget{0, 0};
};

// Depth-first search over subsets of the window, coordinates in ascending
// order, extending one coordinate at a time; a candidate whose pattern count
// already falls short of 2^size is pruned together with all its supersets
// (a superset cannot recover a missing sub-pattern). The search runs
// sequentially so the node budget is consumed deterministically.
SearchReport max_free_size(const SymbolicSource& source,
                           const std::vector<std::int64_t>& window,
                           SymbolPair pair, const ShiftRange& range, int k_max,
                           std::uint64_t node_budget = 10'000'000,
                           int workers = 1);

struct DensityPoint {
    std::int64_t length = 0;
    int k_star = 0;
    double ratio = 0.0;
    bool exhaustive = false;
};

// max_free_size on {0..L-1} per length; the ratio column is the
// positive-density proxy.
std::vector<DensityPoint> free_density_profile(
    const SymbolicSource& source, const std::vector<std::int64_t>& lengths,
    SymbolPair pair, std::int64_t per_length_budget,
    std::uint64_t node_budget = 10'000'000, int workers = 1);

} // namespace tamelab::indep
