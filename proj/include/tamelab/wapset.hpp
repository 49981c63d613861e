#pragma once

// Finite-scale Ruppert probe for WAP subsets of Z: for F inside a candidate
// infinite set B, S_F(N) = intersection of b+D over b in F, T_F(N) =
// intersection over b in (B cap [-N,N]) \ F, both cut to [-N,N]; D passes
// when some F makes |S_F \ T_F| stabilize across the last two horizons.

#include <cstdint>
#include <string>
#include <vector>

#include "tamelab/indep.hpp"
#include "tamelab/lang.hpp"
#include "tamelab/sources.hpp"

namespace tamelab::wapset {

struct RuppertProbe {
    sources::IntegerSetSpec d_set;
    sources::IntegerSetSpec b_set;
    int f_max = 3;
    std::vector<std::int64_t> horizons;   // strictly increasing, >= 3 entries

    void validate() const;
};

enum class RuppertOutcome { pass, fail_evidence };

struct FCell {
    std::vector<std::int64_t> f;
    std::vector<std::int64_t> sizes;      // per horizon
};

struct RuppertVerdict {
    RuppertOutcome outcome = RuppertOutcome::fail_evidence;
    std::vector<std::int64_t> f;          // witness F (pass) / best F (fail)
    std::vector<std::int64_t> sizes;      // per horizon for that F
    std::vector<std::int64_t> horizons;
    std::string growth;                   // bounded/sublinear/linear/superlinear
    std::vector<FCell> table;             // every F tried, in search order
};

RuppertVerdict ruppert_test(const RuppertProbe& probe, int workers = 1);

struct CountabilityNote {
    lang::ComplexityTable complexity;
    indep::SearchReport search;
};

// Routes D through the indicator source: complexity table to n_max at budget
// M, and max_free_size on {0..window-1}.
CountabilityNote wap_countability_note(const sources::IntegerSetSpec& d_set,
                                       int n_max, std::int64_t M,
                                       std::int64_t window, int k_max,
                                       std::uint64_t node_budget = 10'000'000,
                                       int workers = 1);

} // namespace tamelab::wapset
