#pragma once

// Aggregates certificates and heuristics into a structured verdict along the
// chain positive-entropy > nonnull > nontame. CERTIFIED appears only with
// embedded verified certificates; tame-consistency is one-sided at finite
// scale and never exceeds evidence. No HNS/countability verdict is emitted:
// finite sampling cannot attest countability (a Sturmian system and the
// two-point compactification share p(n) = n+1 yet differ in cardinality);
// every report carries this limitation note.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamelab/entropy.hpp"
#include "tamelab/indep.hpp"
#include "tamelab/lang.hpp"
#include "tamelab/sources.hpp"

namespace tamelab::classify {

enum class Verdict { certified, evidence_for, evidence_against, undetermined };

std::string verdict_name(Verdict v);

struct BudgetProfile {
    std::int64_t shifts = 0;                 // master M; mandatory
    std::int64_t projection_shifts = -1;     // default min(shifts, 1e5)
    std::int64_t entropy_shifts = -1;        // default min(shifts, 1e6)
    int entropy_n_max = 10;
    std::vector<std::int64_t> plateau_windows = {10, 11, 12};
    std::vector<std::int64_t> density_lengths = {4, 8, 12};
    int k_target = 3;
    double density_threshold = 0.25;
    indep::SymbolPair pair{0, 1};
    std::uint64_t node_budget = 10'000'000;
    int workers = 1;

    void validate() const;
    std::int64_t effective_projection_shifts() const {
        return projection_shifts >= 0 ? projection_shifts
                                      : std::min<std::int64_t>(shifts, 100'000);
    }
    std::int64_t effective_entropy_shifts() const {
        return entropy_shifts >= 0 ? entropy_shifts
                                   : std::min<std::int64_t>(shifts, 1'000'000);
    }
};

struct ProjectionFamily {
    std::string name;
    lang::ProjectionGrowth growth;
};

struct Report {
    Verdict positive_entropy = Verdict::undetermined;
    Verdict nonnull = Verdict::undetermined;
    Verdict tame_consistent = Verdict::undetermined;

    std::vector<indep::DensityPoint> density;
    std::vector<indep::FreeSetCertificate> size_certificates;  // k = 1..k_target
    std::vector<indep::SearchReport> plateau;                  // per window
    std::vector<ProjectionFamily> projections;
    std::optional<entropy::EntropyEstimate> entropy_estimate;

    bool tainted = false;
    std::string limitation;
    BudgetProfile profile;
};

Report classify(const sources::SymbolicSource& source, const BudgetProfile& profile);

} // namespace tamelab::classify
