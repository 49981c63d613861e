#include "tamelab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tamelab::classify {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::certified: return "CERTIFIED";
        case Verdict::evidence_for: return "EVIDENCE_FOR";
        case Verdict::evidence_against: return "EVIDENCE_AGAINST";
        case Verdict::undetermined: return "UNDETERMINED";
    }
    return "UNDETERMINED";
}

void BudgetProfile::validate() const {
    if (shifts < 1) throw UsageError("classify: shift budget must be >= 1");
    if (density_lengths.size() < 3)
        throw MalformedSpec("classify: need >= 3 density lengths");
    if (plateau_windows.size() < 3)
        throw MalformedSpec("classify: need >= 3 plateau windows");
    for (std::size_t i = 1; i < density_lengths.size(); ++i)
        if (density_lengths[i - 1] >= density_lengths[i])
            throw MalformedSpec("classify: density lengths must increase");
    for (std::size_t i = 1; i < plateau_windows.size(); ++i)
        if (plateau_windows[i - 1] >= plateau_windows[i])
            throw MalformedSpec("classify: plateau windows must increase");
    pair.validate();
    if (k_target < 1) throw UsageError("classify: k_target must be >= 1");
    // keeps the chain sound: a density certificate must subsume all k <= k_target
    double cap = density_threshold * static_cast<double>(density_lengths.back());
    if (static_cast<double>(k_target) > cap)
        throw UsageError("classify: k_target exceeds threshold * max density length; "
                         "a density certificate could not subsume it");
}

namespace {

std::vector<lang::CoordinateSet> contiguous_family(int max_size) {
    std::vector<lang::CoordinateSet> out;
    for (int j = 1; j <= max_size; ++j)
        out.push_back(lang::CoordinateSet::contiguous(j));
    return out;
}

std::vector<lang::CoordinateSet> geometric_family(int max_size) {
    std::vector<lang::CoordinateSet> out;
    std::vector<std::int64_t> coords;
    for (int j = 0; j < max_size; ++j) {
        coords.push_back((std::int64_t(1) << j) - 1);   // 0, 1, 3, 7, ...
        out.push_back(lang::CoordinateSet::line(coords));
    }
    return out;
}

std::vector<lang::CoordinateSet> sparse_family(int max_size) {
    // seeded random sparse coordinates; fixed seed keeps reports replayable
    std::mt19937_64 rng(0x5eed5eedULL);
    std::vector<std::int64_t> coords;
    std::uniform_int_distribution<std::int64_t> dist(0, 399);
    while (static_cast<int>(coords.size()) < max_size) {
        std::int64_t c = dist(rng);
        if (std::find(coords.begin(), coords.end(), c) == coords.end())
            coords.push_back(c);
    }
    std::sort(coords.begin(), coords.end());
    std::vector<lang::CoordinateSet> out;
    for (int j = 1; j <= max_size; ++j)
        out.push_back(lang::CoordinateSet::line(
            std::vector<std::int64_t>(coords.begin(), coords.begin() + j)));
    return out;
}

} // namespace

Report classify(const sources::SymbolicSource& source, const BudgetProfile& profile) {
    profile.validate();
    Report report;
    report.profile = profile;
    report.limitation =
        "no HNS/countability verdict: finite sampling cannot distinguish a "
        "countable subshift from an uncountable one of equal word complexity";

    ShiftRange main_range = source.natural_range(profile.shifts);

    // --- density profile (positive entropy) ---
    report.density = indep::free_density_profile(
        source, profile.density_lengths, profile.pair, profile.shifts,
        profile.node_budget, profile.workers);
    bool density_ok = true;
    for (const auto& pt : report.density)
        density_ok = density_ok && pt.exhaustive &&
                     pt.ratio >= profile.density_threshold;
    bool density_exhaustive = true;
    for (const auto& pt : report.density)
        density_exhaustive = density_exhaustive && pt.exhaustive;
    if (density_ok)
        report.positive_entropy = Verdict::certified;
    else if (density_exhaustive)
        report.positive_entropy = Verdict::evidence_against;
    else
        report.positive_entropy = Verdict::undetermined;

    // --- plateau searches over growing windows ---
    bool plateau_exhaustive = true;
    for (std::int64_t w : profile.plateau_windows) {
        std::vector<std::int64_t> window(static_cast<std::size_t>(w));
        for (std::int64_t i = 0; i < w; ++i)
            window[static_cast<std::size_t>(i)] = i;
        auto rep = indep::max_free_size(source, window, profile.pair, main_range,
                                        static_cast<int>(std::min<std::int64_t>(w, 24)),
                                        profile.node_budget, profile.workers);
        plateau_exhaustive = plateau_exhaustive && rep.exhaustive;
        report.tainted = report.tainted || rep.tainted;
        report.plateau.push_back(std::move(rep));
    }

    // --- explicit certificates for k = 1..k_target (nonnull) ---
    int max_kstar = 0;
    for (const auto& rep : report.plateau) max_kstar = std::max(max_kstar, rep.k_star);
    bool all_k_certified = max_kstar >= profile.k_target;
    if (all_k_certified) {
        // anti-monotonicity makes every k <= k* free; record explicit
        // verified certificates by restricting the best set found
        const auto& best = *std::max_element(
            report.plateau.begin(), report.plateau.end(),
            [](const auto& a, const auto& b) { return a.k_star < b.k_star; });
        for (int k = 1; k <= profile.k_target; ++k) {
            std::vector<std::int64_t> coords(best.best->coords.begin(),
                                             best.best->coords.begin() + k);
            auto r = indep::is_free(source, coords, profile.pair, main_range,
                                    profile.workers);
            if (auto* cert = std::get_if<indep::FreeSetCertificate>(&r)) {
                report.size_certificates.push_back(*cert);
            } else {
                all_k_certified = false;   // taint or budget anomaly
                break;
            }
        }
    }
    if (all_k_certified)
        report.nonnull = Verdict::certified;
    else if (plateau_exhaustive)
        report.nonnull = Verdict::evidence_against;
    else
        report.nonnull = Verdict::undetermined;

    // chain consistency: a density certificate subsumes the size certificates
    if (report.positive_entropy == Verdict::certified &&
        report.nonnull != Verdict::certified)
        throw std::logic_error("classify: positive-entropy certificate without "
                               "nonnull certificate (profile violates the chain)");

    // --- projection growth families ---
    ShiftRange proj_range =
        source.natural_range(profile.effective_projection_shifts());
    int fam_size = static_cast<int>(
        std::min<std::int64_t>(profile.plateau_windows.back(), 12));
    auto add_family = [&](const std::string& name,
                          std::vector<lang::CoordinateSet> prefixes) {
        ProjectionFamily fam;
        fam.name = name;
        fam.growth = lang::projection_growth(source, prefixes, proj_range,
                                             profile.workers);
        report.tainted = report.tainted || fam.growth.tainted;
        report.projections.push_back(std::move(fam));
    };
    add_family("contiguous", contiguous_family(fam_size));
    add_family("geometric", geometric_family(std::min(fam_size, 10)));
    add_family("sparse", sparse_family(fam_size));

    bool all_subexponential = true;
    for (const auto& fam : report.projections)
        all_subexponential = all_subexponential &&
                             fam.growth.fit.label != lang::GrowthLabel::exponential;

    // --- entropy heuristic payload ---
    report.entropy_estimate = entropy::topological_entropy(
        source, profile.entropy_n_max, profile.effective_entropy_shifts(),
        profile.workers);
    report.tainted = report.tainted || report.entropy_estimate->tainted;

    // --- tame consistency ---
    std::vector<int> kstars;
    for (const auto& rep : report.plateau) kstars.push_back(rep.k_star);
    bool plateau_flat = true, strictly_up = true;
    for (std::size_t i = 1; i < kstars.size(); ++i) {
        plateau_flat = plateau_flat && kstars[i] == kstars[0];
        strictly_up = strictly_up && kstars[i] > kstars[i - 1];
    }
    bool uncapped = true;   // a k* equal to its window cap says nothing
    for (std::size_t i = 0; i < kstars.size(); ++i)
        uncapped = uncapped &&
                   kstars[i] < profile.plateau_windows[i];
    if (plateau_exhaustive && plateau_flat && uncapped && all_subexponential)
        report.tame_consistent = Verdict::evidence_for;
    else if (plateau_exhaustive && strictly_up)
        report.tame_consistent = Verdict::evidence_against;
    else
        report.tame_consistent = Verdict::undetermined;

    return report;
}

} // namespace tamelab::classify
