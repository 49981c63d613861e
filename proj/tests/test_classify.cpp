#include <doctest.h>

#include "fixtures.hpp"
#include "tamelab/classify.hpp"
#include "tamelab/json_io.hpp"

using namespace tamelab;
using classify::BudgetProfile;
using classify::Verdict;

namespace {

BudgetProfile small_profile() {
    BudgetProfile p;
    // 0^12 first appears in the disjunctive control word near shift 45057,
    // so the budget must reach past it for full-window freeness
    p.shifts = 50000;
    p.projection_shifts = 5000;
    p.entropy_shifts = 20000;
    p.entropy_n_max = 8;
    return p;
}

} // namespace

TEST_SUITE("classify") {

TEST_CASE("champernowne: both certificates, tame evidence against") {
    auto report = classify::classify(fixtures::champernowne(1 << 18),
                                     small_profile());
    CHECK(report.positive_entropy == Verdict::certified);
    CHECK(report.nonnull == Verdict::certified);
    CHECK(report.tame_consistent == Verdict::evidence_against);
    CHECK_FALSE(report.tainted);
    CHECK(report.size_certificates.size() == 3);
    for (const auto& cert : report.size_certificates) {
        CHECK(cert.verified);
        auto out = indep::verify_certificate(fixtures::champernowne(1 << 18), cert);
        CHECK(out.ok);   // soundness: re-verification against the source
    }
    // chain consistency held structurally (no throw) and k* strictly rose
    REQUIRE(report.plateau.size() == 3);
    CHECK(report.plateau[0].k_star < report.plateau[1].k_star);
    CHECK(report.plateau[1].k_star < report.plateau[2].k_star);
}

TEST_CASE("fibonacci: plateau at 2, tame evidence for") {
    auto report = classify::classify(fixtures::fibonacci(), small_profile());
    CHECK(report.positive_entropy == Verdict::evidence_against);
    CHECK(report.nonnull == Verdict::evidence_against);
    CHECK(report.tame_consistent == Verdict::evidence_for);
    for (const auto& rep : report.plateau) CHECK(rep.k_star == 2);
    for (const auto& fam : report.projections)
        CHECK(fam.growth.fit.label != lang::GrowthLabel::exponential);
}

TEST_CASE("constant source: trivially resolved") {
    auto report = classify::classify(fixtures::constant_zero(), small_profile());
    CHECK(report.positive_entropy == Verdict::evidence_against);
    CHECK(report.nonnull == Verdict::evidence_against);
    CHECK(report.tame_consistent == Verdict::evidence_for);
    for (const auto& rep : report.plateau) CHECK(rep.k_star == 0);
}

TEST_CASE("limitation note is always present") {
    auto report = classify::classify(fixtures::constant_zero(), small_profile());
    CHECK(report.limitation.find("countability") != std::string::npos);
    auto j = json_io::to_json(report);
    CHECK(j.contains("limitation"));
    CHECK(j["verdicts"]["tame_consistent"] == "EVIDENCE_FOR");
    CHECK(j["schema_version"] == 1);
}

TEST_CASE("budget monotonicity: certificates persist under larger budgets") {
    auto p1 = small_profile();
    auto report1 = classify::classify(fixtures::champernowne(1 << 18), p1);
    auto p2 = p1;
    p2.shifts = 40000;
    auto report2 = classify::classify(fixtures::champernowne(1 << 18), p2);
    CHECK(report1.positive_entropy == Verdict::certified);
    CHECK(report2.positive_entropy == Verdict::certified);
    CHECK(report2.nonnull == Verdict::certified);
}

TEST_CASE("profile validation") {
    BudgetProfile p;
    p.shifts = 0;
    CHECK_THROWS_AS(classify::classify(fixtures::constant_zero(), p), UsageError);
    p = small_profile();
    p.k_target = 10;   // exceeds threshold * max density length = 3
    CHECK_THROWS_AS(classify::classify(fixtures::constant_zero(), p), UsageError);
    p = small_profile();
    p.density_lengths = {4, 8};
    CHECK_THROWS_AS(classify::classify(fixtures::constant_zero(), p),
                    MalformedSpec);
}

TEST_CASE("report json embeds certificates that re-verify") {
    auto src = fixtures::champernowne(1 << 18);
    auto report = classify::classify(src, small_profile());
    auto j = json_io::to_json(report);
    for (const auto& cj : j["size_certificates"]) {
        auto cert = json_io::certificate_from_json(cj);
        CHECK(indep::verify_certificate(src, cert).ok);
    }
}

} // TEST_SUITE
