#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tamelab/indep.hpp"
#include "tamelab/json_io.hpp"

using namespace tamelab;
using indep::FreeSetCertificate;
using indep::MissingPatterns;
using indep::SymbolPair;

TEST_SUITE("indep") {

TEST_CASE("champernowne is free on {0,1,2}") {
    auto champ = fixtures::champernowne(1 << 18);
    auto r = indep::is_free(champ, {0, 1, 2}, SymbolPair{0, 1},
                            ShiftRange::forward(10000));
    auto* cert = std::get_if<FreeSetCertificate>(&r);
    REQUIRE(cert != nullptr);
    CHECK(cert->verified);
    CHECK_FALSE(cert->tainted);
    // smallest witnesses frozen by oracle: pattern -> shift
    std::vector<std::int64_t> expect{18, 5, 7, 0, 6, 1, 2, 3};
    CHECK(cert->witnesses == expect);
}

TEST_CASE("fibonacci pairs: {0,1} misses exactly 00, {0,2} is free") {
    auto fib = fixtures::fibonacci();
    auto range = ShiftRange::symmetric(100000);

    auto r01 = indep::is_free(fib, {0, 1}, SymbolPair{0, 1}, range);
    auto* missing = std::get_if<MissingPatterns>(&r01);
    REQUIRE(missing != nullptr);
    CHECK(missing->missing == std::vector<std::uint64_t>{0});
    CHECK(missing->present == 3);
    CHECK_FALSE(missing->tainted);

    auto r02 = indep::is_free(fib, {0, 2}, SymbolPair{0, 1}, range);
    auto* cert = std::get_if<FreeSetCertificate>(&r02);
    REQUIRE(cert != nullptr);
    CHECK(cert->verified);
    // frozen smallest witnesses over [-1e5, 1e5]
    CHECK(cert->witnesses ==
          std::vector<std::int64_t>{-99996, -99998, -99999, -100000});
}

TEST_CASE("verify_certificate: round trip, perturbation, vacuous") {
    auto fib = fixtures::fibonacci();
    auto range = ShiftRange::symmetric(100000);
    auto r = indep::is_free(fib, {0, 2}, SymbolPair{0, 1}, range);
    auto cert = std::get<FreeSetCertificate>(r);
    CHECK(indep::verify_certificate(fib, cert).ok);

    auto bad = cert;
    bad.witnesses[1] += 1;
    CHECK_FALSE(indep::verify_certificate(fib, bad).ok);

    FreeSetCertificate vacuous;
    vacuous.pair = SymbolPair{0, 1};
    vacuous.witnesses = {0};
    vacuous.budget = ShiftRange{0, 0};
    CHECK(indep::verify_certificate(fib, vacuous).ok);
}

TEST_CASE("certificates survive JSON round-trips bit-exactly") {
    auto fib = fixtures::fibonacci();
    auto r = indep::is_free(fib, {0, 2}, SymbolPair{0, 1},
                            ShiftRange::symmetric(100000));
    auto cert = std::get<FreeSetCertificate>(r);
    auto j = tamelab::json_io::to_json(cert);
    auto back = tamelab::json_io::certificate_from_json(j);
    CHECK(back.coords == cert.coords);
    CHECK(back.witnesses == cert.witnesses);
    CHECK(back.pair.s0 == cert.pair.s0);
    CHECK(back.pair.s1 == cert.pair.s1);
    CHECK(back.budget.lo == cert.budget.lo);
    CHECK(back.budget.hi == cert.budget.hi);
    CHECK(back.verified == cert.verified);
    CHECK(tamelab::json_io::to_json(back).dump() == j.dump());
    CHECK(indep::verify_certificate(fib, back).ok);
}

TEST_CASE("anti-monotonicity: subsets of free sets are free") {
    auto champ = fixtures::champernowne(1 << 18);
    auto range = ShiftRange::forward(50000);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        std::set<std::int64_t> s;
        while (s.size() < 5) s.insert(static_cast<std::int64_t>(rng() % 9));
        std::vector<std::int64_t> coords(s.begin(), s.end());
        auto r = indep::is_free(champ, coords, SymbolPair{0, 1}, range);
        REQUIRE(std::holds_alternative<FreeSetCertificate>(r));
        // drop a random coordinate: still free
        coords.erase(coords.begin() +
                     static_cast<std::ptrdiff_t>(rng() % coords.size()));
        auto r2 = indep::is_free(champ, coords, SymbolPair{0, 1}, range);
        CHECK(std::holds_alternative<FreeSetCertificate>(r2));
    }
}

TEST_CASE("budget monotonicity: certificates survive larger budgets") {
    auto fib = fixtures::fibonacci();
    auto small = indep::is_free(fib, {0, 2}, SymbolPair{0, 1},
                                ShiftRange::symmetric(1000));
    REQUIRE(std::holds_alternative<FreeSetCertificate>(small));
    auto big = indep::is_free(fib, {0, 2}, SymbolPair{0, 1},
                              ShiftRange::symmetric(100000));
    CHECK(std::holds_alternative<FreeSetCertificate>(big));
}

TEST_CASE("window cap enforced") {
    auto fib = fixtures::fibonacci();
    std::vector<std::int64_t> big(25);
    for (int i = 0; i < 25; ++i) big[static_cast<std::size_t>(i)] = i;
    CHECK_THROWS_AS(
        indep::is_free(fib, big, SymbolPair{0, 1}, ShiftRange::symmetric(10)),
        WindowTooLarge);
    CHECK_THROWS_AS(
        indep::is_free(fib, {3, 1}, SymbolPair{0, 1}, ShiftRange::symmetric(10)),
        MalformedSpec);
}

TEST_CASE("max_free_size: fibonacci window {0..20} gives k* = 2, exhaustive") {
    auto fib = fixtures::fibonacci();
    std::vector<std::int64_t> window;
    for (std::int64_t i = 0; i <= 20; ++i) window.push_back(i);
    auto rep = indep::max_free_size(fib, window, SymbolPair{0, 1},
                                    ShiftRange::symmetric(100000), 5);
    CHECK(rep.k_star == 2);
    CHECK(rep.exhaustive);
    REQUIRE(rep.best.has_value());
    CHECK(rep.best->verified);
    CHECK(rep.best->coords.size() == 2);
}

TEST_CASE("max_free_size: natural indicator gives k* = 1") {
    auto nat = fixtures::natural_indicator();
    std::vector<std::int64_t> window;
    for (std::int64_t i = 0; i <= 20; ++i) window.push_back(i);
    auto rep = indep::max_free_size(nat, window, SymbolPair{0, 1},
                                    ShiftRange::symmetric(100000), 4);
    CHECK(rep.k_star == 1);
    CHECK(rep.exhaustive);
}

TEST_CASE("max_free_size: champernowne full window, constant zero") {
    auto champ = fixtures::champernowne(1 << 18);
    std::vector<std::int64_t> window{0, 1, 2, 3, 4, 5};
    auto rep = indep::max_free_size(champ, window, SymbolPair{0, 1},
                                    ShiftRange::forward(100000), 6);
    CHECK(rep.k_star == 6);
    CHECK(rep.exhaustive);
    CHECK(rep.best->verified);

    auto constant = fixtures::constant_zero();
    auto rep0 = indep::max_free_size(constant, window, SymbolPair{0, 1},
                                     ShiftRange::symmetric(100), 3);
    CHECK(rep0.k_star == 0);
    CHECK_FALSE(rep0.best.has_value());
    CHECK(rep0.exhaustive);
}

TEST_CASE("morse: free triple exists (oracle window)") {
    auto morse = fixtures::morse();
    auto r = indep::is_free(morse, {0, 1, 3}, SymbolPair{0, 1},
                            ShiftRange::forward(100000));
    auto* cert = std::get_if<FreeSetCertificate>(&r);
    REQUIRE(cert != nullptr);
    CHECK(cert->verified);
}

TEST_CASE("node budget exhaustion is reported, not thrown") {
    auto champ = fixtures::champernowne(1 << 18);
    std::vector<std::int64_t> window;
    for (std::int64_t i = 0; i < 10; ++i) window.push_back(i);
    auto rep = indep::max_free_size(champ, window, SymbolPair{0, 1},
                                    ShiftRange::forward(20000), 10, 5);
    CHECK(rep.budget_hit);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.nodes <= 5);
}

TEST_CASE("witness scans are worker-count independent") {
    auto fib = fixtures::fibonacci();
    auto a = indep::is_free(fib, {0, 2, 5}, SymbolPair{0, 1},
                            ShiftRange::symmetric(50000), 1);
    auto b = indep::is_free(fib, {0, 2, 5}, SymbolPair{0, 1},
                            ShiftRange::symmetric(50000), 8);
    // both missing-pattern lists or both certificates with equal witnesses
    if (auto* ca = std::get_if<FreeSetCertificate>(&a)) {
        auto* cb = std::get_if<FreeSetCertificate>(&b);
        REQUIRE(cb != nullptr);
        CHECK(ca->witnesses == cb->witnesses);
    } else {
        CHECK(std::get<MissingPatterns>(a).missing ==
              std::get<MissingPatterns>(b).missing);
    }
}

TEST_CASE("free_density_profile: ratios") {
    auto champ = fixtures::champernowne(1 << 18);
    auto prof = indep::free_density_profile(champ, {4, 8}, SymbolPair{0, 1},
                                            100000);
    REQUIRE(prof.size() == 2);
    CHECK(prof[0].ratio == 1.0);
    CHECK(prof[1].ratio == 1.0);
    CHECK(prof[0].exhaustive);

    auto fib = fixtures::fibonacci();
    auto fprof = indep::free_density_profile(fib, {8, 16}, SymbolPair{0, 1},
                                             100000);
    CHECK(fprof[0].k_star == 2);
    CHECK(fprof[1].k_star == 2);
    CHECK(fprof[1].ratio == doctest::Approx(2.0 / 16.0));

    auto constant = fixtures::constant_zero();
    auto cprof = indep::free_density_profile(constant, {4, 8}, SymbolPair{0, 1},
                                             100);
    CHECK(cprof[0].k_star == 0);
    CHECK(cprof[1].k_star == 0);
}

TEST_CASE("cell-bound ceiling: 1-d rotation codings cap at k* = 2") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        unsigned B = 128;
        sources::RotationCodingSpec spec;
        spec.rotation.alphas = {torus::TorusPoint(
            {torus::FixedPointFrac::from_mantissa(
                torus::Wide(rng()) * torus::Wide(rng()) | 1, B)})};
        spec.base = torus::FixedPointFrac::zero(B);
        spec.partition.cuts = {torus::FixedPointFrac::zero(B),
                               torus::FixedPointFrac::from_mantissa(
                                   torus::Wide(rng()) * torus::Wide(rng()) | 1, B)};
        auto src = sources::SymbolicSource::rotation(std::move(spec));
        std::vector<std::int64_t> window;
        for (std::int64_t i = 0; i < 12; ++i) window.push_back(i);
        auto rep = indep::max_free_size(src, window, SymbolPair{0, 1},
                                        ShiftRange::symmetric(20000), 4);
        CHECK(rep.k_star <= 2);
    }
}

} // TEST_SUITE
