#pragma once

// Shared source constructions used across the unit and acceptance suites.

#include "tamelab/sources.hpp"
#include "tamelab/torus.hpp"

namespace fixtures {

using namespace tamelab;

// alpha = (sqrt5-1)/2, cuts {0, 1-alpha}, z = 0
inline sources::SymbolicSource fibonacci(unsigned bits = 256) {
    sources::RotationCodingSpec spec;
    auto golden = torus::make_golden(bits);
    spec.rotation.alphas = {torus::TorusPoint({golden})};
    spec.base = torus::FixedPointFrac::zero(bits);
    auto one_minus_golden = torus::FixedPointFrac::zero(bits).sub(golden);
    spec.partition.cuts = {torus::FixedPointFrac::zero(bits), one_minus_golden};
    return sources::SymbolicSource::rotation(std::move(spec));
}

inline sources::SymbolicSource morse(std::size_t cap = 1u << 21) {
    sources::SubstitutionSpec spec;
    spec.rules = {{0, {0, 1}}, {1, {1, 0}}};
    spec.seed = 0;
    spec.max_length = cap;
    return sources::SymbolicSource::substitution(std::move(spec));
}

inline sources::SymbolicSource champernowne(std::size_t cap = 1u << 24) {
    sources::ChampernowneSpec spec;
    spec.max_length = cap;
    return sources::SymbolicSource::champernowne(spec);
}

inline sources::SymbolicSource kerr_li(std::size_t cap = 1u << 21) {
    sources::KerrLiSpec spec;
    spec.max_length = cap;
    return sources::SymbolicSource::kerr_li(spec);
}

inline sources::SymbolicSource natural_indicator() {
    sources::IntegerSetSpec set;
    set.kind = sources::IntegerSetSpec::Natural{};
    return sources::SymbolicSource::indicator(set);
}

inline sources::SymbolicSource ip_ten_indicator() {
    sources::IntegerSetSpec set;
    set.kind = sources::IntegerSetSpec::IpBase{10, 1};
    return sources::SymbolicSource::indicator(set);
}

inline sources::SymbolicSource evens_indicator() {
    sources::IntegerSetSpec set;
    set.kind = sources::IntegerSetSpec::Periodic{2, {0}};
    return sources::SymbolicSource::indicator(set);
}

inline sources::SymbolicSource constant_zero() {
    return sources::SymbolicSource::constant(sources::ConstantSpec{0, 2});
}

// T^2 sphere coding fixture: alpha = (golden, sqrt2-1), y0 = center = (0,0).
// sq_radius/guard unset; fill from choose_safe_radius or the frozen hex.
inline sources::SphereCodingSpec sphere_t2_base(unsigned bits = 256) {
    sources::SphereCodingSpec spec;
    auto g = torus::make_golden(bits);
    auto s = torus::make_sqrt_rational(torus::Wide(2), torus::Wide(1), bits);
    spec.alpha = torus::TorusPoint({g, s});
    spec.base = torus::TorusPoint::zero(2, bits);
    spec.center = torus::TorusPoint::zero(2, bits);
    return spec;
}

// oracle-frozen safe radius for sphere_t2_base with N = 1e5,
// r in [1/8, 7/16], delta = 2^-40
inline const char* kSphereT2RadiusHex =
    "1d2b33964b8c3f69e120ba0e604620bce4f19e51d3ac10d65847eebb50771d2d"
    "d0c86507d46b7c14bf64b76cad36f1c0842ed80b89079de3c5d7013a9186393e";

// rho ~ 1/pi, parabolic translation, z = 0.2, cuts {0, 0.72}
inline sources::FreeGroupCodingSpec free_group_fixture() {
    sources::FreeGroupCodingSpec spec;
    spec.rho = 0.3183098861837907;
    spec.mobius = {1.0, 1.0, 0.0, 1.0};
    spec.base = 0.2;
    spec.cuts = {0.0, 0.72};
    spec.float_guard = 1e-9;
    spec.max_word_length = 12;
    return spec;
}

} // namespace fixtures
