#pragma once

// Exact fixed-point arithmetic on the circle T = R/Z and on T^d.
//
// Every coordinate is a dyadic fraction mantissa/2^B held as a wide integer,
// so addition, subtraction and integer scalar multiplication are exact modulo
// one, with no rounding anywhere. Squared distances are carried at 2B
// fractional bits; radii are stored squared so that ball-membership tests
// never need a square root. Built-in quadratic irrational constants are
// produced by exact integer square roots (floor semantics).
//
// All values are immutable after construction and every operation is a pure
// function; unrestricted concurrent use is safe.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tamelab/errors.hpp"

namespace tamelab::torus {

using Wide = mpz_class;

// A point of [0,1) with B fractional bits: value = mantissa / 2^B.
class FixedPointFrac {
public:
    FixedPointFrac() : bits_(0), mantissa_(0) {}
    static FixedPointFrac from_mantissa(Wide mantissa, unsigned bits);
    static FixedPointFrac zero(unsigned bits) { return from_mantissa(0, bits); }

    unsigned bits() const { return bits_; }
    const Wide& mantissa() const { return mantissa_; }

    FixedPointFrac add(const FixedPointFrac& other) const;   // mod 1
    FixedPointFrac sub(const FixedPointFrac& other) const;   // mod 1
    FixedPointFrac mul_int(const Wide& n) const;             // n * x mod 1

    // min(|x-y|, 1-|x-y|), exact at B bits
    FixedPointFrac circle_distance(const FixedPointFrac& other) const;

    // widen to `bits` >= B by left-shifting the mantissa (value unchanged)
    FixedPointFrac widened(unsigned bits) const;

    std::string to_hex() const;   // lowercase, zero-padded to ceil(B/4)
    static FixedPointFrac from_hex(const std::string& hex, unsigned bits);
    double to_double() const;

    bool operator==(const FixedPointFrac& o) const {
        return bits_ == o.bits_ && mantissa_ == o.mantissa_;
    }
    bool operator<(const FixedPointFrac& o) const;

private:
    unsigned bits_;
    Wide mantissa_;
};

// Built-in exact constants.
FixedPointFrac make_golden(unsigned bits);                       // (sqrt5-1)/2
FixedPointFrac make_sqrt_rational(const Wide& p, const Wide& q,
                                  unsigned bits);                // frac(sqrt(p/q))
FixedPointFrac make_rational(const Wide& p, const Wide& q, unsigned bits);

class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(std::vector<FixedPointFrac> coords);
    static TorusPoint zero(int dimension, unsigned bits);

    int dimension() const { return static_cast<int>(coords_.size()); }
    unsigned bits() const { return coords_.empty() ? 0 : coords_[0].bits(); }
    const FixedPointFrac& coord(int i) const { return coords_[static_cast<size_t>(i)]; }
    const std::vector<FixedPointFrac>& coords() const { return coords_; }

    TorusPoint add(const TorusPoint& other) const;
    bool operator==(const TorusPoint& o) const { return coords_ == o.coords_; }

private:
    std::vector<FixedPointFrac> coords_;
};

// k commuting generators alpha_1..alpha_k on T^d, all at the same precision.
struct RotationSpec {
    std::vector<TorusPoint> alphas;

    int generators() const { return static_cast<int>(alphas.size()); }
    int dimension() const { return alphas.empty() ? 0 : alphas[0].dimension(); }
    unsigned bits() const { return alphas.empty() ? 0 : alphas[0].bits(); }
    void validate() const;
};

// z + sum n_i alpha_i, exact mod 1 coordinatewise. Shift components are
// checked against the periodicity-honesty bound |n_i| <= 2^(B/2): beyond it a
// B-bit dyadic orbit is no longer indistinguishable from the irrational one.
TorusPoint rotate(const TorusPoint& z, const RotationSpec& spec,
                  std::span<const std::int64_t> n);

// Minimum circular distance from x to any cut. Cuts must be nonempty,
// sorted, distinct.
FixedPointFrac boundary_distance(const FixedPointFrac& x,
                                 std::span<const FixedPointFrac> cuts);

// A nonnegative value at 2B fractional bits (squared distances, squared
// radii, guards). The integer part may be nonzero: values range up to d/4.
class SqValue {
public:
    SqValue() : frac_bits_(0), mantissa_(0) {}
    SqValue(Wide mantissa, unsigned frac_bits);

    unsigned frac_bits() const { return frac_bits_; }
    const Wide& mantissa() const { return mantissa_; }

    SqValue add(const SqValue& o) const;
    SqValue abs_diff(const SqValue& o) const;
    bool operator==(const SqValue& o) const;
    bool operator<(const SqValue& o) const;
    bool operator<=(const SqValue& o) const;

    std::string to_hex() const;
    static SqValue from_hex(const std::string& hex, unsigned frac_bits);
    double to_double() const;

private:
    unsigned frac_bits_;
    Wide mantissa_;
};

// sum_i min(|dx_i|, 1-|dx_i|)^2, exact at 2B fractional bits.
SqValue torus_sq_distance(const TorusPoint& p, const TorusPoint& q);

// Largest shift magnitude tolerated at precision B (2^(B/2)).
Wide max_shift_magnitude(unsigned bits);

} // namespace tamelab::torus
