#include "tamelab/torus.hpp"

#include <algorithm>
#include <sstream>

namespace tamelab::torus {

namespace {

Wide pow2(unsigned bits) {
    Wide r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
    return r;
}

Wide floor_sqrt(const Wide& x) {
    Wide r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

bool is_perfect_square(const Wide& x) {
    return mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

std::string pad_hex(const Wide& v, unsigned bits) {
    std::string s = v.get_str(16);
    size_t digits = (bits + 3) / 4;
    if (s.size() < digits) s.insert(0, digits - s.size(), '0');
    return s;
}

Wide parse_hex(const std::string& hex, unsigned bits, const char* what) {
    if (hex.empty())
        throw MalformedConstant(std::string(what) + ": empty hex string");
    for (char c : hex) {
        bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok)
            throw MalformedConstant(std::string(what) +
                                    ": hex must be lowercase [0-9a-f], got '" +
                                    std::string(1, c) + "'");
    }
    Wide v;
    if (mpz_set_str(v.get_mpz_t(), hex.c_str(), 16) != 0)
        throw MalformedConstant(std::string(what) + ": unparsable hex");
    if (v >= pow2(bits))
        throw MalformedConstant(std::string(what) + ": mantissa >= 2^" +
                                std::to_string(bits));
    return v;
}

} // namespace

FixedPointFrac FixedPointFrac::from_mantissa(Wide mantissa, unsigned bits) {
    if (bits == 0) throw MalformedConstant("precision must be >= 1 bit");
    FixedPointFrac f;
    f.bits_ = bits;
    Wide mod = pow2(bits);
    mpz_fdiv_r(f.mantissa_.get_mpz_t(), mantissa.get_mpz_t(), mod.get_mpz_t());
    return f;
}

FixedPointFrac FixedPointFrac::add(const FixedPointFrac& other) const {
    if (bits_ != other.bits_)
        throw DimensionMismatch("add: mixed precisions " + std::to_string(bits_) +
                                " vs " + std::to_string(other.bits_));
    Wide s = mantissa_ + other.mantissa_;
    Wide mod = pow2(bits_);
    if (s >= mod) s -= mod;
    FixedPointFrac f;
    f.bits_ = bits_;
    f.mantissa_ = std::move(s);
    return f;
}

FixedPointFrac FixedPointFrac::sub(const FixedPointFrac& other) const {
    if (bits_ != other.bits_)
        throw DimensionMismatch("sub: mixed precisions");
    Wide s = mantissa_ - other.mantissa_;
    if (s < 0) s += pow2(bits_);
    FixedPointFrac f;
    f.bits_ = bits_;
    f.mantissa_ = std::move(s);
    return f;
}

FixedPointFrac FixedPointFrac::mul_int(const Wide& n) const {
    return from_mantissa(mantissa_ * n, bits_);
}

FixedPointFrac FixedPointFrac::circle_distance(const FixedPointFrac& other) const {
    FixedPointFrac d = sub(other);
    Wide alt = pow2(bits_) - d.mantissa_;
    if (alt < d.mantissa_) d.mantissa_ = std::move(alt);
    return d;
}

FixedPointFrac FixedPointFrac::widened(unsigned bits) const {
    if (bits < bits_)
        throw MalformedConstant("widened: cannot narrow precision");
    FixedPointFrac f;
    f.bits_ = bits;
    f.mantissa_ = mantissa_ << (bits - bits_);
    return f;
}

std::string FixedPointFrac::to_hex() const { return pad_hex(mantissa_, bits_); }

FixedPointFrac FixedPointFrac::from_hex(const std::string& hex, unsigned bits) {
    FixedPointFrac f;
    f.bits_ = bits;
    f.mantissa_ = parse_hex(hex, bits, "FixedPointFrac");
    return f;
}

double FixedPointFrac::to_double() const {
    mpf_class v(mantissa_, 64);
    mpf_div_2exp(v.get_mpf_t(), v.get_mpf_t(), bits_);
    return v.get_d();
}

bool FixedPointFrac::operator<(const FixedPointFrac& o) const {
    if (bits_ != o.bits_)
        throw DimensionMismatch("compare: mixed precisions");
    return mantissa_ < o.mantissa_;
}

FixedPointFrac make_golden(unsigned bits) {
    if (bits < 2) throw MalformedConstant("golden needs >= 2 bits");
    // floor(((sqrt5 - 1)/2) * 2^B) = isqrt(5 * 2^(2B-2)) - 2^(B-1)
    Wide m = floor_sqrt(Wide(5) * pow2(2 * bits - 2)) - pow2(bits - 1);
    return FixedPointFrac::from_mantissa(std::move(m), bits);
}

FixedPointFrac make_sqrt_rational(const Wide& p, const Wide& q, unsigned bits) {
    if (q <= 0 || p < 0) throw MalformedConstant("sqrt_rational: need p >= 0, q >= 1");
    Wide g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw MalformedConstant("sqrt_rational: p/q not in lowest terms");
    if (is_perfect_square(p) && is_perfect_square(q))
        throw MalformedConstant("sqrt_rational: p/q is a perfect square");
    // floor(sqrt(p/q) * 2^B) = isqrt(floor(p*2^(2B)/q)); subtract integer part
    Wide whole = floor_sqrt(p / q);
    Wide m = floor_sqrt(p * pow2(2 * bits) / q) - whole * pow2(bits);
    return FixedPointFrac::from_mantissa(std::move(m), bits);
}

FixedPointFrac make_rational(const Wide& p, const Wide& q, unsigned bits) {
    if (q <= 0 || p < 0 || p >= q)
        throw MalformedConstant("rational: need 0 <= p/q < 1");
    Wide g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1 && p != 0)
        throw MalformedConstant("rational: p/q not in lowest terms");
    return FixedPointFrac::from_mantissa(p * pow2(bits) / q, bits);
}

TorusPoint::TorusPoint(std::vector<FixedPointFrac> coords)
    : coords_(std::move(coords)) {
    if (coords_.empty()) throw DimensionMismatch("TorusPoint: dimension must be >= 1");
    for (const auto& c : coords_)
        if (c.bits() != coords_[0].bits())
            throw DimensionMismatch("TorusPoint: mixed precisions");
}

TorusPoint TorusPoint::zero(int dimension, unsigned bits) {
    std::vector<FixedPointFrac> cs(static_cast<size_t>(dimension),
                                   FixedPointFrac::zero(bits));
    return TorusPoint(std::move(cs));
}

TorusPoint TorusPoint::add(const TorusPoint& other) const {
    if (dimension() != other.dimension())
        throw DimensionMismatch("TorusPoint add: dimensions differ");
    std::vector<FixedPointFrac> cs;
    cs.reserve(coords_.size());
    for (size_t i = 0; i < coords_.size(); ++i)
        cs.push_back(coords_[i].add(other.coords_[i]));
    return TorusPoint(std::move(cs));
}

void RotationSpec::validate() const {
    if (alphas.empty()) throw DimensionMismatch("RotationSpec: no generators");
    for (const auto& a : alphas)
        if (a.dimension() != alphas[0].dimension() || a.bits() != alphas[0].bits())
            throw DimensionMismatch("RotationSpec: generators disagree on d or B");
}

Wide max_shift_magnitude(unsigned bits) { return pow2(bits / 2); }

TorusPoint rotate(const TorusPoint& z, const RotationSpec& spec,
                  std::span<const std::int64_t> n) {
    spec.validate();
    if (z.dimension() != spec.dimension() || z.bits() != spec.bits())
        throw DimensionMismatch("rotate: point and spec disagree on d or B");
    if (static_cast<int>(n.size()) != spec.generators())
        throw DimensionMismatch("rotate: shift vector length " +
                                std::to_string(n.size()) + " != k = " +
                                std::to_string(spec.generators()));
    Wide bound = max_shift_magnitude(z.bits());
    for (std::int64_t ni : n) {
        Wide a(ni);
        if (abs(a) > bound)
            throw PrecisionBudgetExceeded(
                "rotate: |shift| exceeds 2^(B/2); raise the precision");
    }
    TorusPoint out = z;
    for (int g = 0; g < spec.generators(); ++g) {
        if (n[static_cast<size_t>(g)] == 0) continue;
        Wide ni(n[static_cast<size_t>(g)]);
        std::vector<FixedPointFrac> cs;
        cs.reserve(static_cast<size_t>(out.dimension()));
        for (int i = 0; i < out.dimension(); ++i)
            cs.push_back(out.coord(i).add(spec.alphas[static_cast<size_t>(g)]
                                              .coord(i)
                                              .mul_int(ni)));
        out = TorusPoint(std::move(cs));
    }
    return out;
}

FixedPointFrac boundary_distance(const FixedPointFrac& x,
                                 std::span<const FixedPointFrac> cuts) {
    if (cuts.empty()) throw DimensionMismatch("boundary_distance: no cuts");
    FixedPointFrac best = x.circle_distance(cuts[0]);
    for (size_t i = 1; i < cuts.size(); ++i) {
        FixedPointFrac d = x.circle_distance(cuts[i]);
        if (d.mantissa() < best.mantissa()) best = d;
    }
    return best;
}

SqValue::SqValue(Wide mantissa, unsigned frac_bits)
    : frac_bits_(frac_bits), mantissa_(std::move(mantissa)) {
    if (mantissa_ < 0) throw MalformedConstant("SqValue: negative");
}

SqValue SqValue::add(const SqValue& o) const {
    if (frac_bits_ != o.frac_bits_) throw DimensionMismatch("SqValue add: mixed scales");
    return SqValue(mantissa_ + o.mantissa_, frac_bits_);
}

SqValue SqValue::abs_diff(const SqValue& o) const {
    if (frac_bits_ != o.frac_bits_) throw DimensionMismatch("SqValue diff: mixed scales");
    Wide d = mantissa_ - o.mantissa_;
    if (d < 0) d = -d;
    return SqValue(std::move(d), frac_bits_);
}

bool SqValue::operator==(const SqValue& o) const {
    return frac_bits_ == o.frac_bits_ && mantissa_ == o.mantissa_;
}
bool SqValue::operator<(const SqValue& o) const {
    if (frac_bits_ != o.frac_bits_) throw DimensionMismatch("SqValue cmp: mixed scales");
    return mantissa_ < o.mantissa_;
}
bool SqValue::operator<=(const SqValue& o) const {
    return *this < o || *this == o;
}

std::string SqValue::to_hex() const { return pad_hex(mantissa_, frac_bits_); }

SqValue SqValue::from_hex(const std::string& hex, unsigned frac_bits) {
    // unlike FixedPointFrac the integer part may be nonzero (values up to d/4)
    if (hex.empty()) throw MalformedConstant("SqValue: empty hex");
    for (char c : hex) {
        bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok) throw MalformedConstant("SqValue: hex must be lowercase [0-9a-f]");
    }
    Wide v;
    if (mpz_set_str(v.get_mpz_t(), hex.c_str(), 16) != 0)
        throw MalformedConstant("SqValue: unparsable hex");
    return SqValue(std::move(v), frac_bits);
}

double SqValue::to_double() const {
    mpf_class v(mantissa_, 64);
    mpf_div_2exp(v.get_mpf_t(), v.get_mpf_t(), frac_bits_);
    return v.get_d();
}

SqValue torus_sq_distance(const TorusPoint& p, const TorusPoint& q) {
    if (p.dimension() != q.dimension())
        throw DimensionMismatch("torus_sq_distance: dimensions differ");
    if (p.bits() != q.bits())
        throw DimensionMismatch("torus_sq_distance: precisions differ");
    Wide acc = 0;
    for (int i = 0; i < p.dimension(); ++i) {
        Wide d = p.coord(i).circle_distance(q.coord(i)).mantissa();
        acc += d * d;
    }
    return SqValue(std::move(acc), 2 * p.bits());
}

} // namespace tamelab::torus
