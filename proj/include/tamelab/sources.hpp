#pragma once

// Deterministic symbolic sequence sources: rotation codings on T (classical
// and multidimensional), sphere codings on T^d with safe-radius selection,
// substitution fixed points, integer-set indicators, the doubling
// concatenation word, the Champernowne control word, and free-group circle
// codings. Evaluation is a pure function of (spec, index): two evaluations of
// the same index always agree, across threads and processes.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tamelab/errors.hpp"
#include "tamelab/shift.hpp"
#include "tamelab/torus.hpp"

namespace tamelab::sources {

using Symbol = int;

// Cell marker used in bulk line buffers for AmbiguousBoundary positions.
inline constexpr std::uint8_t kAmbiguousCell = 0xFF;
inline constexpr int kMaxAlphabet = 200;

enum class Domain { integer_line, lattice, free_group };
enum class Sidedness { two_sided, forward };

// T = union of arcs [c_i, c_{i+1}) with c_0 = 0 and c_{d+1} = 1; arc i
// carries symbol i. Classification is literal: a point equal to a cut lies
// in the arc the cut opens.
struct ArcPartition {
    std::vector<torus::FixedPointFrac> cuts;

    int alphabet() const { return static_cast<int>(cuts.size()); }
    void validate() const;
    Symbol classify(const torus::FixedPointFrac& x) const;
    torus::FixedPointFrac distance_to_cuts(const torus::FixedPointFrac& x) const;
};

struct RotationCodingSpec {
    torus::RotationSpec rotation;   // k generators, each on T^1
    torus::FixedPointFrac base;
    ArcPartition partition;
    unsigned guard_bits = 0;        // 0 -> default B/2

    void validate() const;
    unsigned effective_guard_bits() const {
        return guard_bits ? guard_bits : rotation.bits() / 2;
    }
};

struct SphereCodingSpec {
    torus::TorusPoint alpha;        // single generator on T^d, d >= 2
    torus::TorusPoint base;         // y_0
    torus::TorusPoint center;
    torus::SqValue sq_radius;       // at 2B fractional bits
    torus::SqValue guard;           // > 0, same scale

    void validate() const;
};

struct SubstitutionSpec {
    std::map<Symbol, std::vector<Symbol>> rules;
    Symbol seed = 0;
    std::size_t max_length = 1u << 21;

    void validate() const;          // total rules, seed prolongable
    int alphabet() const { return static_cast<int>(rules.size()); }
};

// Iterates the rules from the seed until length >= min_len; returns that
// fixed-point prefix.
std::vector<Symbol> substitution_expand(const SubstitutionSpec& spec,
                                        std::size_t min_len);

struct IntegerSetSpec {
    struct Natural {};                                   // {1, 2, 3, ...}
    struct IpBase { int base = 10; int t_min = 1; };     // sums of distinct b^a, a >= t_min
    struct Periodic { std::int64_t modulus = 1; std::vector<std::int64_t> residues; };
    struct Explicit { std::vector<std::int64_t> elements;
                      std::int64_t window_lo = 0, window_hi = 0; };

    std::variant<Natural, IpBase, Periodic, Explicit> kind = Natural{};

    void validate() const;
    bool contains(std::int64_t n) const;
    // Elements inside [-radius, radius], ordered by |value| ascending,
    // positive before negative on ties. This is the canonical enumeration
    // used for Ruppert probes.
    std::vector<std::int64_t> enumerate_within(std::int64_t radius,
                                               std::size_t max_count) const;
};

// 1 iff n is a sum of distinct powers base^a with a >= t_min.
int ip_membership(int base, int t_min, std::int64_t n);

struct KerrLiSpec {
    std::size_t max_length = 1u << 21;
};

struct ChampernowneSpec {
    std::size_t max_length = 1u << 24;
};

struct ConstantSpec {
    Symbol symbol = 0;
    int alphabet = 2;
};

struct FreeGroupCodingSpec {
    double rho = 0.0;                       // generator a: rotation by rho
    std::array<double, 4> mobius{1, 0, 0, 1}; // generator b: row-major, det 1
    double base = 0.0;
    std::vector<double> cuts;               // c_0 = 0 <= ... < 1
    double float_guard = 1e-9;
    int max_word_length = 12;               // <= 16

    void validate() const;
};

// Reference segment used by the kerr_li_blocks entropy sequence: the largest
// u_R that fits whole inside a 10^6 shift budget.
inline constexpr int kKerrLiReferenceSegment = 13;

// 1-based start position of segment u_k inside the one-sided word w_infty.
std::int64_t kerr_li_segment_start(int k);

class SymbolicSource {
public:
    static SymbolicSource rotation(RotationCodingSpec spec);
    static SymbolicSource sphere(SphereCodingSpec spec);
    static SymbolicSource substitution(SubstitutionSpec spec);
    static SymbolicSource indicator(IntegerSetSpec spec);
    static SymbolicSource kerr_li(KerrLiSpec spec);
    static SymbolicSource champernowne(ChampernowneSpec spec);
    static SymbolicSource constant(ConstantSpec spec);
    static SymbolicSource free_group(FreeGroupCodingSpec spec);

    Domain domain() const;
    Sidedness sidedness() const;
    int alphabet() const;
    int generators() const;     // lattice arity; 1 for integer-line sources

    Symbol eval(std::int64_t n) const;
    Symbol eval_lattice(std::span<const std::int64_t> n) const;
    Symbol eval_word(std::string_view word) const;

    // Bulk evaluation over [lo, hi]; AmbiguousBoundary positions become
    // kAmbiguousCell instead of throwing. Hard errors still throw.
    void line(std::int64_t lo, std::int64_t hi, std::vector<std::uint8_t>& out) const;

    ShiftRange natural_range(std::int64_t budget) const;

    // Spec accessors (serialization); throws MalformedSpec on kind mismatch.
    const RotationCodingSpec& as_rotation() const;
    const SphereCodingSpec& as_sphere() const;
    const SubstitutionSpec& as_substitution() const;
    const IntegerSetSpec& as_indicator() const;
    const KerrLiSpec& as_kerr_li() const;
    const ChampernowneSpec& as_champernowne() const;
    const ConstantSpec& as_constant() const;
    const FreeGroupCodingSpec& as_free_group() const;
    std::string kind_name() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit SymbolicSource(std::shared_ptr<const Impl> impl)
        : impl_(std::move(impl)) {}
};

struct SafeRadiusResult {
    torus::SqValue sq_radius;
    torus::SqValue margin;
    std::size_t obstructions = 0;   // distinct squared distances in range
};

// Desk-scale analogue of the sphere-avoidance step: collect the exact squared
// distances {d^2(y0 + n*alpha, center) : |n| <= N} inside [r_min^2, r_max^2],
// sort them, and return the midpoint of the largest gap (the interval ends act
// as sentinels). Guarantees margin >= delta or throws NoSafeRadius.
SafeRadiusResult choose_safe_radius(const torus::TorusPoint& alpha,
                                    const torus::TorusPoint& y0,
                                    const torus::TorusPoint& center,
                                    std::int64_t N,
                                    const torus::SqValue& r_min_sq,
                                    const torus::SqValue& r_max_sq,
                                    const torus::SqValue& delta);

} // namespace tamelab::sources
