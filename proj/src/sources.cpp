#include "tamelab/sources.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>

namespace tamelab::sources {

using torus::FixedPointFrac;
using torus::RotationSpec;
using torus::SqValue;
using torus::TorusPoint;
using torus::Wide;

// ---------------------------------------------------------------------------
// ArcPartition

void ArcPartition::validate() const {
    if (cuts.empty()) throw MalformedSpec("partition: needs at least one cut");
    if (alphabet() > kMaxAlphabet)
        throw MalformedSpec("partition: alphabet larger than supported");
    if (!(cuts[0].mantissa() == 0))
        throw MalformedSpec("partition: first cut must be exactly 0");
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i].bits() != cuts[0].bits())
            throw MalformedSpec("partition: cuts disagree on precision");
        if (!(cuts[i] < cuts[i + 1]))
            throw MalformedSpec("partition: cuts must be strictly increasing");
    }
    if (cuts.size() > 1 && cuts.back().bits() != cuts[0].bits())
        throw MalformedSpec("partition: cuts disagree on precision");
}

Symbol ArcPartition::classify(const FixedPointFrac& x) const {
    // last cut <= x; c_0 = 0 guarantees one exists
    int lo = 0, hi = static_cast<int>(cuts.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (cuts[static_cast<size_t>(mid)].mantissa() <= x.mantissa())
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

FixedPointFrac ArcPartition::distance_to_cuts(const FixedPointFrac& x) const {
    return torus::boundary_distance(x, std::span<const FixedPointFrac>(cuts));
}

// ---------------------------------------------------------------------------
// Spec validation

void RotationCodingSpec::validate() const {
    rotation.validate();
    if (rotation.dimension() != 1)
        throw MalformedSpec("rotation coding: generators must live on T^1");
    partition.validate();
    if (base.bits() != rotation.bits() || partition.cuts[0].bits() != rotation.bits())
        throw MalformedSpec("rotation coding: base/cuts/alphas disagree on precision");
    if (effective_guard_bits() >= rotation.bits())
        throw MalformedSpec("rotation coding: guard_bits must be < B");
    if (effective_guard_bits() == 0)
        throw MalformedSpec("rotation coding: guard_bits must be >= 1");
}

void SphereCodingSpec::validate() const {
    int d = alpha.dimension();
    if (d < 2) throw MalformedSpec("sphere coding: dimension must be >= 2");
    if (base.dimension() != d || center.dimension() != d)
        throw DimensionMismatch("sphere coding: dimensions disagree");
    unsigned b = alpha.bits();
    if (base.bits() != b || center.bits() != b)
        throw MalformedSpec("sphere coding: precisions disagree");
    if (sq_radius.frac_bits() != 2 * b || guard.frac_bits() != 2 * b)
        throw MalformedSpec("sphere coding: sq_radius/guard must be at 2B bits");
    if (!(Wide(0) < sq_radius.mantissa()))
        throw MalformedSpec("sphere coding: sq_radius must be positive");
    // sq_radius < d/4
    Wide quarter_d = Wide(d) << (2 * b - 2);
    if (!(sq_radius.mantissa() < quarter_d))
        throw MalformedSpec("sphere coding: sq_radius must be < d/4");
    if (!(Wide(0) < guard.mantissa()))
        throw MalformedSpec("sphere coding: guard must be positive");
}

void SubstitutionSpec::validate() const {
    if (rules.empty()) throw MalformedSpec("substitution: empty rule set");
    if (static_cast<int>(rules.size()) > kMaxAlphabet)
        throw MalformedSpec("substitution: alphabet larger than supported");
    for (const auto& [sym, image] : rules) {
        if (sym < 0) throw MalformedSpec("substitution: negative symbol");
        if (image.empty())
            throw MalformedSpec("substitution: empty image for symbol " +
                                std::to_string(sym));
        for (Symbol s : image)
            if (!rules.count(s))
                throw MalformedSpec("substitution: image symbol " + std::to_string(s) +
                                    " has no rule");
    }
    auto it = rules.find(seed);
    if (it == rules.end())
        throw MalformedSpec("substitution: seed has no rule");
    if (it->second.front() != seed)
        throw NonProlongable("substitution: image of seed must begin with the seed");
}

std::vector<Symbol> substitution_expand(const SubstitutionSpec& spec,
                                        std::size_t min_len) {
    spec.validate();
    std::vector<Symbol> w{spec.seed};
    // prolongable seed => each iterate is a prefix of the next
    std::size_t iterations = 0;
    while (w.size() < min_len) {
        if (++iterations > 64 + min_len)
            throw ExpansionLimitExceeded("substitution: rules do not grow");
        std::vector<Symbol> next;
        next.reserve(w.size() * 2);
        for (Symbol s : w) {
            const auto& img = spec.rules.at(s);
            next.insert(next.end(), img.begin(), img.end());
            if (next.size() >= spec.max_length && next.size() >= min_len) break;
        }
        if (next.size() == w.size() && w.size() < min_len) {
            // non-growing substitution (e.g. identity) cannot reach min_len
            bool grew = false;
            for (const auto& [sym, image] : spec.rules)
                if (image.size() > 1) grew = true;
            if (!grew)
                throw ExpansionLimitExceeded(
                    "substitution: non-expanding rules cannot reach requested length");
        }
        w = std::move(next);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Integer sets

void IntegerSetSpec::validate() const {
    if (const auto* ip = std::get_if<IpBase>(&kind)) {
        if (ip->base < 2) throw MalformedSpec("ip_base: base must be >= 2");
        if (ip->t_min < 0) throw MalformedSpec("ip_base: t_min must be >= 0");
    } else if (const auto* p = std::get_if<Periodic>(&kind)) {
        if (p->modulus < 1) throw MalformedSpec("periodic: modulus must be >= 1");
        for (auto r : p->residues)
            if (r < 0 || r >= p->modulus)
                throw MalformedSpec("periodic: residue out of [0, modulus)");
    } else if (const auto* e = std::get_if<Explicit>(&kind)) {
        if (e->window_lo > e->window_hi)
            throw MalformedSpec("explicit: empty window");
        for (size_t i = 0; i < e->elements.size(); ++i) {
            if (e->elements[i] < e->window_lo || e->elements[i] > e->window_hi)
                throw MalformedSpec("explicit: element outside declared window");
            if (i > 0 && e->elements[i] <= e->elements[i - 1])
                throw MalformedSpec("explicit: elements must be sorted, distinct");
        }
    }
}

int ip_membership(int base, int t_min, std::int64_t n) {
    if (n <= 0) return 0;
    int pos = 0;
    while (n > 0) {
        std::int64_t digit = n % base;
        if (digit > 1) return 0;
        if (digit == 1 && pos < t_min) return 0;
        n /= base;
        ++pos;
    }
    return 1;
}

bool IntegerSetSpec::contains(std::int64_t n) const {
    if (std::holds_alternative<Natural>(kind)) return n >= 1;
    if (const auto* ip = std::get_if<IpBase>(&kind))
        return ip_membership(ip->base, ip->t_min, n) == 1;
    if (const auto* p = std::get_if<Periodic>(&kind)) {
        std::int64_t r = n % p->modulus;
        if (r < 0) r += p->modulus;
        return std::find(p->residues.begin(), p->residues.end(), r) !=
               p->residues.end();
    }
    const auto& e = std::get<Explicit>(kind);
    if (n < e.window_lo || n > e.window_hi) return false;
    return std::binary_search(e.elements.begin(), e.elements.end(), n);
}

std::vector<std::int64_t> IntegerSetSpec::enumerate_within(
    std::int64_t radius, std::size_t max_count) const {
    std::vector<std::int64_t> out;
    if (contains(0) && out.size() < max_count) out.push_back(0);
    for (std::int64_t v = 1; v <= radius && out.size() < max_count; ++v) {
        if (contains(v)) out.push_back(v);
        if (out.size() >= max_count) break;
        if (contains(-v)) out.push_back(-v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lazily materialized one-sided words (thread-safe; observable behavior is
// the same as eager materialization up to the cap)

namespace {

// Prefixes regenerate deterministically from scratch on each growth step, so
// a truncated tail is always completed correctly by the next step. The buffer
// is reserved up front; readers only touch indices below the published
// `ready_` watermark, so concurrent reads never race with growth.
class LazyWord {
public:
    using Grower = std::function<void(std::vector<std::uint8_t>&, std::size_t)>;

    LazyWord(Grower grow, std::size_t cap) : grow_(std::move(grow)), cap_(cap) {
        data_.reserve(cap_);
    }

    std::size_t cap() const { return cap_; }

    std::uint8_t at(std::size_t i) const {
        if (i >= cap_)
            throw IndexOutOfRange("word index " + std::to_string(i) +
                                  " beyond materialization cap " +
                                  std::to_string(cap_));
        if (i >= ready_.load(std::memory_order_acquire)) ensure(i + 1);
        return data_[i];
    }

    void copy(std::size_t lo, std::size_t hi_excl, std::uint8_t* out) const {
        if (hi_excl > cap_)
            throw IndexOutOfRange("word range beyond materialization cap");
        if (lo >= hi_excl) return;
        if (hi_excl > ready_.load(std::memory_order_acquire)) ensure(hi_excl);
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(lo),
                  data_.begin() + static_cast<std::ptrdiff_t>(hi_excl), out);
    }

private:
    void ensure(std::size_t n) const {
        std::lock_guard<std::mutex> lock(mu_);
        std::size_t have = ready_.load(std::memory_order_relaxed);
        if (have >= n) return;
        std::size_t target = std::min(std::max(n, have * 2), cap_);
        // regenerate into scratch, then append only the new suffix: bytes
        // below the watermark are never rewritten, so readers cannot race
        scratch_.clear();
        grow_(scratch_, target);
        if (scratch_.size() > cap_) scratch_.resize(cap_);
        if (scratch_.size() < n)
            throw IndexOutOfRange("word generator stalled before cap");
        data_.insert(data_.end(),
                     scratch_.begin() + static_cast<std::ptrdiff_t>(have),
                     scratch_.end());
        ready_.store(data_.size(), std::memory_order_release);
    }

    Grower grow_;
    std::size_t cap_;
    mutable std::mutex mu_;
    mutable std::vector<std::uint8_t> data_;
    mutable std::vector<std::uint8_t> scratch_;
    mutable std::atomic<std::size_t> ready_{0};
};

LazyWord::Grower substitution_grower(SubstitutionSpec spec) {
    return [spec = std::move(spec)](std::vector<std::uint8_t>& data,
                                    std::size_t target) {
        auto w = substitution_expand(spec, target);
        data.clear();
        std::size_t n = std::min(w.size(), spec.max_length);
        for (std::size_t i = 0; i < n; ++i)
            data.push_back(static_cast<std::uint8_t>(w[i]));
    };
}

// w_infty = w_1 w_2 w_3 ... with w_n = u_n v_n; u_n concatenates the blocks
// a_{n,i} 0^n where a_{n,i} runs over {0,1}^n lexicographically (lowest
// first), and v_n = 0^{|u_n|}.
LazyWord::Grower kerr_li_grower() {
    return [](std::vector<std::uint8_t>& data, std::size_t target) {
        data.clear();
        for (int n = 1; data.size() < target; ++n) {
            for (std::int64_t i = 0;
                 i < (std::int64_t(1) << n) && data.size() < target; ++i) {
                for (int t = n - 1; t >= 0 && data.size() < target; --t)
                    data.push_back(static_cast<std::uint8_t>((i >> t) & 1));
                for (int t = 0; t < n && data.size() < target; ++t)
                    data.push_back(0);
            }
            std::size_t u_len = static_cast<std::size_t>(2 * n) *
                                (static_cast<std::size_t>(1) << n);
            for (std::size_t t = 0; t < u_len && data.size() < target; ++t)
                data.push_back(0);   // v_n
        }
    };
}

LazyWord::Grower champernowne_grower() {
    return [](std::vector<std::uint8_t>& data, std::size_t target) {
        data.clear();
        for (std::uint64_t k = 1; data.size() < target; ++k) {
            int top = 63 - __builtin_clzll(k);
            for (int t = top; t >= 0 && data.size() < target; --t)
                data.push_back(static_cast<std::uint8_t>((k >> t) & 1));
        }
    };
}

} // namespace

std::int64_t kerr_li_segment_start(int k) {
    // 1-based: 1 + sum_{j<k} |w_j|, |w_j| = 4 j 2^j
    std::int64_t s = 1;
    for (int j = 1; j < k; ++j) s += std::int64_t(4) * j * (std::int64_t(1) << j);
    return s;
}

// ---------------------------------------------------------------------------
// Free-group circle coding

void FreeGroupCodingSpec::validate() const {
    double det = mobius[0] * mobius[3] - mobius[1] * mobius[2];
    if (std::fabs(det - 1.0) > 1e-9)
        throw MalformedSpec("free_group: Mobius matrix must have determinant 1");
    if (max_word_length < 1 || max_word_length > 16)
        throw MalformedSpec("free_group: word length cap must be in [1, 16]");
    if (!(float_guard > 0))
        throw MalformedSpec("free_group: float_guard must be positive");
    if (cuts.empty() || cuts[0] != 0.0)
        throw MalformedSpec("free_group: first cut must be 0");
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (!(cuts[i] < cuts[i + 1]))
            throw MalformedSpec("free_group: cuts must be strictly increasing");
    if (cuts.back() >= 1.0)
        throw MalformedSpec("free_group: cuts must lie in [0, 1)");
    if (static_cast<int>(cuts.size()) > kMaxAlphabet)
        throw MalformedSpec("free_group: alphabet larger than supported");
    if (!(rho >= 0.0 && rho < 1.0))
        throw MalformedSpec("free_group: rho must lie in [0, 1)");
    if (!(base >= 0.0 && base < 1.0))
        throw MalformedSpec("free_group: base must lie in [0, 1)");
}

namespace {

struct ProjPoint {          // point of RP^1 in the tangent chart
    bool inf = false;
    double v = 0.0;
};

double frac01(double t) {
    double f = t - std::floor(t);
    if (f >= 1.0) f = 0.0;   // guard against rounding at the seam
    return f;
}

ProjPoint angle_to_chart(double t) {
    if (t == 0.0) return {true, 0.0};
    return {false, std::tan(M_PI * (t - 0.5))};
}

double chart_to_angle(const ProjPoint& p) {
    if (p.inf || std::isinf(p.v)) return 0.0;
    return frac01(std::atan(p.v) / M_PI + 0.5);
}

ProjPoint apply_matrix(const std::array<double, 4>& m, const ProjPoint& p) {
    if (p.inf) {
        if (m[2] == 0.0) return {true, 0.0};
        return {false, m[0] / m[2]};
    }
    double num = m[0] * p.v + m[1];
    double den = m[2] * p.v + m[3];
    if (den == 0.0) return {true, 0.0};
    return {false, num / den};
}

} // namespace

// ---------------------------------------------------------------------------
// SymbolicSource engines

namespace {

struct RotationEngine {
    RotationCodingSpec spec;
    Wide guard_threshold;    // mantissa units: 2^(B - guard_bits)

    explicit RotationEngine(RotationCodingSpec s) : spec(std::move(s)) {
        spec.validate();
        mpz_ui_pow_ui(guard_threshold.get_mpz_t(), 2,
                      spec.rotation.bits() - spec.effective_guard_bits());
    }

    Symbol classify_point(const FixedPointFrac& x) const {
        Wide dist = spec.partition.distance_to_cuts(x).mantissa();
        if (dist != 0 && dist < guard_threshold)
            throw AmbiguousBoundary("rotation coding: point within guard band of a cut");
        return spec.partition.classify(x);
    }

    int classify_cell(const FixedPointFrac& x) const {   // -1 = ambiguous
        Wide dist = spec.partition.distance_to_cuts(x).mantissa();
        if (dist != 0 && dist < guard_threshold) return -1;
        return spec.partition.classify(x);
    }

    FixedPointFrac point_at(std::span<const std::int64_t> n) const {
        TorusPoint z(std::vector<FixedPointFrac>{spec.base});
        return torus::rotate(z, spec.rotation, n).coord(0);
    }
};

struct SphereEngine {
    SphereCodingSpec spec;
    RotationSpec rot;

    explicit SphereEngine(SphereCodingSpec s) : spec(std::move(s)) {
        spec.validate();
        rot.alphas = {spec.alpha};
    }

    int classify_cell(const TorusPoint& p) const {
        SqValue d2 = torus::torus_sq_distance(p, spec.center);
        if (d2.abs_diff(spec.sq_radius) < spec.guard) return -1;
        return d2 <= spec.sq_radius ? 1 : 0;
    }

    Symbol classify_point(const TorusPoint& p) const {
        int c = classify_cell(p);
        if (c < 0)
            throw AmbiguousBoundary("sphere coding: point within guard of the sphere");
        return c;
    }
};

struct WordEngine {
    enum class Kind { substitution, kerr_li, champernowne };
    Kind word_kind;
    std::shared_ptr<LazyWord> word;
    int alpha = 2;
    SubstitutionSpec subst_spec;       // retained for serialization
    KerrLiSpec kerr_spec;
    ChampernowneSpec champ_spec;

    // kerr_li positions are the paper's 1-based ones with w(n) = 0 for n <= 0;
    // substitution/champernowne words are 0-based and negative is an error.
    Symbol at(std::int64_t n) const {
        if (word_kind == Kind::kerr_li) {
            if (n <= 0) return 0;
            return word->at(static_cast<std::size_t>(n - 1));
        }
        if (n < 0)
            throw IndexOutOfRange("word source: negative index " + std::to_string(n));
        return word->at(static_cast<std::size_t>(n));
    }
};

struct IndicatorEngine {
    IntegerSetSpec spec;
};

struct ConstantEngine {
    ConstantSpec spec;
};

struct FreeGroupEngine {
    FreeGroupCodingSpec spec;

    explicit FreeGroupEngine(FreeGroupCodingSpec s) : spec(std::move(s)) {
        spec.validate();
    }

    std::array<double, 4> inverse_matrix() const {
        return {spec.mobius[3], -spec.mobius[1], -spec.mobius[2], spec.mobius[0]};
    }

    Symbol eval(std::string_view word) const {
        if (static_cast<int>(word.size()) > spec.max_word_length)
            throw WordTooLong("free_group: word longer than cap " +
                              std::to_string(spec.max_word_length));
        for (size_t i = 0; i < word.size(); ++i) {
            char c = word[i];
            if (c != 'a' && c != 'A' && c != 'b' && c != 'B')
                throw MalformedWord("free_group: letters must be a, A, b, B");
            if (i + 1 < word.size()) {
                char d = word[i + 1];
                bool cancels = (c == 'a' && d == 'A') || (c == 'A' && d == 'a') ||
                               (c == 'b' && d == 'B') || (c == 'B' && d == 'b');
                if (cancels)
                    throw MalformedWord("free_group: word is not reduced");
            }
        }
        double t = spec.base;
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            switch (*it) {
                case 'a': t = frac01(t + spec.rho); break;
                case 'A': t = frac01(t - spec.rho); break;
                case 'b': t = chart_to_angle(apply_matrix(spec.mobius,
                                                          angle_to_chart(t)));
                          break;
                case 'B': t = chart_to_angle(apply_matrix(inverse_matrix(),
                                                          angle_to_chart(t)));
                          break;
            }
        }
        // circular distance to the nearest cut, then literal lookup
        double best = 1.0;
        for (double c : spec.cuts) {
            double d = std::fabs(t - c);
            d = std::min(d, 1.0 - d);
            best = std::min(best, d);
        }
        if (best < spec.float_guard)
            throw AmbiguousBoundary("free_group: image angle within float_guard of a cut");
        Symbol s = 0;
        for (size_t i = 0; i < spec.cuts.size(); ++i)
            if (t >= spec.cuts[i]) s = static_cast<Symbol>(i);
        return s;
    }
};

} // namespace

struct SymbolicSource::Impl {
    using Engine = std::variant<RotationEngine, SphereEngine, WordEngine,
                                IndicatorEngine, ConstantEngine, FreeGroupEngine>;
    Engine engine;
    explicit Impl(Engine e) : engine(std::move(e)) {}
};

SymbolicSource SymbolicSource::rotation(RotationCodingSpec spec) {
    return SymbolicSource(
        std::make_shared<Impl>(RotationEngine(std::move(spec))));
}

SymbolicSource SymbolicSource::sphere(SphereCodingSpec spec) {
    return SymbolicSource(std::make_shared<Impl>(SphereEngine(std::move(spec))));
}

SymbolicSource SymbolicSource::substitution(SubstitutionSpec spec) {
    spec.validate();
    WordEngine e;
    e.word_kind = WordEngine::Kind::substitution;
    e.alpha = spec.alphabet();
    e.subst_spec = spec;
    e.word = std::make_shared<LazyWord>(substitution_grower(spec), spec.max_length);
    return SymbolicSource(std::make_shared<Impl>(std::move(e)));
}

SymbolicSource SymbolicSource::indicator(IntegerSetSpec spec) {
    spec.validate();
    return SymbolicSource(std::make_shared<Impl>(IndicatorEngine{std::move(spec)}));
}

SymbolicSource SymbolicSource::kerr_li(KerrLiSpec spec) {
    WordEngine e;
    e.word_kind = WordEngine::Kind::kerr_li;
    e.alpha = 2;
    e.kerr_spec = spec;
    e.word = std::make_shared<LazyWord>(kerr_li_grower(), spec.max_length);
    return SymbolicSource(std::make_shared<Impl>(std::move(e)));
}

SymbolicSource SymbolicSource::champernowne(ChampernowneSpec spec) {
    WordEngine e;
    e.word_kind = WordEngine::Kind::champernowne;
    e.alpha = 2;
    e.champ_spec = spec;
    e.word = std::make_shared<LazyWord>(champernowne_grower(), spec.max_length);
    return SymbolicSource(std::make_shared<Impl>(std::move(e)));
}

SymbolicSource SymbolicSource::constant(ConstantSpec spec) {
    if (spec.symbol < 0 || spec.alphabet < 1 || spec.symbol >= spec.alphabet ||
        spec.alphabet > kMaxAlphabet)
        throw MalformedSpec("constant: need 0 <= symbol < alphabet <= cap");
    return SymbolicSource(std::make_shared<Impl>(ConstantEngine{spec}));
}

SymbolicSource SymbolicSource::free_group(FreeGroupCodingSpec spec) {
    return SymbolicSource(std::make_shared<Impl>(FreeGroupEngine(std::move(spec))));
}

Domain SymbolicSource::domain() const {
    if (std::holds_alternative<FreeGroupEngine>(impl_->engine))
        return Domain::free_group;
    if (const auto* r = std::get_if<RotationEngine>(&impl_->engine))
        if (r->spec.rotation.generators() > 1) return Domain::lattice;
    return Domain::integer_line;
}

Sidedness SymbolicSource::sidedness() const {
    if (const auto* w = std::get_if<WordEngine>(&impl_->engine)) {
        (void)w;
        return Sidedness::forward;
    }
    return Sidedness::two_sided;
}

int SymbolicSource::alphabet() const {
    if (const auto* r = std::get_if<RotationEngine>(&impl_->engine))
        return r->spec.partition.alphabet();
    if (std::holds_alternative<SphereEngine>(impl_->engine)) return 2;
    if (const auto* w = std::get_if<WordEngine>(&impl_->engine)) return w->alpha;
    if (std::holds_alternative<IndicatorEngine>(impl_->engine)) return 2;
    if (const auto* c = std::get_if<ConstantEngine>(&impl_->engine))
        return c->spec.alphabet;
    return static_cast<int>(std::get<FreeGroupEngine>(impl_->engine).spec.cuts.size());
}

int SymbolicSource::generators() const {
    if (const auto* r = std::get_if<RotationEngine>(&impl_->engine))
        return r->spec.rotation.generators();
    return 1;
}

Symbol SymbolicSource::eval(std::int64_t n) const {
    std::array<std::int64_t, 1> idx{n};
    return eval_lattice(idx);
}

Symbol SymbolicSource::eval_lattice(std::span<const std::int64_t> n) const {
    if (const auto* r = std::get_if<RotationEngine>(&impl_->engine))
        return r->classify_point(r->point_at(n));
    if (n.size() != 1)
        throw DimensionMismatch("eval: source is indexed by Z");
    std::int64_t m = n[0];
    if (const auto* s = std::get_if<SphereEngine>(&impl_->engine)) {
        TorusPoint p = torus::rotate(s->spec.base, s->rot,
                                     std::array<std::int64_t, 1>{m});
        return s->classify_point(p);
    }
    if (const auto* w = std::get_if<WordEngine>(&impl_->engine)) return w->at(m);
    if (const auto* i = std::get_if<IndicatorEngine>(&impl_->engine))
        return i->spec.contains(m) ? 1 : 0;
    if (const auto* c = std::get_if<ConstantEngine>(&impl_->engine))
        return c->spec.symbol;
    throw MalformedSpec("eval: free-group sources are word-indexed; use eval_word");
}

Symbol SymbolicSource::eval_word(std::string_view word) const {
    if (const auto* f = std::get_if<FreeGroupEngine>(&impl_->engine))
        return f->eval(word);
    throw MalformedSpec("eval_word: source is not word-indexed");
}

void SymbolicSource::line(std::int64_t lo, std::int64_t hi,
                          std::vector<std::uint8_t>& out) const {
    if (lo > hi) {
        out.clear();
        return;
    }
    std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    out.assign(count, 0);

    if (const auto* r = std::get_if<RotationEngine>(&impl_->engine)) {
        if (r->spec.rotation.generators() != 1)
            throw DimensionMismatch("line: lattice-indexed source");
        FixedPointFrac x = r->point_at(std::array<std::int64_t, 1>{lo});
        const FixedPointFrac& alpha = r->spec.rotation.alphas[0].coord(0);
        for (std::size_t i = 0; i < count; ++i) {
            int c = r->classify_cell(x);
            out[i] = c < 0 ? kAmbiguousCell : static_cast<std::uint8_t>(c);
            if (i + 1 < count) x = x.add(alpha);
        }
        return;
    }
    if (const auto* s = std::get_if<SphereEngine>(&impl_->engine)) {
        TorusPoint p = torus::rotate(s->spec.base, s->rot,
                                     std::array<std::int64_t, 1>{lo});
        for (std::size_t i = 0; i < count; ++i) {
            int c = s->classify_cell(p);
            out[i] = c < 0 ? kAmbiguousCell : static_cast<std::uint8_t>(c);
            if (i + 1 < count) p = p.add(s->spec.alpha);
        }
        return;
    }
    if (const auto* w = std::get_if<WordEngine>(&impl_->engine)) {
        if (w->word_kind == WordEngine::Kind::kerr_li) {
            for (std::size_t i = 0; i < count; ++i) {
                std::int64_t n = lo + static_cast<std::int64_t>(i);
                out[i] = n <= 0 ? 0 : w->word->at(static_cast<std::size_t>(n - 1));
            }
        } else {
            if (lo < 0)
                throw IndexOutOfRange("line: negative index on one-sided word");
            w->word->copy(static_cast<std::size_t>(lo),
                          static_cast<std::size_t>(hi) + 1, out.data());
        }
        return;
    }
    if (const auto* ind = std::get_if<IndicatorEngine>(&impl_->engine)) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = ind->spec.contains(lo + static_cast<std::int64_t>(i)) ? 1 : 0;
        return;
    }
    if (const auto* c = std::get_if<ConstantEngine>(&impl_->engine)) {
        std::fill(out.begin(), out.end(), static_cast<std::uint8_t>(c->spec.symbol));
        return;
    }
    throw MalformedSpec("line: free-group sources are word-indexed");
}

ShiftRange SymbolicSource::natural_range(std::int64_t budget) const {
    if (budget < 0) throw UsageError("shift budget must be >= 0");
    return sidedness() == Sidedness::forward ? ShiftRange::forward(budget)
                                             : ShiftRange::symmetric(budget);
}

#define TAMELAB_SOURCE_ACCESSOR(Method, Engine, Field, Name)                 \
    const decltype(Engine::Field)& SymbolicSource::Method() const {          \
        if (const auto* e = std::get_if<Engine>(&impl_->engine))             \
            return e->Field;                                                 \
        throw MalformedSpec("source is not of kind " Name);                  \
    }

TAMELAB_SOURCE_ACCESSOR(as_rotation, RotationEngine, spec, "rotation")
TAMELAB_SOURCE_ACCESSOR(as_sphere, SphereEngine, spec, "sphere")
TAMELAB_SOURCE_ACCESSOR(as_indicator, IndicatorEngine, spec, "indicator")
TAMELAB_SOURCE_ACCESSOR(as_constant, ConstantEngine, spec, "constant")
TAMELAB_SOURCE_ACCESSOR(as_free_group, FreeGroupEngine, spec, "free_group")
#undef TAMELAB_SOURCE_ACCESSOR

const SubstitutionSpec& SymbolicSource::as_substitution() const {
    if (const auto* e = std::get_if<WordEngine>(&impl_->engine))
        if (e->word_kind == WordEngine::Kind::substitution) return e->subst_spec;
    throw MalformedSpec("source is not of kind substitution");
}

const KerrLiSpec& SymbolicSource::as_kerr_li() const {
    if (const auto* e = std::get_if<WordEngine>(&impl_->engine))
        if (e->word_kind == WordEngine::Kind::kerr_li) return e->kerr_spec;
    throw MalformedSpec("source is not of kind kerr_li");
}

const ChampernowneSpec& SymbolicSource::as_champernowne() const {
    if (const auto* e = std::get_if<WordEngine>(&impl_->engine))
        if (e->word_kind == WordEngine::Kind::champernowne) return e->champ_spec;
    throw MalformedSpec("source is not of kind champernowne");
}

std::string SymbolicSource::kind_name() const {
    if (std::holds_alternative<RotationEngine>(impl_->engine)) return "rotation";
    if (std::holds_alternative<SphereEngine>(impl_->engine)) return "sphere";
    if (const auto* w = std::get_if<WordEngine>(&impl_->engine)) {
        switch (w->word_kind) {
            case WordEngine::Kind::substitution: return "substitution";
            case WordEngine::Kind::kerr_li: return "kerr_li";
            case WordEngine::Kind::champernowne: return "champernowne";
        }
    }
    if (std::holds_alternative<IndicatorEngine>(impl_->engine)) return "indicator";
    if (std::holds_alternative<ConstantEngine>(impl_->engine)) return "constant";
    return "free_group";
}

// ---------------------------------------------------------------------------
// Safe radius selection

SafeRadiusResult choose_safe_radius(const TorusPoint& alpha, const TorusPoint& y0,
                                    const TorusPoint& center, std::int64_t N,
                                    const SqValue& r_min_sq, const SqValue& r_max_sq,
                                    const SqValue& delta) {
    if (N < 0) throw UsageError("choose_safe_radius: N must be >= 0");
    if (!(r_min_sq < r_max_sq))
        throw MalformedSpec("choose_safe_radius: need r_min < r_max");
    if (!(Wide(0) < r_min_sq.mantissa()))
        throw MalformedSpec("choose_safe_radius: r_min must be positive");
    int d = alpha.dimension();
    Wide quarter_d = Wide(d) << (r_max_sq.frac_bits() - 2);
    if (!(r_max_sq.mantissa() < quarter_d))
        throw MalformedSpec("choose_safe_radius: r_max too large for T^d");

    RotationSpec rot;
    rot.alphas = {alpha};
    TorusPoint p = torus::rotate(y0, rot, std::array<std::int64_t, 1>{-N});

    std::set<Wide> obstructions;
    for (std::int64_t n = -N; n <= N; ++n) {
        SqValue d2 = torus::torus_sq_distance(p, center);
        if (r_min_sq <= d2 && d2 <= r_max_sq)
            obstructions.insert(d2.mantissa());
        if (n < N) p = p.add(alpha);
    }

    std::vector<Wide> pts;
    pts.reserve(obstructions.size() + 2);
    pts.push_back(r_min_sq.mantissa());
    for (const auto& o : obstructions)
        if (o != pts.front() && o != r_max_sq.mantissa()) pts.push_back(o);
    pts.push_back(r_max_sq.mantissa());

    Wide best_gap = -1;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Wide gap = pts[i + 1] - pts[i];
        if (gap > best_gap) {       // strict: leftmost largest gap wins
            best_gap = gap;
            best_i = i;
        }
    }
    Wide mid = (pts[best_i] + pts[best_i + 1]) / 2;
    Wide m_lo = mid - pts[best_i];
    Wide m_hi = pts[best_i + 1] - mid;
    Wide margin = m_lo < m_hi ? m_lo : m_hi;
    if (margin < delta.mantissa())
        throw NoSafeRadius("choose_safe_radius: largest obstruction gap below 2*delta");
    return SafeRadiusResult{SqValue(mid, r_min_sq.frac_bits()),
                            SqValue(margin, r_min_sq.frac_bits()),
                            obstructions.size()};
}

} // namespace tamelab::sources
