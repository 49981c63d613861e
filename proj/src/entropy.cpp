#include "tamelab/entropy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tamelab::entropy {

EntropySequence EntropySequence::identity() {
    EntropySequence s;
    s.name_ = "identity";
    return s;
}

EntropySequence EntropySequence::geometric() {
    EntropySequence s;
    s.name_ = "geometric";
    return s;
}

EntropySequence EntropySequence::kerr_li_blocks() {
    EntropySequence s;
    s.name_ = "kerr_li_blocks";
    return s;
}

EntropySequence EntropySequence::explicit_list(std::vector<std::int64_t> terms) {
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i - 1] >= terms[i])
            throw MalformedSpec("entropy sequence: terms must be strictly increasing");
    EntropySequence s;
    s.name_ = "explicit";
    s.terms_ = std::move(terms);
    return s;
}

EntropySequence EntropySequence::by_name(const std::string& name) {
    if (name == "identity") return identity();
    if (name == "geometric") return geometric();
    if (name == "kerr_li_blocks") return kerr_li_blocks();
    throw UsageError("unknown entropy sequence '" + name + "'");
}

std::vector<std::int64_t> EntropySequence::prefix(int n) const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(n));
    if (name_ == "identity") {
        for (int i = 0; i < n; ++i) out.push_back(i);
    } else if (name_ == "geometric") {
        if (n > 62) throw UsageError("geometric sequence overflows past n = 62");
        for (int i = 0; i < n; ++i) out.push_back(std::int64_t(1) << i);
    } else if (name_ == "kerr_li_blocks") {
        std::int64_t start =
            sources::kerr_li_segment_start(sources::kKerrLiReferenceSegment);
        std::int64_t step = 2 * sources::kKerrLiReferenceSegment + 1;
        for (int i = 0; i < n; ++i) out.push_back(start + step * i);
    } else {
        if (static_cast<std::size_t>(n) > terms_.size())
            throw IndexOutOfRange("explicit entropy sequence shorter than requested n");
        out.assign(terms_.begin(), terms_.begin() + n);
    }
    return out;
}

double tail_max_of(const std::vector<double>& slopes) {
    if (slopes.empty()) return 0.0;
    std::size_t n = slopes.size();
    std::size_t k = std::max<std::size_t>(1, n / 3);
    double best = slopes[n - k];
    for (std::size_t i = n - k; i < n; ++i) best = std::max(best, slopes[i]);
    return best;
}

EntropyEstimate sequence_entropy(const SymbolicSource& source,
                                 const EntropySequence& seq, int n_max,
                                 std::int64_t M, int workers) {
    if (n_max < 1) throw UsageError("sequence_entropy: n_max must be >= 1");
    if (n_max > 24) throw WindowTooLarge("sequence_entropy: n_max exceeds 24");

    EntropyEstimate est;
    est.budget = M;
    est.range = source.natural_range(M);
    est.sequence = seq.name();

    int alpha = source.alphabet();
    std::int64_t prev = 0;
    for (int n = 1; n <= n_max; ++n) {
        auto coords = seq.prefix(n);
        lang::CoordinateSet K = lang::CoordinateSet::line(coords);
        lang::PatternStore store =
            lang::extract_patterns(source, K, est.range, workers);
        auto count = static_cast<std::int64_t>(store.size());
        est.tainted = est.tainted || store.tainted();
        if (n > 1 && count > alpha * prev)
            throw std::logic_error("sequence_entropy: submultiplicativity violated");
        prev = count;
        est.counts.push_back(count);
        est.slopes.push_back(count > 0 ? std::log2(static_cast<double>(count)) / n
                                       : 0.0);
    }
    est.tail_max = tail_max_of(est.slopes);
    return est;
}

EntropyEstimate topological_entropy(const SymbolicSource& source, int n_max,
                                    std::int64_t M, int workers) {
    return sequence_entropy(source, EntropySequence::identity(), n_max, M, workers);
}

std::string EntropyEstimate::to_csv() const {
    std::ostringstream out;
    out << "n,N_n,slope\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
        out << (i + 1) << ',' << counts[i] << ',' << slopes[i] << '\n';
    return out.str();
}

} // namespace tamelab::entropy
