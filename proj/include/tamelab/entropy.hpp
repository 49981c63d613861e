#pragma once

// Topological sequence entropy estimation along increasing integer sequences,
// specializing to ordinary topological entropy with the identity sequence.
// N_n is the observed pattern count on coordinates {a_0..a_{n-1}};
// slope_n = log2(N_n)/n; the limsup proxy is the max slope over the final
// third of computed n.

#include <cstdint>
#include <string>
#include <vector>

#include "tamelab/lang.hpp"
#include "tamelab/sources.hpp"

namespace tamelab::entropy {

using sources::SymbolicSource;

class EntropySequence {
public:
    static EntropySequence identity();        // a_i = i
    static EntropySequence geometric();       // a_i = 2^i
    static EntropySequence kerr_li_blocks();  // staggered block diagonal of u_R
    static EntropySequence explicit_list(std::vector<std::int64_t> terms);
    static EntropySequence by_name(const std::string& name);

    std::vector<std::int64_t> prefix(int n) const;
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::vector<std::int64_t> terms_;   // explicit only
};

struct EntropyEstimate {
    std::vector<std::int64_t> counts;   // N_n for n = 1..n_max
    std::vector<double> slopes;         // log2(N_n)/n
    double tail_max = 0.0;
    bool tainted = false;
    std::int64_t budget = 0;
    ShiftRange range{0, 0};
    std::string sequence;

    std::string to_csv() const;         // columns n, N_n, slope
};

// Max slope over the final max(1, floor(n_max/3)) values.
double tail_max_of(const std::vector<double>& slopes);

EntropyEstimate sequence_entropy(const SymbolicSource& source,
                                 const EntropySequence& seq, int n_max,
                                 std::int64_t M, int workers = 1);

EntropyEstimate topological_entropy(const SymbolicSource& source, int n_max,
                                    std::int64_t M, int workers = 1);

} // namespace tamelab::entropy
