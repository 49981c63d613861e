#pragma once

#include <stdexcept>
#include <string>

namespace tamelab {

// Error taxonomy shared by all modules. CLI exit codes map off `kind()`:
// spec/usage problems -> 2, everything else surfaces as a diagnostic.
enum class ErrorKind {
    malformed_constant,
    malformed_spec,
    dimension_mismatch,
    precision_budget,     // requested shifts exceed 2^(B/2)
    ambiguous_boundary,
    index_out_of_range,
    word_too_long,
    malformed_word,
    non_prolongable,
    expansion_limit,
    window_too_large,
    no_safe_radius,
    insufficient_b,
    usage,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define TAMELAB_ERROR_TYPE(Name, Kind)                         \
    class Name : public Error {                                \
    public:                                                    \
        explicit Name(const std::string& what)                 \
            : Error(ErrorKind::Kind, what) {}                  \
    }

TAMELAB_ERROR_TYPE(MalformedConstant, malformed_constant);
TAMELAB_ERROR_TYPE(MalformedSpec, malformed_spec);
TAMELAB_ERROR_TYPE(DimensionMismatch, dimension_mismatch);
TAMELAB_ERROR_TYPE(PrecisionBudgetExceeded, precision_budget);
TAMELAB_ERROR_TYPE(AmbiguousBoundary, ambiguous_boundary);
TAMELAB_ERROR_TYPE(IndexOutOfRange, index_out_of_range);
TAMELAB_ERROR_TYPE(WordTooLong, word_too_long);
TAMELAB_ERROR_TYPE(MalformedWord, malformed_word);
TAMELAB_ERROR_TYPE(NonProlongable, non_prolongable);
TAMELAB_ERROR_TYPE(ExpansionLimitExceeded, expansion_limit);
TAMELAB_ERROR_TYPE(WindowTooLarge, window_too_large);
TAMELAB_ERROR_TYPE(NoSafeRadius, no_safe_radius);
TAMELAB_ERROR_TYPE(InsufficientB, insufficient_b);
TAMELAB_ERROR_TYPE(UsageError, usage);

#undef TAMELAB_ERROR_TYPE

} // namespace tamelab
