#pragma once

#include <stdexcept>
#include <string>

namespace lvar {

// Bad argument or violated precondition (h > X, P < 2, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A table or tabulation does not reach far enough.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Malformed input file; the message carries the path and line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature, extrapolation or truncation did not settle.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lvar
