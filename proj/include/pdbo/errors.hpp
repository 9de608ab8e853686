#pragma once

#include <stdexcept>
#include <string>

namespace pdbo {

/// Vector lengths that must agree do not.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A model or algorithm parameter is outside its legal range.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An input lies outside the problem's box bounds.
struct DomainError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// A named entity (problem, acquisition function) is unknown.
struct LookupError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Factorization failed even after jitter escalation.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File I/O failure; the message always carries the offending path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pdbo
