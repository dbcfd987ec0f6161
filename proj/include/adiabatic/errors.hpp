#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace adiabatic {

// Bad input: non-Hermitian operator, malformed config, out-of-range parameter.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Something went wrong while computing: eigensolver failure, step control, bracketing.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unknown key or unparsable value in a run configuration.
struct ConfigError : ValidationError {
    using ValidationError::ValidationError;
};

struct GapClosureError : NumericalError {
    double lower, upper, s;
    GapClosureError(const std::string& what, double lo, double up, double at = 0.0)
        : NumericalError(what), lower(lo), upper(up), s(at) {}
};

// Warnings attached to results instead of thrown.
using Flags = std::vector<std::string>;

}  // namespace adiabatic
