#pragma once

#include <stdexcept>
#include <string>

namespace hmap {

/// Requested accuracy could not be reached; carries the best estimate
/// and the achieved error bound.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best, double bound)
        : std::runtime_error(what), best_estimate(best), error_bound(bound) {}
    explicit AccuracyError(const std::string& what)
        : std::runtime_error(what) {}

    double best_estimate = 0.0;
    double error_bound = 0.0;
};

/// Adaptive step size underflowed (problem effectively stiff or singular).
class StiffnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter sits exactly on a degenerate value for which the governing
/// formulas provide no limit form (e.g. b = 0 in the soliton inversion).
class DegenerateParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A field operation ended up with zero valid nodes.
class EmptyFieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config / input-file validation failure (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hmap
