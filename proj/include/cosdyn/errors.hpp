#pragma once

#include <stdexcept>
#include <string>

namespace cosdyn {

/// Invalid user configuration. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Base of all numerical failures. Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A feature normalizer fell below the floor (empirical collapse).
struct NormBlowup : NumericalError {
    long index = -1;  // epoch or sample index when known
    NormBlowup(const std::string& what, long idx = -1) : NumericalError(what), index(idx) {}
};

struct DegenerateNorms : NumericalError {
    using NumericalError::NumericalError;
};

/// W is numerically singular (condition number over the guard).
struct SingularProjector : NumericalError {
    double time = 0.0;
    double condition = 0.0;
    SingularProjector(const std::string& what, double t, double cond)
        : NumericalError(what), time(t), condition(cond) {}
};

struct AsymmetricProjector : NumericalError {
    using NumericalError::NumericalError;
};

struct BracketingFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct UnclassifiableRootPattern : NumericalError {
    using NumericalError::NumericalError;
};

struct DimensionTooLarge : std::length_error {
    using std::length_error::length_error;
};

}  // namespace cosdyn
