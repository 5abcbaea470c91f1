#pragma once

#include <stdexcept>
#include <string>

namespace lrcp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user-supplied input: files, configuration values, parameter ranges.
struct InputError : Error {
    using Error::Error;
};

/// A statistic could not be computed from otherwise valid input.
struct ComputationError : Error {
    using Error::Error;
};

/// The long-run variance estimate is zero (or numerically indistinguishable
/// from zero) and a self-normalization was requested.
struct ZeroVarianceError : ComputationError {
    using ComputationError::ComputationError;
};

/// A custom kernel produced a meaningfully negative variance estimate,
/// which invalidates the self-normalized statistic.
struct NegativeVarianceError : ComputationError {
    using ComputationError::ComputationError;
};

/// A segment is too short for the requested statistic or split.
struct SegmentTooShortError : ComputationError {
    using ComputationError::ComputationError;
};

/// The covariance matrix of an exact Gaussian sampler is not positive
/// definite (invalid parameter or numerical breakdown).
struct FactorizationError : ComputationError {
    using ComputationError::ComputationError;
};

}  // namespace lrcp
