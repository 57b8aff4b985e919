#ifndef CJS_NUMERIC_HPP
#define CJS_NUMERIC_HPP

#include <span>
#include <stdexcept>
#include <string>

namespace cjs {

/// Bad configuration or input shape (CLI exit code 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Estimator called outside the dimensions it is defined for.
class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Non-finite or otherwise unusable numeric result (CLI exit code 2).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pairwise (cascade) summation; error grows as O(log n) instead of O(n).
double pairwise_sum(std::span<const double> values);

/// Arithmetic mean, clamped into [min, max] of the input so constant
/// vectors return their common value exactly. Requires a non-empty span.
double sample_mean(std::span<const double> values);

/// Sum of (v_i - center)^2, plain left-to-right accumulation.
double sum_squared_deviation(std::span<const double> values, double center = 0.0);

}  // namespace cjs

#endif  // CJS_NUMERIC_HPP
