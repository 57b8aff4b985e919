#ifndef CJS_CORE_ESTIMATORS_HPP
#define CJS_CORE_ESTIMATORS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cjs {

/// Noisy observation y = theta + w, w ~ N(0, sigma^2 I).
class ObservationVector {
public:
    /// Throws ConfigError unless values is non-empty and finite and sigma > 0.
    ObservationVector(std::vector<double> values, double sigma);

    std::span<const double> values() const noexcept { return values_; }
    double sigma() const noexcept { return sigma_; }
    double variance() const noexcept { return sigma_ * sigma_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    std::vector<double> values_;
    double sigma_;
};

/// Result of a shrinkage-family estimator:
///   estimate = attracting_vector + shrinkage_factor * (y - attracting_vector).
struct EstimatorOutput {
    std::vector<double> estimate;
    double shrinkage_factor = 1.0;
    std::vector<double> attracting_vector;
};

/// Orthonormal basis of a d-dimensional target subspace; each entry has length n.
using SubspaceBasis = std::vector<std::vector<double>>;

/// Maximum-likelihood estimate: y itself.
EstimatorOutput estimate_ml(const ObservationVector& y);

/// James-Stein shrinkage toward the origin with factor 1 - (n-2)sigma^2/|y|^2.
/// Requires n >= 3 (DimensionError otherwise). |y|^2 = 0 gives factor 0.
EstimatorOutput estimate_js(const ObservationVector& y);

/// Positive-part James-Stein. Defined for every n: the factor is clamped
/// into [0, 1], so n <= 2 returns y unchanged.
EstimatorOutput estimate_js_positive(const ObservationVector& y);

/// James-Stein shrinkage toward the subspace spanned by `basis`, with
/// degrees-of-freedom constant (n - d - 2). An empty basis means the origin.
/// Requires n > d + 2 and an orthonormal basis (ConfigError otherwise).
/// Constant basis directions project onto the sample mean, so the span of
/// the all-ones vector reproduces estimate_lindley exactly.
EstimatorOutput estimate_subspace_js(const ObservationVector& y, const SubspaceBasis& basis);

/// Lindley's estimator: shrink toward ybar * 1 with constant (n - 3).
/// The plain form requires n >= 4; the positive-part form clamps the factor
/// into [0, 1] and accepts any n.
EstimatorOutput estimate_lindley(const ObservationVector& y, bool positive_part);

/// Shared cluster kernel: nu + [1 - sigma^2 / g(|y - nu|^2 / n)] (y - nu)
/// with g(x) = max(sigma^2, x). The factor always lies in [0, 1].
EstimatorOutput shrink_toward(const ObservationVector& y, std::vector<double> nu);

/// g(x) = max(sigma^2, x).
inline double g_floor(double x, double variance) noexcept { return x > variance ? x : variance; }

/// Squared-error loss |estimate - theta|^2 / n.
double normalized_loss(std::span<const double> estimate, std::span<const double> theta);

}  // namespace cjs

#endif  // CJS_CORE_ESTIMATORS_HPP
