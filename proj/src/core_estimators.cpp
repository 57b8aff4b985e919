#include "cjs/core_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cjs/numeric.hpp"

namespace cjs {

ObservationVector::ObservationVector(std::vector<double> values, double sigma)
    : values_(std::move(values)), sigma_(sigma) {
    if (values_.empty()) throw ConfigError("observation vector must have n >= 1");
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
        throw ConfigError("sigma must be positive and finite, got " + std::to_string(sigma_));
    for (double v : values_)
        if (!std::isfinite(v)) throw ConfigError("observation vector contains a non-finite value");
}

namespace {

EstimatorOutput assemble(const ObservationVector& y, std::vector<double> nu, double factor) {
    EstimatorOutput out;
    out.estimate.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out.estimate[i] = nu[i] + factor * (y[i] - nu[i]);
    out.shrinkage_factor = factor;
    out.attracting_vector = std::move(nu);
    return out;
}

// Factor 1 - dof * sigma^2 / |y - nu|^2; zero residual maps to 0.
EstimatorOutput shrink_with_constant(const ObservationVector& y, std::vector<double> nu, double dof,
                                     bool positive_part) {
    double residual = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - nu[i];
        residual += d * d;
    }
    double factor = 0.0;
    if (residual > 0.0) {
        factor = 1.0 - dof * y.variance() / residual;
        if (positive_part) factor = std::clamp(factor, 0.0, 1.0);
    }
    return assemble(y, std::move(nu), factor);
}

void require_dimension(bool ok, const char* what, std::size_t n) {
    if (!ok) throw DimensionError(std::string(what) + ": not defined for n = " + std::to_string(n));
}

bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

EstimatorOutput estimate_ml(const ObservationVector& y) {
    return assemble(y, std::vector<double>(y.size(), 0.0), 1.0);
}

EstimatorOutput estimate_js(const ObservationVector& y) {
    const std::size_t n = y.size();
    require_dimension(n >= 3, "estimate_js", n);
    return shrink_with_constant(y, std::vector<double>(n, 0.0), static_cast<double>(n) - 2.0, false);
}

EstimatorOutput estimate_js_positive(const ObservationVector& y) {
    const std::size_t n = y.size();
    return shrink_with_constant(y, std::vector<double>(n, 0.0), static_cast<double>(n) - 2.0, true);
}

EstimatorOutput estimate_subspace_js(const ObservationVector& y, const SubspaceBasis& basis) {
    const std::size_t n = y.size();
    const std::size_t d = basis.size();
    require_dimension(n > d + 2, "estimate_subspace_js", n);

    for (std::size_t a = 0; a < d; ++a) {
        if (basis[a].size() != n) throw ConfigError("subspace basis vector has wrong length");
        for (std::size_t b = a; b < d; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += basis[a][i] * basis[b][i];
            const double expected = (a == b) ? 1.0 : 0.0;
            if (std::abs(dot - expected) > 1e-9) throw ConfigError("subspace basis is not orthonormal");
        }
    }

    std::vector<double> projection(n, 0.0);
    for (const auto& u : basis) {
        if (is_constant(u)) {
            // constant directions project onto the sample mean exactly
            const double mean = sample_mean(y.values());
            for (std::size_t i = 0; i < n; ++i) projection[i] += mean;
            continue;
        }
        double coeff = 0.0;
        for (std::size_t i = 0; i < n; ++i) coeff += u[i] * y[i];
        for (std::size_t i = 0; i < n; ++i) projection[i] += coeff * u[i];
    }
    return shrink_with_constant(y, std::move(projection), static_cast<double>(n) - static_cast<double>(d) - 2.0,
                                false);
}

EstimatorOutput estimate_lindley(const ObservationVector& y, bool positive_part) {
    const std::size_t n = y.size();
    if (!positive_part) require_dimension(n >= 4, "estimate_lindley", n);
    std::vector<double> nu(n, sample_mean(y.values()));
    return shrink_with_constant(y, std::move(nu), static_cast<double>(n) - 3.0, positive_part);
}

EstimatorOutput shrink_toward(const ObservationVector& y, std::vector<double> nu) {
    const std::size_t n = y.size();
    if (nu.size() != n) throw ConfigError("shrink_toward: attracting vector has wrong length");
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - nu[i];
        residual += d * d;
    }
    const double factor = 1.0 - y.variance() / g_floor(residual / static_cast<double>(n), y.variance());
    return assemble(y, std::move(nu), factor);
}

double normalized_loss(std::span<const double> estimate, std::span<const double> theta) {
    if (estimate.size() != theta.size()) throw ConfigError("normalized_loss: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double d = estimate[i] - theta[i];
        acc += d * d;
    }
    return acc / static_cast<double>(theta.size());
}

}  // namespace cjs
