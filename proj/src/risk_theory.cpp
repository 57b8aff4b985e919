#include "cjs/risk_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "cjs/numeric.hpp"
#include "cjs/rng.hpp"

namespace cjs {

double q_function(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_complement(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

ThetaVector::ThetaVector(std::vector<double> values) : values_(std::move(values)), mean_(0.0) {
    if (values_.empty()) throw ConfigError("theta must have n >= 1");
    for (double v : values_)
        if (!std::isfinite(v)) throw ConfigError("theta contains a non-finite value");
    mean_ = sample_mean(values_);
}

namespace {

constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

// A cluster boundary; nullopt stands for +inf (upper) or -inf (lower).
using Bound = std::optional<double>;

// P(lower < y <= upper) for y ~ N(0, 1), bounds already standardized.
double interval_mass(Bound lower, Bound upper) {
    if (!lower && !upper) return 1.0;
    if (!lower) return q_complement(*upper);
    if (!upper) return q_function(*lower);
    const double a = *lower;
    const double b = *upper;
    if (a >= 0.0) return q_function(a) - q_function(b);
    if (b <= 0.0) return q_function(-b) - q_function(-a);
    return 1.0 - q_function(b) - q_function(-a);
}

// Unnormalized Gaussian kernel exp(-x^2/2); infinite bounds contribute 0.
double kernel(Bound x) { return x ? std::exp(-0.5 * (*x) * (*x)) : 0.0; }

double standard_density(Bound x) { return kInvSqrt2Pi * kernel(x); }

Bound standardize(Bound bound, double centre, double sigma) {
    if (!bound) return std::nullopt;
    return (*bound - centre) / sigma;
}

void validate_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive and finite");
}

void validate_separators(std::span<const double> mu) {
    for (std::size_t k = 0; k < mu.size(); ++k) {
        if (!std::isfinite(mu[k])) throw ConfigError("separator limits must be finite");
        if (k > 0 && !(mu[k] < mu[k - 1])) throw ConfigError("separator limits must be strictly descending");
    }
}

// Per-cluster bounds in centred coordinates: cluster j is (mu_j, mu_{j-1}].
struct ClusterBounds {
    Bound lower;
    Bound upper;
};

std::vector<ClusterBounds> cluster_bounds(std::span<const double> mu, double shift) {
    const std::size_t clusters = mu.size() + 1;
    std::vector<ClusterBounds> out(clusters);
    for (std::size_t j = 0; j < clusters; ++j) {
        if (j > 0) out[j].upper = mu[j - 1] - shift;
        if (j < mu.size()) out[j].lower = mu[j] - shift;
    }
    return out;
}

}  // namespace

TheoryConstants theory_two_cluster(const ThetaVector& theta, double sigma) {
    validate_sigma(sigma);
    const auto values = theta.values();
    const std::size_t n = values.size();
    const double nd = static_cast<double>(n);
    const double mean = theta.mean();

    // Every Q argument (theta_bar - theta_i)/sigma is translation invariant,
    // so the sums run on centred values and c_1, c_2 are shifted back.
    std::vector<double> centred(n), q(n), qc(n), theta_q(n), theta_qc(n), kern(n), sq(n), raw_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        centred[i] = values[i] - mean;
        const double arg = -centred[i] / sigma;
        q[i] = q_function(arg);
        qc[i] = q_complement(arg);
        theta_q[i] = centred[i] * q[i];
        theta_qc[i] = centred[i] * qc[i];
        kern[i] = std::exp(-0.5 * arg * arg);
        sq[i] = centred[i] * centred[i];
        raw_sq[i] = values[i] * values[i];
    }

    const double sum_q = pairwise_sum(q);
    const double sum_qc = pairwise_sum(qc);
    const double c1 = pairwise_sum(theta_q) / sum_q;
    const double c2 = pairwise_sum(theta_qc) / sum_qc;
    const double rho = pairwise_sum(sq) / nd;

    TheoryConstants out;
    out.beta = rho - c1 * c1 * sum_q / nd - c2 * c2 * sum_qc / nd;
    out.alpha = out.beta - (2.0 * sigma * kInvSqrt2Pi / nd) * pairwise_sum(kern) * (c1 - c2);
    out.c = {c1 + mean, c2 + mean};
    out.mu = {mean};
    out.dropped = {false, false};
    out.gamma = pairwise_sum(raw_sq) / nd;
    out.rho = rho;
    return out;
}

TheoryConstants theory_L_cluster(const ThetaVector& theta, double sigma, std::span<const double> mu) {
    validate_sigma(sigma);
    validate_separators(mu);
    const auto values = theta.values();
    const std::size_t n = values.size();
    const double nd = static_cast<double>(n);
    const double mean = theta.mean();
    const std::size_t clusters = mu.size() + 1;
    const auto bounds = cluster_bounds(mu, mean);

    std::vector<double> centred(n), sq(n), raw_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        centred[i] = values[i] - mean;
        sq[i] = centred[i] * centred[i];
        raw_sq[i] = values[i] * values[i];
    }

    TheoryConstants out;
    out.mu.assign(mu.begin(), mu.end());
    out.c.assign(clusters, 0.0);
    out.dropped.assign(clusters, false);
    out.gamma = pairwise_sum(raw_sq) / nd;
    out.rho = pairwise_sum(sq) / nd;

    double projected = 0.0;  // sum_j c_j^2 S_j, centred
    double cross = 0.0;      // sum_j c_j sum_i [e(mu_j) - e(mu_{j-1})], centred
    std::vector<double> mass(n), weighted(n), kern(n);
    for (std::size_t j = 0; j < clusters; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const Bound lo = standardize(bounds[j].lower, centred[i], sigma);
            const Bound hi = standardize(bounds[j].upper, centred[i], sigma);
            mass[i] = interval_mass(lo, hi);
            weighted[i] = centred[i] * mass[i];
            kern[i] = kernel(lo) - kernel(hi);
        }
        const double total = pairwise_sum(mass);
        if (!(total > 0.0)) {
            out.dropped[j] = true;
            out.c[j] = mean;
            continue;
        }
        const double cj = pairwise_sum(weighted) / total;
        out.c[j] = cj + mean;
        projected += cj * cj * total;
        cross += cj * pairwise_sum(kern);
    }

    out.beta = out.rho - projected / nd;
    out.alpha = out.beta - (2.0 * sigma * kInvSqrt2Pi / nd) * cross;
    return out;
}

std::vector<double> refine_separator_limits(const ThetaVector& theta, double sigma, std::span<const double> mu) {
    validate_sigma(sigma);
    validate_separators(mu);
    const auto values = theta.values();
    const std::size_t n = values.size();
    const std::size_t clusters = mu.size() + 1;
    const auto bounds = cluster_bounds(mu, 0.0);

    std::vector<double> refined;
    refined.reserve(2 * clusters);
    std::vector<double> mass(n), first_moment(n);
    for (std::size_t j = 0; j < clusters; ++j) {
        // E[y 1{lo < y <= hi}] = theta P(lo < y <= hi) + sigma (phi(lo') - phi(hi'))
        for (std::size_t i = 0; i < n; ++i) {
            const Bound lo = standardize(bounds[j].lower, values[i], sigma);
            const Bound hi = standardize(bounds[j].upper, values[i], sigma);
            mass[i] = interval_mass(lo, hi);
            first_moment[i] = values[i] * mass[i] + sigma * (standard_density(lo) - standard_density(hi));
        }
        const double total = pairwise_sum(mass);
        if (total > 0.0) {
            double m = pairwise_sum(first_moment) / total;
            if (bounds[j].upper) m = std::min(m, *bounds[j].upper);
            if (bounds[j].lower && !(m > *bounds[j].lower)) m = std::nextafter(*bounds[j].lower, INFINITY);
            refined.push_back(m);
        }
        if (j < mu.size()) refined.push_back(mu[j]);
    }
    refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
    return refined;
}

std::vector<double> separator_limits_for(const ThetaVector& theta, double sigma, std::size_t cluster_count) {
    if (cluster_count == 0 || (cluster_count & (cluster_count - 1)) != 0)
        throw ConfigError("cluster count must be a power of two, got " + std::to_string(cluster_count));
    if (cluster_count == 1) return {};
    std::vector<double> mu{theta.mean()};
    for (std::size_t l = 2; l < cluster_count; l *= 2) mu = refine_separator_limits(theta, sigma, mu);
    return mu;
}

double asymptotic_loss(LossKind kind, const TheoryConstants& constants, double sigma) {
    const double s2 = sigma * sigma;
    switch (kind) {
        case LossKind::js_positive:
            return constants.gamma * s2 / (constants.gamma + s2);
        case LossKind::lindley_positive:
            return constants.rho * s2 / (constants.rho + s2);
        case LossKind::cluster:
            // min(beta, beta s^2/(alpha + s^2)) written as beta s^2 / g(alpha + s^2)
            return constants.beta * s2 / std::max(s2, constants.alpha + s2);
    }
    return 0.0;
}

MonteCarloEstimate js_exact_risk_mc(const ThetaVector& theta, double sigma, std::size_t trials,
                                    std::uint64_t seed) {
    validate_sigma(sigma);
    const std::size_t n = theta.size();
    if (n < 3) throw DimensionError("js_exact_risk_mc: needs n >= 3");
    if (trials == 0) throw ConfigError("js_exact_risk_mc: needs trials >= 1");

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::theory_mc), 0));
    const auto values = theta.values();
    std::vector<double> inverse_norms(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double yi = values[i] + sigma * rng.normal();
            norm2 += yi * yi;
        }
        inverse_norms[t] = 1.0 / norm2;
    }
    const double td = static_cast<double>(trials);
    const double mean_inv = pairwise_sum(inverse_norms) / td;
    const double var_inv = trials > 1 ? sum_squared_deviation(inverse_norms, mean_inv) / (td - 1.0) : 0.0;

    const double nd = static_cast<double>(n);
    const double s2 = sigma * sigma;
    const double coeff = (nd - 2.0) * (nd - 2.0) * s2 * s2;
    return {nd * s2 - coeff * mean_inv, coeff * std::sqrt(var_inv / td)};
}

}  // namespace cjs
