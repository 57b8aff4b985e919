#ifndef CJS_RISK_THEORY_HPP
#define CJS_RISK_THEORY_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cjs {

/// Upper-tail standard normal probability Q(x) = P(Z > x).
double q_function(double x) noexcept;

/// Q^c(x) = 1 - Q(x), evaluated without cancellation.
double q_complement(double x) noexcept;

/// Ground-truth parameter vector with its cached mean.
class ThetaVector {
public:
    /// Throws ConfigError on empty or non-finite input.
    explicit ThetaVector(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    double mean() const noexcept { return mean_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    double mean_;
};

/// Deterministic limits of the cluster estimators' loss.
struct TheoryConstants {
    double beta = 0.0;
    double alpha = 0.0;
    std::vector<double> c;        // per-cluster limit attractors
    std::vector<double> mu;       // deterministic separators, descending
    std::vector<bool> dropped;    // cluster carries no probability mass
    double gamma = 0.0;           // |theta|^2 / n
    double rho = 0.0;             // |theta - mean|^2 / n
};

enum class LossKind { js_positive, lindley_positive, cluster };

/// gamma, rho and the two-cluster constants (mu = {theta_bar}).
TheoryConstants theory_two_cluster(const ThetaVector& theta, double sigma);

/// L-cluster constants for deterministic separators mu (strictly descending,
/// L = mu.size() + 1). Clusters with no Gaussian mass are flagged in
/// `dropped` and left out of every sum.
TheoryConstants theory_L_cluster(const ThetaVector& theta, double sigma, std::span<const double> mu);

/// Deterministic counterpart of refine_partition: inserts, in every cluster,
/// the limit of the within-cluster mean of y.
std::vector<double> refine_separator_limits(const ThetaVector& theta, double sigma, std::span<const double> mu);

/// Separator limits for L in {1, 2, 4, ...}, starting from {theta_bar}.
std::vector<double> separator_limits_for(const ThetaVector& theta, double sigma, std::size_t cluster_count);

/// gamma s^2/(gamma+s^2), rho s^2/(rho+s^2) or min(beta, beta s^2/(alpha+s^2)).
double asymptotic_loss(LossKind kind, const TheoryConstants& constants, double sigma);

struct MonteCarloEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo evaluation of n s^2 - (n-2)^2 s^4 E[1/|y|^2] (unnormalized
/// risk of the James-Stein estimator). Requires n >= 3 and trials >= 1.
MonteCarloEstimate js_exact_risk_mc(const ThetaVector& theta, double sigma, std::size_t trials,
                                    std::uint64_t seed);

}  // namespace cjs

#endif  // CJS_RISK_THEORY_HPP
