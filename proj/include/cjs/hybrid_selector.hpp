#ifndef CJS_HYBRID_SELECTOR_HPP
#define CJS_HYBRID_SELECTOR_HPP

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "cjs/cluster_engine.hpp"
#include "cjs/core_estimators.hpp"

namespace cjs {

/// Estimated normalized loss of the positive-part Lindley estimator,
/// sigma^2 (1 - sigma^2 / g(|y - ybar 1|^2 / n)). Always in [0, sigma^2).
double loss_estimate_lindley(const ObservationVector& y);

struct ClusterLossEstimate {
    double value = 0.0;  // raw value clamped at 0
    double raw = 0.0;
    bool eligible = true;  // false when the fit has an empty cluster
};

/// Loss estimate of an already fitted cluster estimator.
ClusterLossEstimate loss_estimate_cluster(const ObservationVector& y, const ClusterFit& fit);

/// Loss estimate of the L-cluster estimator (L >= 2, power of two).
ClusterLossEstimate loss_estimate_cluster(const ObservationVector& y, std::size_t cluster_count, double delta);

struct LossEstimate {
    std::map<std::size_t, double> per_candidate;
    std::set<std::size_t> ineligible;
};

struct HybridSelection {
    std::size_t chosen = 1;
    std::map<std::size_t, int> gamma_weights;  // exactly one entry is 1
};

struct HybridResult {
    HybridSelection selection;
    LossEstimate estimates;
    EstimatorOutput output;
};

inline const std::vector<std::size_t>& default_candidates() {
    static const std::vector<std::size_t> candidates{1, 2, 4};
    return candidates;
}

/// Hard selection among L-cluster estimators by smallest estimated loss.
/// Ties go to the smallest L. If every candidate is ineligible the result
/// falls back to L = 1.
HybridResult select_hybrid(const ObservationVector& y, const std::vector<std::size_t>& candidates, double delta);

}  // namespace cjs

#endif  // CJS_HYBRID_SELECTOR_HPP
