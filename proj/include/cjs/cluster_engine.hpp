#ifndef CJS_CLUSTER_ENGINE_HPP
#define CJS_CLUSTER_ENGINE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cjs/core_estimators.hpp"

namespace cjs {

/// Strictly descending separators s_1 > ... > s_{L-1}. Cluster j (0-based)
/// is the half-open interval (s_{j+1}, s_j] with s_0 = +inf, s_L = -inf.
class Partition {
public:
    Partition() = default;
    /// Throws ConfigError unless the separators are finite and strictly descending.
    explicit Partition(std::vector<double> separators);

    std::span<const double> separators() const noexcept { return separators_; }
    std::size_t cluster_count() const noexcept { return separators_.size() + 1; }

private:
    std::vector<double> separators_;
};

struct ClusterAssignment {
    std::vector<std::size_t> labels;  // 0-based cluster index per observation
    std::vector<std::size_t> counts;  // occupancy per cluster, sums to n
};

struct AttractorSet {
    std::vector<double> attractors;          // a_j; 0 for empty clusters
    std::vector<bool> empty;                 // cluster had no observations
    double delta = 0.0;
    std::vector<std::size_t> boundary_counts;  // B_j = #{i : |y_i - s_j| <= delta}, one per separator
    std::vector<double> attracting_vector;   // nu_i = a_{label(i)}

    bool any_empty() const noexcept;
};

/// Everything produced while fitting an L-cluster estimator to one observation.
struct ClusterFit {
    Partition partition;
    ClusterAssignment assignment;
    AttractorSet attractors;
    EstimatorOutput output;
};

/// delta = 5 / sqrt(n).
double default_delta(std::size_t n);

/// Two clusters split at the sample mean.
Partition partition_two(const ObservationVector& y);

/// Doubling step: inserts the within-cluster mean of y inside every
/// nonempty cluster. Empty clusters add nothing; coincident separators are
/// merged so the result stays strictly descending.
Partition refine_partition(const ObservationVector& y, const Partition& p);

/// Partition for L in {1, 2, 4, 8, ...} built by repeated doubling from the
/// trivial partition. Throws ConfigError for other L.
Partition partition_for(const ObservationVector& y, std::size_t cluster_count);

/// Interval membership; y_i == s_j joins the lower cluster.
ClusterAssignment assign_clusters(std::span<const double> y, const Partition& p);

/// Bias-corrected attractors
///   a_j = [sum_{C_j} y_i - sigma^2/(2 delta) (B_j - B_{j-1})] / |C_j|
/// with B_0 = B_L = 0. A separator adjacent to an empty cluster contributes
/// no correction (its count is reported but treated as 0).
AttractorSet compute_attractors(const ObservationVector& y, const Partition& p,
                                const ClusterAssignment& assignment, double delta);

/// Full pipeline for an explicit partition: assign, attract, shrink.
ClusterFit fit_cluster_js(const ObservationVector& y, const Partition& p, double delta);

/// L-cluster estimator. L = 1 is positive-part Lindley; powers of two use
/// the doubling partition. Throws ConfigError on invalid L or delta <= 0.
EstimatorOutput estimate_cluster_js(const ObservationVector& y, std::size_t cluster_count, double delta);

/// Same as estimate_cluster_js for L >= 2, returning the intermediate pieces.
ClusterFit fit_cluster_js(const ObservationVector& y, std::size_t cluster_count, double delta);

}  // namespace cjs

#endif  // CJS_CLUSTER_ENGINE_HPP
