#include "cjs/cluster_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cjs/numeric.hpp"

namespace cjs {

Partition::Partition(std::vector<double> separators) : separators_(std::move(separators)) {
    for (std::size_t k = 0; k < separators_.size(); ++k) {
        if (!std::isfinite(separators_[k])) throw ConfigError("partition separator is not finite");
        if (k > 0 && !(separators_[k] < separators_[k - 1]))
            throw ConfigError("partition separators must be strictly descending");
    }
}

bool AttractorSet::any_empty() const noexcept {
    return std::find(empty.begin(), empty.end(), true) != empty.end();
}

double default_delta(std::size_t n) { return 5.0 / std::sqrt(static_cast<double>(n)); }

Partition partition_two(const ObservationVector& y) { return Partition({sample_mean(y.values())}); }

ClusterAssignment assign_clusters(std::span<const double> y, const Partition& p) {
    const auto seps = p.separators();
    ClusterAssignment out;
    out.labels.resize(y.size());
    out.counts.assign(p.cluster_count(), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        // number of separators s with y_i <= s; those are s_1..s_k
        std::size_t k = 0;
        while (k < seps.size() && y[i] <= seps[k]) ++k;
        out.labels[i] = k;
        ++out.counts[k];
    }
    return out;
}

Partition refine_partition(const ObservationVector& y, const Partition& p) {
    const auto assignment = assign_clusters(y.values(), p);
    const std::size_t clusters = p.cluster_count();

    std::vector<std::vector<double>> members(clusters);
    for (std::size_t j = 0; j < clusters; ++j) members[j].reserve(assignment.counts[j]);
    for (std::size_t i = 0; i < y.size(); ++i) members[assignment.labels[i]].push_back(y[i]);

    std::vector<double> refined;
    refined.reserve(2 * clusters);
    const auto seps = p.separators();
    for (std::size_t j = 0; j < clusters; ++j) {
        if (!members[j].empty()) refined.push_back(sample_mean(members[j]));
        if (j < seps.size()) refined.push_back(seps[j]);
    }
    // A within-cluster mean equals the cluster's upper separator only when
    // every member sits on that separator.
    refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
    return Partition(std::move(refined));
}

Partition partition_for(const ObservationVector& y, std::size_t cluster_count) {
    if (cluster_count == 0 || (cluster_count & (cluster_count - 1)) != 0)
        throw ConfigError("cluster count must be a power of two, got " + std::to_string(cluster_count));
    Partition p;
    for (std::size_t target = 1; target < cluster_count; target *= 2) p = refine_partition(y, p);
    return p;
}

AttractorSet compute_attractors(const ObservationVector& y, const Partition& p,
                                const ClusterAssignment& assignment, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive and finite");
    if (assignment.labels.size() != y.size() || assignment.counts.size() != p.cluster_count())
        throw ConfigError("cluster assignment does not match observation/partition");

    const auto seps = p.separators();
    const std::size_t clusters = p.cluster_count();

    AttractorSet out;
    out.delta = delta;
    out.boundary_counts.assign(seps.size(), 0);
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t k = 0; k < seps.size(); ++k)
            if (std::abs(y[i] - seps[k]) <= delta) ++out.boundary_counts[k];

    std::vector<std::vector<double>> members(clusters);
    for (std::size_t j = 0; j < clusters; ++j) members[j].reserve(assignment.counts[j]);
    for (std::size_t i = 0; i < y.size(); ++i) members[assignment.labels[i]].push_back(y[i]);

    out.empty.resize(clusters);
    for (std::size_t j = 0; j < clusters; ++j) out.empty[j] = assignment.counts[j] == 0;

    // separator k sits between cluster k (above) and cluster k+1 (below)
    auto effective = [&](std::size_t k) -> double {
        if (out.empty[k] || out.empty[k + 1]) return 0.0;
        return static_cast<double>(out.boundary_counts[k]);
    };

    const double scale = y.variance() / (2.0 * delta);
    out.attractors.assign(clusters, 0.0);
    for (std::size_t j = 0; j < clusters; ++j) {
        if (out.empty[j]) continue;
        const double lower = (j < seps.size()) ? effective(j) : 0.0;
        const double upper = (j > 0) ? effective(j - 1) : 0.0;
        // mean first so a constant cluster keeps its value exactly
        out.attractors[j] =
            sample_mean(members[j]) - scale * (lower - upper) / static_cast<double>(assignment.counts[j]);
    }

    out.attracting_vector.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out.attracting_vector[i] = out.attractors[assignment.labels[i]];
    return out;
}

ClusterFit fit_cluster_js(const ObservationVector& y, const Partition& p, double delta) {
    ClusterFit fit;
    fit.partition = p;
    fit.assignment = assign_clusters(y.values(), p);
    fit.attractors = compute_attractors(y, p, fit.assignment, delta);
    fit.output = shrink_toward(y, fit.attractors.attracting_vector);
    return fit;
}

ClusterFit fit_cluster_js(const ObservationVector& y, std::size_t cluster_count, double delta) {
    if (cluster_count < 2) throw ConfigError("fit_cluster_js needs at least two clusters");
    return fit_cluster_js(y, partition_for(y, cluster_count), delta);
}

EstimatorOutput estimate_cluster_js(const ObservationVector& y, std::size_t cluster_count, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive and finite");
    if (cluster_count == 1) return estimate_lindley(y, true);
    return fit_cluster_js(y, cluster_count, delta).output;
}

}  // namespace cjs
