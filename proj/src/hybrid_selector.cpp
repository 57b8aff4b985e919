#include "cjs/hybrid_selector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cjs/numeric.hpp"

namespace cjs {

double loss_estimate_lindley(const ObservationVector& y) {
    const double s2 = y.variance();
    const double spread = sum_squared_deviation(y.values(), sample_mean(y.values())) / static_cast<double>(y.size());
    return s2 * (1.0 - s2 / g_floor(spread, s2));
}

ClusterLossEstimate loss_estimate_cluster(const ObservationVector& y, const ClusterFit& fit) {
    const double s2 = y.variance();
    const double nd = static_cast<double>(y.size());
    const auto& attr = fit.attractors;

    double residual = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - attr.attracting_vector[i];
        residual += d * d;
    }
    residual /= nd;

    // sum_j a_j (B_j - B_{j-1}) with B_0 = B_L = 0, i.e. sum_k B_k (a_k - a_{k+1})
    double correction = 0.0;
    for (std::size_t k = 0; k < attr.boundary_counts.size(); ++k)
        correction += static_cast<double>(attr.boundary_counts[k]) * (attr.attractors[k] - attr.attractors[k + 1]);
    correction *= s2 / (nd * attr.delta);

    ClusterLossEstimate out;
    out.raw = s2 * (residual - s2 + correction) / g_floor(residual, s2);
    out.value = std::max(0.0, out.raw);
    out.eligible = !attr.any_empty();
    return out;
}

ClusterLossEstimate loss_estimate_cluster(const ObservationVector& y, std::size_t cluster_count, double delta) {
    if (cluster_count < 2) throw ConfigError("loss_estimate_cluster needs L >= 2");
    return loss_estimate_cluster(y, fit_cluster_js(y, cluster_count, delta));
}

HybridResult select_hybrid(const ObservationVector& y, const std::vector<std::size_t>& candidates, double delta) {
    if (candidates.empty()) throw ConfigError("select_hybrid: empty candidate set");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive and finite");

    std::vector<std::size_t> sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    HybridResult result;
    std::map<std::size_t, EstimatorOutput> outputs;
    for (std::size_t l : sorted) {
        if (l == 1) {
            result.estimates.per_candidate[1] = loss_estimate_lindley(y);
            continue;
        }
        ClusterFit fit = fit_cluster_js(y, l, delta);
        const auto est = loss_estimate_cluster(y, fit);
        result.estimates.per_candidate[l] = est.value;
        if (!est.eligible) result.estimates.ineligible.insert(l);
        outputs.emplace(l, std::move(fit.output));
    }

    std::size_t chosen = 0;
    double best = 0.0;
    for (std::size_t l : sorted) {
        if (result.estimates.ineligible.count(l)) continue;
        const double v = result.estimates.per_candidate[l];
        if (chosen == 0 || v < best) {  // strict: ties keep the smaller L
            chosen = l;
            best = v;
        }
    }
    if (chosen == 0) chosen = 1;

    for (std::size_t l : sorted) result.selection.gamma_weights[l] = 0;
    result.selection.gamma_weights[chosen] = 1;
    result.selection.chosen = chosen;
    result.output = (chosen == 1) ? estimate_lindley(y, true) : std::move(outputs.at(chosen));
    return result;
}

}  // namespace cjs
