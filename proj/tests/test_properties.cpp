// Randomized invariants over many small problems.
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cjs/cluster_engine.hpp"
#include "cjs/core_estimators.hpp"
#include "cjs/hybrid_selector.hpp"
#include "cjs/risk_theory.hpp"
#include "cjs/rng.hpp"

using namespace cjs;

namespace {

std::vector<double> random_theta(Rng& rng, std::size_t n) {
    std::vector<double> t(n);
    const double scale = rng.uniform(0.0, 6.0);
    for (double& v : t) v = scale * rng.uniform(-1.0, 1.0) + (rng.uniform() < 0.3 ? 3.0 : 0.0);
    return t;
}

std::size_t random_n(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// beta as a sum of per-cluster weighted variances, alpha from the kernel
// cross term, written directly from the definitions with explicit loops.
struct Oracle {
    double beta = 0.0;
    double alpha = 0.0;
};

Oracle brute_force(const std::vector<double>& theta, double sigma, const std::vector<double>& mu) {
    const std::size_t n = theta.size();
    const std::size_t L = mu.size() + 1;
    auto upper = [&](std::size_t j, std::size_t i) {  // Q((mu_{j-1} - theta_i)/sigma), 0 at +inf
        return j == 0 ? 0.0 : upper_tail((mu[j - 1] - theta[i]) / sigma);
    };
    auto lower = [&](std::size_t j, std::size_t i) {  // Q((mu_j - theta_i)/sigma), 1 at -inf
        return j == L - 1 ? 1.0 : upper_tail((mu[j] - theta[i]) / sigma);
    };
    auto kernel = [&](std::size_t k, std::size_t i) {  // separator k in 0..L, infinite ends give 0
        if (k == 0 || k == L) return 0.0;
        const double z = (mu[k - 1] - theta[i]) / sigma;
        return std::exp(-0.5 * z * z);
    };
    Oracle o;
    double cross = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
        double mass = 0.0, first = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = lower(j, i) - upper(j, i);
            mass += w;
            first += w * theta[i];
        }
        if (mass <= 0.0) continue;
        const double c = first / mass;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = lower(j, i) - upper(j, i);
            o.beta += w * (theta[i] - c) * (theta[i] - c);
            cross += c * (kernel(j + 1, i) - kernel(j, i));
        }
    }
    o.beta /= static_cast<double>(n);
    o.alpha = o.beta - 2.0 * sigma / (static_cast<double>(n) * std::sqrt(2.0 * std::numbers::pi)) * cross;
    return o;
}

}  // namespace

TEST_CASE("two-cluster constants: ordering and the variance decomposition") {
    Rng rng(2718);
    for (int r = 0; r < 1000; ++r) {
        const std::size_t n = random_n(rng, 3, 12);
        const auto theta = random_theta(rng, n);
        const double sigma = rng.uniform(0.2, 2.0);
        const ThetaVector tv(theta);
        const auto k = theory_two_cluster(tv, sigma);
        CHECK(k.c[0] >= k.c[1] - 1e-12);
        CHECK(k.beta >= k.alpha - 1e-12);
        CHECK(std::isfinite(k.alpha));
        CHECK(k.beta >= -1e-12);
        CHECK(k.gamma >= k.rho - 1e-12);
        CHECK(k.rho >= 0.0);

        const auto oracle = brute_force(theta, sigma, {tv.mean()});
        CHECK(k.beta == doctest::Approx(oracle.beta).epsilon(1e-9).scale(1.0));
        CHECK(k.alpha == doctest::Approx(oracle.alpha).epsilon(1e-9).scale(1.0));

        const std::vector<double> mu{tv.mean()};
        const auto gen = theory_L_cluster(tv, sigma, mu);
        CHECK(std::abs(gen.beta - k.beta) <= 1e-12 * std::max(1.0, std::abs(k.beta)));
        CHECK(std::abs(gen.alpha - k.alpha) <= 1e-12 * std::max(1.0, std::abs(k.alpha)));

        const double limit = asymptotic_loss(LossKind::cluster, k, sigma);
        CHECK(limit <= k.beta + 1e-12);
        CHECK(limit <= sigma * sigma * k.beta / std::max(sigma * sigma, k.alpha + sigma * sigma) + 1e-12);
    }
}

TEST_CASE("L-cluster constants match the brute-force oracle") {
    Rng rng(31415);
    for (int r = 0; r < 300; ++r) {
        const std::size_t n = random_n(rng, 3, 12);
        const auto theta = random_theta(rng, n);
        const double sigma = rng.uniform(0.3, 2.0);
        const ThetaVector tv(theta);
        const std::size_t L = rng.uniform() < 0.5 ? 4 : 8;
        const auto mu = separator_limits_for(tv, sigma, L);
        for (std::size_t k = 1; k < mu.size(); ++k) CHECK(mu[k] < mu[k - 1]);
        const auto got = theory_L_cluster(tv, sigma, mu);
        const auto oracle = brute_force(theta, sigma, mu);
        CHECK(got.beta == doctest::Approx(oracle.beta).epsilon(1e-9).scale(1.0));
        CHECK(got.alpha == doctest::Approx(oracle.alpha).epsilon(1e-9).scale(1.0));
        CHECK(got.beta >= -1e-12);
    }
}

TEST_CASE("estimator outputs satisfy the shrinkage identity") {
    Rng rng(161803);
    for (int r = 0; r < 500; ++r) {
        const std::size_t n = random_n(rng, 4, 40);
        auto values = random_theta(rng, n);
        for (double& v : values) v += rng.normal();
        const ObservationVector y(values, rng.uniform(0.3, 2.0));
        const double delta = default_delta(n);
        std::vector<EstimatorOutput> outs{estimate_ml(y),
                                          estimate_js(y),
                                          estimate_js_positive(y),
                                          estimate_lindley(y, false),
                                          estimate_lindley(y, true),
                                          estimate_cluster_js(y, 2, delta),
                                          estimate_cluster_js(y, 4, delta),
                                          select_hybrid(y, default_candidates(), delta).output};
        for (std::size_t e = 0; e < outs.size(); ++e) {
            const auto& o = outs[e];
            for (std::size_t i = 0; i < n; ++i) {
                const double rebuilt = o.attracting_vector[i] + o.shrinkage_factor * (y[i] - o.attracting_vector[i]);
                CHECK(std::abs(rebuilt - o.estimate[i]) <= 1e-12 * std::max(1.0, std::abs(o.estimate[i])));
            }
            if (e == 2 || e >= 4) {
                CHECK(o.shrinkage_factor >= 0.0);
                CHECK(o.shrinkage_factor <= 1.0);
            }
        }
        double norm_plus = 0.0, norm_js = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            norm_plus += outs[2].estimate[i] * outs[2].estimate[i];
            norm_js += outs[1].estimate[i] * outs[1].estimate[i];
        }
        CHECK(norm_plus <= norm_js + 1e-12);

        const SubspaceBasis ones{std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)))};
        CHECK(estimate_subspace_js(y, ones).estimate == outs[3].estimate);
    }
}

TEST_CASE("estimators fix their own attracting vector") {
    Rng rng(4242);
    for (int r = 0; r < 100; ++r) {
        const std::size_t n = random_n(rng, 4, 30);
        const ObservationVector y(random_theta(rng, n), 1.0);
        const auto fit = fit_cluster_js(y, 2, default_delta(n));
        const auto again = shrink_toward(ObservationVector(fit.attractors.attracting_vector, 1.0),
                                         fit.attractors.attracting_vector);
        CHECK(again.estimate == fit.attractors.attracting_vector);
        const ObservationVector flat(std::vector<double>(n, y[0]), 1.0);
        CHECK(estimate_lindley(flat, true).estimate == std::vector<double>(n, y[0]));
    }
}

TEST_CASE("partitions: descending, indicator duality, counts sum to n") {
    Rng rng(1234);
    for (int r = 0; r < 300; ++r) {
        const std::size_t n = random_n(rng, 1, 50);
        auto values = random_theta(rng, n);
        if (rng.uniform() < 0.2)
            for (double& v : values) v = std::round(v);  // force ties
        const ObservationVector y(values, 1.0);
        for (std::size_t L : {1u, 2u, 4u, 8u}) {
            const auto p = partition_for(y, L);
            CHECK(p.cluster_count() <= L);
            for (std::size_t k = 1; k < p.separators().size(); ++k) CHECK(p.separators()[k] < p.separators()[k - 1]);
            const auto a = assign_clusters(y.values(), p);
            std::size_t total = 0;
            for (std::size_t c : a.counts) total += c;
            CHECK(total == n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = a.labels[i];
                const auto s = p.separators();
                CHECK((j == 0 || y[i] <= s[j - 1]));
                CHECK((j == s.size() || y[i] > s[j]));
            }
            if (L >= 2 && n >= 2) {
                const auto at = compute_attractors(y, p, a, default_delta(n));
                for (std::size_t i = 0; i < n; ++i) CHECK(at.attracting_vector[i] == at.attractors[a.labels[i]]);
            }
        }
    }
}

TEST_CASE("two-cluster attractors equal cluster means when the window is empty") {
    Rng rng(55);
    for (int r = 0; r < 200; ++r) {
        const std::size_t n = random_n(rng, 2, 30);
        const ObservationVector y(random_theta(rng, n), 1.0);
        const auto p = partition_two(y);
        const auto a = assign_clusters(y.values(), p);
        double gap = INFINITY;
        for (std::size_t i = 0; i < n; ++i) gap = std::min(gap, std::abs(y[i] - p.separators()[0]));
        if (!(gap > 1e-3) || a.counts[0] == 0) continue;
        const auto at = compute_attractors(y, p, a, 0.5 * gap);
        std::vector<double> sum(2, 0.0);
        for (std::size_t i = 0; i < n; ++i) sum[a.labels[i]] += y[i];
        CHECK(at.attractors[0] == doctest::Approx(sum[0] / a.counts[0]).epsilon(1e-13));
        CHECK(at.attractors[1] == doctest::Approx(sum[1] / a.counts[1]).epsilon(1e-13));
    }
}

TEST_CASE("loss estimates stay finite and nonnegative") {
    Rng rng(777);
    for (int r = 0; r < 300; ++r) {
        const std::size_t n = random_n(rng, 2, 60);
        auto values = random_theta(rng, n);
        for (double& v : values) v += rng.normal();
        const double sigma = rng.uniform(0.2, 3.0);
        const ObservationVector y(values, sigma);
        const double lin = loss_estimate_lindley(y);
        CHECK(lin >= 0.0);
        CHECK(lin < sigma * sigma);
        for (std::size_t L : {2u, 4u}) {
            const auto est = loss_estimate_cluster(y, L, default_delta(n));
            CHECK(std::isfinite(est.value));
            CHECK(est.value >= 0.0);
        }
    }
}
