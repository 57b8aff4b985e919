#include "cjs/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cjs/numeric.hpp"

namespace cjs {

std::string to_string(ThetaKind kind) {
    switch (kind) {
        case ThetaKind::two_point: return "two_point";
        case ThetaKind::clustered: return "clustered";
        case ThetaKind::uniform: return "uniform";
    }
    return "unknown";
}

ThetaKind theta_kind_from_string(const std::string& name) {
    if (name == "two_point") return ThetaKind::two_point;
    if (name == "clustered") return ThetaKind::clustered;
    if (name == "uniform") return ThetaKind::uniform;
    throw ConfigError("unknown theta kind '" + name + "'");
}

std::vector<std::size_t> cluster_counts(const ThetaSpec& spec, std::size_t n) {
    const auto& f = spec.fractions;
    if (f.empty()) throw ConfigError("clustered theta needs at least one cluster");
    for (double v : f)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("cluster fractions must be finite and >= 0");

    const double total = std::accumulate(f.begin(), f.end(), 0.0);
    const double nd = static_cast<double>(n);
    const bool integral = std::all_of(f.begin(), f.end(), [](double v) { return v == std::floor(v); });

    std::vector<std::size_t> counts(f.size());
    if (integral && total == nd) {
        for (std::size_t k = 0; k < f.size(); ++k) counts[k] = static_cast<std::size_t>(f[k]);
        return counts;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("cluster fractions must sum to 1 or to n = " + std::to_string(n));

    // largest remainder; ties resolved by cluster order
    std::vector<double> remainders(f.size());
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double exact = f[k] / total * nd;
        counts[k] = static_cast<std::size_t>(std::floor(exact));
        remainders[k] = exact - std::floor(exact);
        assigned += counts[k];
    }
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[order[r % order.size()]];
    return counts;
}

void validate(const ThetaSpec& spec, std::size_t n) {
    if (n == 0) throw ConfigError("theta dimension must be >= 1");
    if (!std::isfinite(spec.tau)) throw ConfigError("tau must be finite");
    switch (spec.kind) {
        case ThetaKind::two_point:
            if (!(spec.rho >= 0.0) || !std::isfinite(spec.rho)) throw ConfigError("rho must be finite and >= 0");
            break;
        case ThetaKind::clustered: {
            const std::size_t k = spec.centers.size();
            if (k == 0) throw ConfigError("clustered theta needs centers");
            if (spec.widths.size() != k || spec.fractions.size() != k)
                throw ConfigError("clustered theta needs one width and one fraction per center");
            for (double w : spec.widths)
                if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("cluster widths must be finite and >= 0");
            for (double c : spec.centers)
                if (!std::isfinite(c)) throw ConfigError("cluster centers must be finite");
            cluster_counts(spec, n);
            break;
        }
        case ThetaKind::uniform:
            if (spec.tau < 0.0) throw ConfigError("uniform theta needs tau >= 0");
            break;
    }
}

ThetaVector generate_theta(const ThetaSpec& spec, std::size_t n, Rng& rng) {
    validate(spec, n);
    std::vector<double> values;
    values.reserve(n);
    switch (spec.kind) {
        case ThetaKind::two_point: {
            const auto upper = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.rho / (1.0 + spec.rho)));
            values.assign(upper, spec.tau);
            values.resize(n, -spec.rho * spec.tau);
            break;
        }
        case ThetaKind::clustered: {
            const auto counts = cluster_counts(spec, n);
            for (std::size_t k = 0; k < counts.size(); ++k) {
                const double centre = spec.centers[k] * spec.tau;
                const double half = 0.5 * spec.widths[k] * spec.tau;
                for (std::size_t m = 0; m < counts[k]; ++m)
                    values.push_back(half == 0.0 ? centre : rng.uniform(centre - half, centre + half));
            }
            break;
        }
        case ThetaKind::uniform:
            for (std::size_t i = 0; i < n; ++i) values.push_back(rng.uniform(-spec.tau, spec.tau));
            break;
    }
    return ThetaVector(std::move(values));
}

ThetaVector generate_theta(const ThetaSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::theta), 0));
    return generate_theta(spec, n, rng);
}

}  // namespace cjs
