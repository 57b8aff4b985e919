#include "cjs/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cjs/cluster_engine.hpp"
#include "cjs/hybrid_selector.hpp"
#include "cjs/numeric.hpp"
#include "cjs/rng.hpp"

namespace cjs {

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t parse_count(const std::string& label, std::size_t prefix) {
    const std::string digits = label.substr(prefix);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ConfigError("unknown estimator '" + label + "'");
    const auto value = static_cast<std::size_t>(std::stoull(digits));
    if (!is_power_of_two(value)) throw ConfigError("estimator '" + label + "': cluster count must be a power of two");
    return value;
}

}  // namespace

EstimatorSpec parse_estimator(const std::string& label) {
    EstimatorSpec spec;
    spec.label = label;
    if (label == "ml") {
        spec.kind = EstimatorKind::ml;
    } else if (label == "js") {
        spec.kind = EstimatorKind::js;
    } else if (label == "js+") {
        spec.kind = EstimatorKind::js_positive;
    } else if (label == "lindley") {
        spec.kind = EstimatorKind::lindley;
    } else if (label == "lindley+") {
        spec.kind = EstimatorKind::lindley_positive;
    } else if (label == "hybrid") {
        spec.kind = EstimatorKind::hybrid;
        spec.candidates = {1, 2};
    } else if (label.rfind("hybrid", 0) == 0) {
        spec.kind = EstimatorKind::hybrid;
        const std::size_t top = parse_count(label, 6);
        for (std::size_t l = 1; l <= top; l *= 2) spec.candidates.push_back(l);
    } else if (label.rfind("js", 0) == 0) {
        spec.kind = EstimatorKind::cluster;
        spec.clusters = parse_count(label, 2);
    } else {
        throw ConfigError("unknown estimator '" + label + "'");
    }
    return spec;
}

EstimatorOutput apply_estimator(const EstimatorSpec& spec, const ObservationVector& y, double delta) {
    switch (spec.kind) {
        case EstimatorKind::ml: return estimate_ml(y);
        case EstimatorKind::js: return estimate_js(y);
        case EstimatorKind::js_positive: return estimate_js_positive(y);
        case EstimatorKind::lindley: return estimate_lindley(y, false);
        case EstimatorKind::lindley_positive: return estimate_lindley(y, true);
        case EstimatorKind::cluster: return estimate_cluster_js(y, spec.clusters, delta);
        case EstimatorKind::hybrid: return select_hybrid(y, spec.candidates, delta).output;
    }
    throw ConfigError("unhandled estimator kind");
}

std::optional<double> theory_loss(const EstimatorSpec& spec, const ThetaVector& theta, double sigma) {
    auto cluster_limit = [&](std::size_t clusters) {
        if (clusters == 1) return asymptotic_loss(LossKind::lindley_positive, theory_two_cluster(theta, sigma), sigma);
        const auto mu = separator_limits_for(theta, sigma, clusters);
        return asymptotic_loss(LossKind::cluster, theory_L_cluster(theta, sigma, mu), sigma);
    };
    switch (spec.kind) {
        case EstimatorKind::ml: return sigma * sigma;
        case EstimatorKind::js:
        case EstimatorKind::js_positive:
            return asymptotic_loss(LossKind::js_positive, theory_two_cluster(theta, sigma), sigma);
        case EstimatorKind::lindley:
        case EstimatorKind::lindley_positive:
            return asymptotic_loss(LossKind::lindley_positive, theory_two_cluster(theta, sigma), sigma);
        case EstimatorKind::cluster: return cluster_limit(spec.clusters);
        case EstimatorKind::hybrid: {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t l : spec.candidates) best = std::min(best, cluster_limit(l));
            return best;
        }
    }
    return std::nullopt;
}

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::tau: return "tau";
        case SweepVariable::n: return "n";
        case SweepVariable::theta_norm: return "theta_norm";
    }
    return "unknown";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
    if (name == "tau") return SweepVariable::tau;
    if (name == "n") return SweepVariable::n;
    if (name == "theta_norm") return SweepVariable::theta_norm;
    throw ConfigError("unknown sweep variable '" + name + "'");
}

double resolve_delta(const ExperimentConfig& config, std::size_t n) {
    return config.delta ? *config.delta : default_delta(n);
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
    std::vector<SweepPoint> points;
    if (!config.sweep) {
        points.push_back({static_cast<double>(config.n), config.n, config.theta, splitmix64(config.seed)});
        return points;
    }
    const auto& values = config.sweep->values;
    for (std::size_t k = 0; k < values.size(); ++k) {
        SweepPoint p{values[k], config.n, config.theta, splitmix64(config.seed ^ splitmix64(k + 1))};
        switch (config.sweep->variable) {
            case SweepVariable::tau: p.theta_spec.tau = values[k]; break;
            case SweepVariable::n: p.n = static_cast<std::size_t>(values[k]); break;
            case SweepVariable::theta_norm:
                p.theta_spec.tau = values[k] / std::sqrt(static_cast<double>(config.n));
                break;
        }
        points.push_back(std::move(p));
    }
    return points;
}

void validate(const ExperimentConfig& config) {
    if (config.n == 0) throw ConfigError("n must be >= 1");
    if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) throw ConfigError("sigma must be positive");
    if (config.trials == 0) throw ConfigError("trials must be >= 1");
    if (config.delta && (!(*config.delta > 0.0) || !std::isfinite(*config.delta)))
        throw ConfigError("delta must be positive");
    if (config.estimators.empty()) throw ConfigError("at least one estimator is required");
    for (const auto& label : config.estimators) parse_estimator(label);
    if (config.sweep) {
        if (config.sweep->values.empty()) throw ConfigError("sweep needs at least one value");
        for (double v : config.sweep->values) {
            if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
            if (config.sweep->variable == SweepVariable::n && (v < 1.0 || v != std::floor(v)))
                throw ConfigError("n sweep values must be positive integers");
        }
    }
    for (const auto& p : sweep_points(config)) validate(p.theta_spec, p.n);
}

namespace {

struct PointSetup {
    std::size_t n;
    double sigma;
    double delta;
    std::uint64_t seed;
    ThetaVector theta;
    std::vector<EstimatorSpec> estimators;
};

PointSetup make_setup(const ExperimentConfig& config, const SweepPoint& point) {
    std::vector<EstimatorSpec> estimators;
    for (const auto& label : config.estimators) estimators.push_back(parse_estimator(label));
    return {point.n, config.sigma, resolve_delta(config, point.n), point.seed,
            generate_theta(point.theta_spec, point.n, point.seed), std::move(estimators)};
}

// Fills one normalized loss per estimator; NaN marks an estimator failure.
void run_trial(const PointSetup& setup, std::size_t trial, std::span<double> losses) {
    Rng rng(derive_seed(setup.seed, static_cast<std::uint64_t>(Stream::noise), trial));
    const auto theta = setup.theta.values();
    std::vector<double> y(setup.n);
    for (std::size_t i = 0; i < setup.n; ++i) y[i] = theta[i] + setup.sigma * rng.normal();
    const ObservationVector obs(std::move(y), setup.sigma);
    for (std::size_t e = 0; e < setup.estimators.size(); ++e) {
        try {
            const auto out = apply_estimator(setup.estimators[e], obs, setup.delta);
            losses[e] = normalized_loss(out.estimate, theta);
        } catch (const std::exception&) {
            losses[e] = std::numeric_limits<double>::quiet_NaN();
        }
    }
}

void append_theory_rows(const PointSetup& setup, double sweep_value, AggregateResult& result) {
    for (const auto& spec : setup.estimators) {
        const auto value = theory_loss(spec, setup.theta, setup.sigma);
        if (!value) continue;
        ResultRow row;
        row.sweep_value = sweep_value;
        row.label = "theory:" + spec.label;
        row.mean_loss = *value;
        row.theory = true;
        result.rows.push_back(std::move(row));
    }
}

}  // namespace

const ResultRow& AggregateResult::find(const std::string& label, double sweep_value) const {
    for (const auto& row : rows)
        if (row.label == label && row.sweep_value == sweep_value) return row;
    throw ConfigError("no result row for '" + label + "'");
}

const ResultRow& AggregateResult::find(const std::string& label) const {
    for (const auto& row : rows)
        if (row.label == label) return row;
    throw ConfigError("no result row for '" + label + "'");
}

AggregateResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    AggregateResult result;
    result.sweep_variable = config.sweep ? to_string(config.sweep->variable) : "n";

    for (const auto& point : sweep_points(config)) {
        const PointSetup setup = make_setup(config, point);
        const std::size_t estimators = setup.estimators.size();
        const std::size_t trials = config.trials;
        // trial-major so each trial writes one contiguous slot
        std::vector<double> losses(trials * estimators);
        const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
            run_trial(setup, static_cast<std::size_t>(t),
                      std::span<double>(losses).subspan(static_cast<std::size_t>(t) * estimators, estimators));
        }

        std::vector<double> column;
        column.reserve(trials);
        for (std::size_t e = 0; e < estimators; ++e) {
            column.clear();
            for (std::size_t t = 0; t < trials; ++t) {
                const double v = losses[t * estimators + e];
                if (!std::isnan(v)) column.push_back(v);
            }
            ResultRow row;
            row.sweep_value = point.value;
            row.label = setup.estimators[e].label;
            row.trials = column.size();
            row.failures = trials - column.size();
            if (!column.empty()) {
                const double count = static_cast<double>(column.size());
                row.mean_loss = pairwise_sum(column) / count;
                if (column.size() > 1) {
                    for (double& v : column) v = (v - row.mean_loss) * (v - row.mean_loss);
                    row.standard_error = std::sqrt(pairwise_sum(column) / (count - 1.0) / count);
                }
            } else {
                row.mean_loss = std::numeric_limits<double>::quiet_NaN();
            }
            result.rows.push_back(std::move(row));
        }
        if (config.theory_overlay) append_theory_rows(setup, point.value, result);
    }
    return result;
}

AggregateResult run_experiment_reference(const ExperimentConfig& config) {
    validate(config);
    AggregateResult result;
    result.sweep_variable = config.sweep ? to_string(config.sweep->variable) : "n";

    for (const auto& point : sweep_points(config)) {
        const PointSetup setup = make_setup(config, point);
        const std::size_t estimators = setup.estimators.size();
        std::vector<double> sum(estimators, 0.0), sum_sq(estimators, 0.0);
        std::vector<std::size_t> ok(estimators, 0);
        std::vector<double> losses(estimators);
        for (std::size_t t = 0; t < config.trials; ++t) {
            run_trial(setup, t, losses);
            for (std::size_t e = 0; e < estimators; ++e) {
                if (std::isnan(losses[e])) continue;
                sum[e] += losses[e];
                sum_sq[e] += losses[e] * losses[e];
                ++ok[e];
            }
        }
        for (std::size_t e = 0; e < estimators; ++e) {
            ResultRow row;
            row.sweep_value = point.value;
            row.label = setup.estimators[e].label;
            row.trials = ok[e];
            row.failures = config.trials - ok[e];
            const double count = static_cast<double>(ok[e]);
            row.mean_loss = ok[e] ? sum[e] / count : std::numeric_limits<double>::quiet_NaN();
            if (ok[e] > 1) {
                const double var = std::max(0.0, (sum_sq[e] - count * row.mean_loss * row.mean_loss) / (count - 1.0));
                row.standard_error = std::sqrt(var / count);
            }
            result.rows.push_back(std::move(row));
        }
        if (config.theory_overlay) append_theory_rows(setup, point.value, result);
    }
    return result;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv(std::ostream& out, const AggregateResult& result, const std::vector<std::string>& header_lines) {
    for (const auto& line : header_lines) out << "# " << line << '\n';
    out << result.sweep_variable << ",label,mean_loss,se\n";
    for (const auto& row : result.rows)
        out << format_real(row.sweep_value) << ',' << row.label << ',' << format_real(row.mean_loss) << ','
            << format_real(row.standard_error) << '\n';
}

}  // namespace cjs
