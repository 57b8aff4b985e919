#ifndef CJS_EXPERIMENT_HPP
#define CJS_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cjs/core_estimators.hpp"
#include "cjs/risk_theory.hpp"
#include "cjs/theta.hpp"

namespace cjs {

enum class EstimatorKind { ml, js, js_positive, lindley, lindley_positive, cluster, hybrid };

/// A named estimator as it appears in configs and CSV output.
///   ml, js, js+, lindley, lindley+, js<L> (L a power of two; js1 = lindley+),
///   hybrid (candidates {1,2}), hybrid<L> (candidates {1,2,...,L}).
struct EstimatorSpec {
    std::string label;
    EstimatorKind kind = EstimatorKind::ml;
    std::size_t clusters = 1;                // cluster
    std::vector<std::size_t> candidates;     // hybrid
};

/// Throws ConfigError on unknown labels.
EstimatorSpec parse_estimator(const std::string& label);

/// Applies the estimator to one observation.
EstimatorOutput apply_estimator(const EstimatorSpec& spec, const ObservationVector& y, double delta);

/// Deterministic limit of the estimator's normalized loss for this theta,
/// or nullopt where no closed form is available (plain js/lindley at small n).
std::optional<double> theory_loss(const EstimatorSpec& spec, const ThetaVector& theta, double sigma);

enum class SweepVariable { tau, n, theta_norm };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& name);

struct Sweep {
    SweepVariable variable = SweepVariable::tau;
    std::vector<double> values;
};

struct ExperimentConfig {
    std::size_t n = 1000;
    double sigma = 1.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::optional<double> delta;  // nullopt: 5/sqrt(n)
    std::vector<std::string> estimators{"js+", "lindley+", "js2", "hybrid"};
    ThetaSpec theta;
    std::optional<Sweep> sweep;
    bool theory_overlay = true;
};

/// Throws ConfigError if any field is out of range.
void validate(const ExperimentConfig& config);

/// delta after resolving the default rule for dimension n.
double resolve_delta(const ExperimentConfig& config, std::size_t n);

struct ResultRow {
    double sweep_value = 0.0;
    std::string label;
    double mean_loss = 0.0;
    double standard_error = 0.0;
    std::size_t trials = 0;    // successful trials; 0 for theory rows
    std::size_t failures = 0;  // trials where the estimator threw
    bool theory = false;
};

struct AggregateResult {
    std::string sweep_variable;
    std::vector<ResultRow> rows;

    /// First Monte Carlo row with this label at this sweep value.
    const ResultRow& find(const std::string& label, double sweep_value) const;
    const ResultRow& find(const std::string& label) const;
};

struct RunOptions {
    int threads = 0;  // 0: OpenMP default
};

/// Monte Carlo run. Trials execute in parallel; each trial draws its noise
/// from its own counter-derived stream and the per-estimator reduction is
/// pairwise over trial index, so the result is bitwise independent of the
/// thread count. Theta is drawn once per sweep point and held fixed.
AggregateResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Serial reference: the same trials evaluated in one loop with running
/// sums. Kept to cross-check run_experiment.
AggregateResult run_experiment_reference(const ExperimentConfig& config);

/// Configuration and theta realised at one sweep point.
struct SweepPoint {
    double value = 0.0;
    std::size_t n = 0;
    ThetaSpec theta_spec;
    std::uint64_t seed = 0;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

/// Writes `# key: value` header lines followed by the CSV body
/// `<sweep>,label,mean_loss,se` with 9 significant digits.
void write_csv(std::ostream& out, const AggregateResult& result, const std::vector<std::string>& header_lines);

/// printf("%.9g").
std::string format_real(double v);

}  // namespace cjs

#endif  // CJS_EXPERIMENT_HPP
