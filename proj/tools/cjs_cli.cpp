// cjs: command-line front end for the cluster James-Stein library.
//
//   cjs estimate --input y.csv --sigma 1 --estimator js2
//   cjs simulate --config exp.json --out results.csv
//   cjs theory --theta theta.json --n 1000 --L 1,2,4
//   cjs figures --figure all --outdir figs
//   cjs check-concentration --statistic split:1
//
// Exit codes: 0 ok, 1 bad configuration, 2 numeric failure, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cjs/cluster_engine.hpp"
#include "cjs/concentration.hpp"
#include "cjs/config.hpp"
#include "cjs/core_estimators.hpp"
#include "cjs/experiment.hpp"
#include "cjs/figures.hpp"
#include "cjs/hybrid_selector.hpp"
#include "cjs/numeric.hpp"
#include "cjs/risk_theory.hpp"
#include "cjs/rng.hpp"

using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumeric = 2, kIo = 3 };

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw cjs::NumericError(std::string(what) + " contains a non-finite value");
}

// ---- estimate ----

struct EstimateArgs {
    std::string input;
    double sigma = 1.0;
    std::string estimator = "js2";
    std::optional<double> delta;
};

json run_estimate(const EstimateArgs& a) {
    const cjs::ObservationVector y(cjs::read_vector_file(a.input), a.sigma);
    const auto spec = cjs::parse_estimator(a.estimator);
    const double delta = a.delta.value_or(cjs::default_delta(y.size()));
    if (!(delta > 0.0)) throw cjs::ConfigError("--delta must be positive");

    json out{{"estimator", spec.label}, {"n", y.size()}, {"sigma", a.sigma}};
    cjs::EstimatorOutput result;
    if (spec.kind == cjs::EstimatorKind::cluster && spec.clusters >= 2) {
        const auto fit = cjs::fit_cluster_js(y, spec.clusters, delta);
        const auto loss = cjs::loss_estimate_cluster(y, fit);
        out["delta"] = delta;
        out["separators"] = std::vector<double>(fit.partition.separators().begin(), fit.partition.separators().end());
        out["cluster_counts"] = fit.assignment.counts;
        out["attractors"] = fit.attractors.attractors;
        out["boundary_counts"] = fit.attractors.boundary_counts;
        out["empty_clusters"] = fit.attractors.any_empty();
        out["loss_estimate"] = loss.value;
        result = fit.output;
    } else if (spec.kind == cjs::EstimatorKind::hybrid) {
        const auto h = cjs::select_hybrid(y, spec.candidates, delta);
        out["delta"] = delta;
        out["chosen"] = h.selection.chosen;
        json est = json::object();
        for (const auto& [l, v] : h.estimates.per_candidate) est[std::to_string(l)] = v;
        out["loss_estimates"] = est;
        out["ineligible"] = h.estimates.ineligible;
        result = h.output;
    } else {
        result = cjs::apply_estimator(spec, y, delta);
        if (spec.kind == cjs::EstimatorKind::lindley_positive || spec.kind == cjs::EstimatorKind::cluster)
            out["loss_estimate"] = cjs::loss_estimate_lindley(y);
    }
    require_finite(result.estimate, "estimate");
    out["shrinkage_factor"] = result.shrinkage_factor;
    out["attracting_vector"] = result.attracting_vector;
    out["estimate"] = result.estimate;
    return out;
}

// ---- simulate ----

struct SimulateArgs {
    std::string config;
    std::string out;
    int threads = 0;
};

void run_simulate(const SimulateArgs& a) {
    const auto config = cjs::experiment_config_from_json(cjs::read_json_file(a.config));
    const auto result = cjs::run_experiment(config, cjs::RunOptions{a.threads});
    for (const auto& row : result.rows)
        if (!row.theory && row.trials == 0)
            throw cjs::NumericError("estimator '" + row.label + "' failed on every trial");

    const std::vector<std::string> header{"config: " + cjs::to_json(config).dump(),
                                          std::string("generator: ") + cjs::kGeneratorDescription,
                                          "theta: drawn once per sweep point and held fixed across trials"};
    if (a.out.empty() || a.out == "-") {
        cjs::write_csv(std::cout, result, header);
        return;
    }
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw cjs::IoError("cannot write '" + a.out + "'");
    cjs::write_csv(file, result, header);
    if (!file) throw cjs::IoError("write failed for '" + a.out + "'");
}

// ---- theory ----

struct TheoryArgs {
    std::string theta_file;
    std::string input;
    std::size_t n = 1000;
    double sigma = 1.0;
    std::uint64_t seed = 1;
    std::vector<std::size_t> clusters{1, 2, 4};
};

json constants_json(const cjs::TheoryConstants& k) {
    std::vector<int> dropped(k.dropped.begin(), k.dropped.end());
    return json{{"beta", k.beta}, {"alpha", k.alpha}, {"c", k.c}, {"mu", k.mu}, {"dropped", dropped}};
}

json run_theory(const TheoryArgs& a) {
    if (!(a.sigma > 0.0)) throw cjs::ConfigError("--sigma must be positive");
    std::vector<double> values;
    if (!a.input.empty()) {
        values = cjs::read_vector_file(a.input);
    } else {
        const auto spec = cjs::theta_spec_from_json(cjs::read_json_file(a.theta_file));
        const auto drawn = cjs::generate_theta(spec, a.n, a.seed);
        values.assign(drawn.values().begin(), drawn.values().end());
    }
    const cjs::ThetaVector theta(std::move(values));
    const auto two = cjs::theory_two_cluster(theta, a.sigma);

    json out{{"n", theta.size()},
             {"sigma", a.sigma},
             {"gamma", two.gamma},
             {"rho", two.rho},
             {"loss_js_positive", cjs::asymptotic_loss(cjs::LossKind::js_positive, two, a.sigma)},
             {"loss_lindley_positive", cjs::asymptotic_loss(cjs::LossKind::lindley_positive, two, a.sigma)}};
    json per_l = json::array();
    for (std::size_t l : a.clusters) {
        if (l < 2) continue;
        const auto mu = cjs::separator_limits_for(theta, a.sigma, l);
        const auto k = cjs::theory_L_cluster(theta, a.sigma, mu);
        json entry = constants_json(k);
        entry["L"] = l;
        entry["loss"] = cjs::asymptotic_loss(cjs::LossKind::cluster, k, a.sigma);
        per_l.push_back(std::move(entry));
    }
    out["clusters"] = std::move(per_l);
    return out;
}

// ---- figures ----

struct FiguresArgs {
    std::string figure = "all";
    std::string outdir = "figures";
    std::optional<std::size_t> trials;
    std::uint64_t seed = cjs::FigureOverrides{}.seed;
    std::optional<double> tau_step;
    int threads = 0;
};

void run_figures(const FiguresArgs& a) {
    cjs::FigureOverrides ov;
    ov.trials = a.trials;
    ov.seed = a.seed;
    ov.tau_step = a.tau_step;
    ov.run.threads = a.threads;
    std::vector<std::string> figures;
    if (a.figure == "all")
        figures = cjs::figure_names();
    else
        figures.push_back(a.figure);
    for (const auto& f : figures)
        for (const auto& path : cjs::emit_figure_data(f, ov, a.outdir)) std::cout << path.string() << '\n';
}

// ---- check-concentration ----

struct ConcentrationArgs {
    std::string statistic = "split:1";
    std::string theta_file;
    std::vector<std::size_t> n_grid{100, 1000, 10000};
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    double sigma = 1.0;
    std::optional<double> delta;
    double epsilon = 0.03;
};

bool run_concentration(const ConcentrationArgs& a) {
    cjs::ConcentrationConfig config;
    config.statistic = cjs::parse_statistic(a.statistic);
    if (!a.theta_file.empty()) {
        config.theta = cjs::theta_spec_from_json(cjs::read_json_file(a.theta_file));
    } else {
        config.theta.kind = cjs::ThetaKind::two_point;  // tau = 0: theta = 0
        config.theta.tau = 0.0;
    }
    config.n_grid = a.n_grid;
    config.trials = a.trials;
    config.seed = a.seed;
    config.sigma = a.sigma;
    config.delta = a.delta;
    config.epsilon = a.epsilon;
    const auto report = cjs::check_concentration(config);
    cjs::write_csv(std::cout, report);
    return report.trend_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cluster-based James-Stein shrinkage estimators"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Shrink one observation vector and print diagnostics as JSON");
    estimate->add_option("-i,--input", est.input, "Single-column CSV or JSON array")->required()->check(CLI::ExistingFile);
    estimate->add_option("-s,--sigma", est.sigma, "Noise standard deviation")->required();
    estimate->add_option("-e,--estimator", est.estimator, "ml, js, js+, lindley, lindley+, js<L>, hybrid, hybrid<L>")
        ->capture_default_str();
    estimate->add_option("--delta", est.delta, "Window half-width (default 5/sqrt(n))");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a JSON config");
    simulate->add_option("-c,--config", sim.config, "Experiment JSON")->required();
    simulate->add_option("-o,--out", sim.out, "CSV output path ('-' for stdout)");
    simulate->add_option("-t,--threads", sim.threads, "Worker threads (0: OpenMP default)");

    TheoryArgs th;
    auto* theory = app.add_subcommand("theory", "Print deterministic loss limits for a theta");
    auto* theta_opt = theory->add_option("--theta", th.theta_file, "Theta spec JSON");
    auto* input_opt = theory->add_option("-i,--input", th.input, "Explicit theta as CSV or JSON array");
    theta_opt->excludes(input_opt);
    theory->add_option("-n,--n", th.n, "Dimension for --theta")->capture_default_str();
    theory->add_option("-s,--sigma", th.sigma)->capture_default_str();
    theory->add_option("--seed", th.seed, "Seed for random theta placements")->capture_default_str();
    theory->add_option("-L,--L", th.clusters, "Cluster counts")->delimiter(',')->capture_default_str();

    FiguresArgs fig;
    auto* figures = app.add_subcommand("figures", "Write figure CSVs");
    figures->add_option("-f,--figure", fig.figure, "fig1..fig8 or all")->capture_default_str();
    figures->add_option("-o,--outdir", fig.outdir)->capture_default_str();
    figures->add_option("--trials", fig.trials, "Trials per sweep point (default 1000)");
    figures->add_option("--seed", fig.seed)->capture_default_str();
    figures->add_option("--tau-step", fig.tau_step, "tau grid step (default 0.25)");
    figures->add_option("-t,--threads", fig.threads);

    ConcentrationArgs conc;
    auto* concentration = app.add_subcommand("check-concentration", "Empirical concentration of the attractor statistics");
    concentration->add_option("--statistic", conc.statistic, "split:1..6 or window")->capture_default_str();
    concentration->add_option("--theta", conc.theta_file, "Theta spec JSON (default theta = 0)");
    concentration->add_option("--n-grid", conc.n_grid)->delimiter(',')->capture_default_str();
    concentration->add_option("--trials", conc.trials)->capture_default_str();
    concentration->add_option("--seed", conc.seed)->capture_default_str();
    concentration->add_option("-s,--sigma", conc.sigma)->capture_default_str();
    concentration->add_option("--delta", conc.delta, "Window half-width (default 5/sqrt(n))");
    concentration->add_option("--epsilon", conc.epsilon)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (estimate->parsed()) {
            std::cout << run_estimate(est).dump(2) << '\n';
        } else if (simulate->parsed()) {
            run_simulate(sim);
        } else if (theory->parsed()) {
            if (th.theta_file.empty() && th.input.empty()) throw cjs::ConfigError("theory needs --theta or --input");
            std::cout << run_theory(th).dump(2) << '\n';
        } else if (figures->parsed()) {
            run_figures(fig);
        } else if (concentration->parsed()) {
            if (!run_concentration(conc)) std::cerr << "warning: deviation did not shrink along the n grid\n";
        }
    } catch (const cjs::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const cjs::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::invalid_argument& e) {  // ConfigError and DimensionError
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
    return kOk;
}
