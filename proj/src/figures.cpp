#include "cjs/figures.hpp"

#include <fstream>
#include <functional>
#include <tuple>

#include "cjs/config.hpp"
#include "cjs/numeric.hpp"
#include "cjs/rng.hpp"

namespace cjs {

namespace {

constexpr std::size_t kDefaultFigureTrials = 1000;
constexpr double kDefaultTauStep = 0.25;

// panel seeds must not depend on the standard library's std::hash
std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Panel {
    std::string name;
    std::string description;
    std::function<AggregateResult()> run;
    std::vector<std::string> extra_header;
};

ThetaSpec clustered(std::vector<double> centers, std::vector<double> widths, std::vector<double> fractions,
                    double tau = 1.0) {
    ThetaSpec spec;
    spec.kind = ThetaKind::clustered;
    spec.centers = std::move(centers);
    spec.widths = std::move(widths);
    spec.fractions = std::move(fractions);
    spec.tau = tau;
    return spec;
}

ThetaSpec two_point(double rho) {
    ThetaSpec spec;
    spec.kind = ThetaKind::two_point;
    spec.rho = rho;
    return spec;
}

ThetaSpec uniform(double tau = 1.0) {
    ThetaSpec spec;
    spec.kind = ThetaKind::uniform;
    spec.tau = tau;
    return spec;
}

const std::vector<double> kRhoGrid{0.1, 0.25, 0.5, 1.0};

// One theory curve per rho, relabelled "theory:<label>:rho=<rho>".
AggregateResult rho_family(const std::function<ThetaSpec(double)>& make_theta, const std::string& estimator,
                           std::size_t n, const std::vector<double>& taus) {
    AggregateResult out;
    out.sweep_variable = "tau";
    for (double rho : kRhoGrid) {
        ExperimentConfig config;
        config.n = n;
        config.trials = 1;
        config.estimators = {estimator};
        config.theta = make_theta(rho);
        config.sweep = Sweep{SweepVariable::tau, taus};
        for (auto row : theory_sweep(config).rows) {
            row.label += ":rho=" + format_real(rho);
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<Panel> build_panels(const std::string& figure, const FigureOverrides& ov) {
    const std::size_t trials = ov.trials.value_or(kDefaultFigureTrials);
    const double step = ov.tau_step.value_or(kDefaultTauStep);
    const auto tau_grid = [&](double stop) { return make_grid(0.0, stop, step); };

    auto mc_panel = [&](std::string name, std::string description, ExperimentConfig config) {
        config.seed = splitmix64(ov.seed ^ fnv1a(figure + "/" + name));
        config.trials = trials;
        const RunOptions run = ov.run;
        Panel p{std::move(name), std::move(description), nullptr, {}};
        p.extra_header = {"config: " + to_json(config).dump()};
        p.run = [config, run] { return run_experiment(config, run); };
        return p;
    };
    auto theory_panel = [&](std::string name, std::string description, std::function<AggregateResult()> fn) {
        return Panel{std::move(name), std::move(description), std::move(fn), {"monte_carlo: none (deterministic limits)"}};
    };

    std::vector<Panel> panels;
    if (figure == "fig1") {
        for (const auto& [name, spec, what] :
             {std::tuple{"a", two_point(1.0), "theta_i = +-|theta|/sqrt(10), half each"},
              std::tuple{"b", clustered({1.0}, {0.0}, {1.0}), "theta_i = |theta|/sqrt(10) for all i"}}) {
            ExperimentConfig c;
            c.n = 10;
            c.estimators = {"ml", "js", "js+", "lindley", "lindley+"};
            c.theta = spec;
            c.sweep = Sweep{SweepVariable::theta_norm, make_grid(0.0, 10.0, 2.0 * step)};
            c.theory_overlay = false;
            panels.push_back(mc_panel(name, what, c));
        }
    } else if (figure == "fig2") {
        const auto taus = tau_grid(10.0);
        panels.push_back(theory_panel("a", "two values tau and -rho tau, floor(n rho/(1+rho)) at tau; n=1000",
                                      [taus] { return rho_family(two_point, "js2", 1000, taus); }));
    } else if (figure == "fig3") {
        const auto taus = tau_grid(10.0);
        panels.push_back(theory_panel("a", "four-cluster limit; two values tau and -rho tau; n=1000",
                                      [taus] { return rho_family(two_point, "js4", 1000, taus); }));
        panels.push_back(theory_panel("b", "four-cluster limit; values {tau, rho tau, -rho tau, -tau} equally; n=1000", [taus] {
            return rho_family([](double rho) { return clustered({1.0, rho, -rho, -1.0}, {0, 0, 0, 0}, {0.25, 0.25, 0.25, 0.25}); },
                              "js4", 1000, taus);
        }));
    } else if (figure == "fig4") {
        for (std::size_t n : {10, 50, 100, 1000}) {
            ExperimentConfig c;
            c.n = n;
            c.estimators = {"js+", "lindley+", "js2", "hybrid"};
            c.theta = clustered({1.0, -1.0}, {0.5, 0.5}, {0.5, 0.5});
            c.sweep = Sweep{SweepVariable::tau, tau_grid(5.0)};
            c.theory_overlay = false;
            panels.push_back(mc_panel("n" + std::to_string(n), "two clusters at +-tau, width 0.5 tau, n/2 points each", c));
        }
    } else if (figure == "fig5" || figure == "fig6") {
        const std::vector<std::tuple<std::string, ThetaSpec, std::string>> arrangements{
            {"a", clustered({0.25, -1.0}, {0.5, 0.5}, {300, 700}), "clusters at 0.25 tau (300) and -tau (700), width 0.5 tau"},
            {"b", two_point(0.25), "200 at tau, 800 at -0.25 tau"},
            {"c", clustered({1.0, -1.0}, {0.125, 0.125}, {300, 700}), "clusters at tau (300) and -tau (700), width 0.125 tau"},
            {"d", uniform(), "uniform on [-tau, tau]"}};
        for (const auto& [name, spec, what] : arrangements) {
            ExperimentConfig c;
            c.n = 1000;
            c.estimators = {"js+", "lindley+", "js2", "hybrid"};
            c.theta = spec;
            c.sweep = Sweep{SweepVariable::tau, tau_grid(5.0)};
            c.theory_overlay = false;
            Panel mc = mc_panel(name, what, c);
            if (figure == "fig5") {
                panels.push_back(std::move(mc));
            } else {
                // same seed as the fig5 panel so the theta draws coincide
                c.seed = splitmix64(ov.seed ^ fnv1a("fig5/" + name));
                panels.push_back(theory_panel(name, what, [c] { return theory_sweep(c); }));
            }
        }
    } else if (figure == "fig7") {
        const std::vector<std::tuple<std::string, ThetaSpec, std::string>> arrangements{
            {"a", clustered({2.0, -2.0}, {1.0, 1.0}, {0.5, 0.5}), "clusters at +-2, width 1, equal sizes"},
            {"b", clustered({5.0, -5.0}, {1.25, 1.25}, {0.5, 0.5}), "clusters at +-5, width 1.25, equal sizes"},
            {"c", clustered({0.5, -0.5}, {0.25, 0.25}, {0.5, 0.5}), "clusters at +-0.5, width 0.25, equal sizes"},
            {"d", uniform(2.0), "uniform on [-2, 2]"}};
        for (const auto& [name, spec, what] : arrangements) {
            ExperimentConfig c;
            c.estimators = {"lindley+", "js2", "hybrid"};
            c.theta = spec;
            c.sweep = Sweep{SweepVariable::n, {50, 100, 200, 500, 1000}};
            panels.push_back(mc_panel(name, what, c));
        }
    } else if (figure == "fig8") {
        for (const auto& [name, width] : {std::pair{"a", 0.5}, std::pair{"b", 0.25}}) {
            ExperimentConfig c;
            c.n = 1000;
            c.estimators = {"js+", "lindley+", "js2", "js4", "hybrid4"};
            c.theta = clustered({1.5, 0.9, -0.5, -1.25}, {width, width, width, width}, {0.25, 0.25, 0.25, 0.25});
            c.sweep = Sweep{SweepVariable::tau, tau_grid(5.0)};
            c.theory_overlay = false;
            panels.push_back(mc_panel(name, "four equal clusters at 1.5, 0.9, -0.5, -1.25 tau, width " + format_real(width) + " tau", c));
        }
    } else {
        throw ConfigError("unknown figure '" + figure + "'");
    }
    return panels;
}

}  // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
    return names;
}

AggregateResult theory_sweep(const ExperimentConfig& config) {
    validate(config);
    AggregateResult out;
    out.sweep_variable = config.sweep ? to_string(config.sweep->variable) : "n";
    for (const auto& point : sweep_points(config)) {
        const ThetaVector theta = generate_theta(point.theta_spec, point.n, point.seed);
        for (const auto& label : config.estimators) {
            const auto value = theory_loss(parse_estimator(label), theta, config.sigma);
            if (!value) continue;
            ResultRow row;
            row.sweep_value = point.value;
            row.label = "theory:" + label;
            row.mean_loss = *value;
            row.theory = true;
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<std::filesystem::path> emit_figure_data(const std::string& figure, const FigureOverrides& overrides,
                                                    const std::filesystem::path& outdir) {
    auto panels = build_panels(figure, overrides);
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create '" + outdir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    for (auto& panel : panels) {
        const AggregateResult result = panel.run();
        const auto path = outdir / (figure + "_" + panel.name + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        std::vector<std::string> header{"figure: " + figure + " panel " + panel.name, "arrangement: " + panel.description,
                                        "trials_per_point: " + std::to_string(overrides.trials.value_or(kDefaultFigureTrials)),
                                        "seed: " + std::to_string(overrides.seed), std::string("generator: ") + kGeneratorDescription,
                                        "theta: drawn once per sweep point and held fixed across trials"};
        header.insert(header.end(), panel.extra_header.begin(), panel.extra_header.end());
        write_csv(out, result, header);
        if (!out) throw IoError("write failed for '" + path.string() + "'");
        written.push_back(path);
    }
    return written;
}

}  // namespace cjs
