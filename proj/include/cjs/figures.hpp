#ifndef CJS_FIGURES_HPP
#define CJS_FIGURES_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cjs/experiment.hpp"

namespace cjs {

/// Desk-scale knobs shared by every figure.
struct FigureOverrides {
    std::optional<std::size_t> trials;  // default 1000 per sweep point
    std::uint64_t seed = 20170411;
    std::optional<double> tau_step;     // default 0.25
    RunOptions run;
};

/// Labels accepted by emit_figure_data.
const std::vector<std::string>& figure_names();

/// Runs every panel of a figure and writes one CSV per panel into `outdir`
/// (created if missing). Returns the written paths in panel order.
///   fig1  JS / Lindley and positive parts, n = 10, vs |theta|
///   fig2  two-cluster limit min(beta, beta s^2/(alpha+s^2)) vs tau (theory)
///   fig3  four-cluster limit vs tau (theory)
///   fig4  two clusters at +-tau, several n
///   fig5  four arrangements at n = 1000
///   fig6  deterministic limits for the fig5 arrangements (theory)
///   fig7  convergence in n against the limits
///   fig8  four clusters, four-hybrid
std::vector<std::filesystem::path> emit_figure_data(const std::string& figure, const FigureOverrides& overrides,
                                                    const std::filesystem::path& outdir);

/// Deterministic limit rows ("theory:<label>") for each sweep point of config.
AggregateResult theory_sweep(const ExperimentConfig& config);

}  // namespace cjs

#endif  // CJS_FIGURES_HPP
