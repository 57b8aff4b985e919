#ifndef CJS_CONFIG_HPP
#define CJS_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cjs/experiment.hpp"
#include "cjs/theta.hpp"

namespace cjs {

// JSON mirrors ExperimentConfig field for field; unknown keys are rejected.
//
// {
//   "n": 1000, "sigma": 1.0, "trials": 1000, "seed": 7,
//   "delta": "default" | 0.15,
//   "estimators": ["js+", "lindley+", "js2", "hybrid"],
//   "theta": {"kind": "clustered", "centers": [1, -1], "widths": [0.5, 0.5],
//             "fractions": [0.5, 0.5], "tau": 2.0, "rho": 1.0},
//   "sweep": {"variable": "tau", "values": [0.5, 1.0]}
//            | {"variable": "tau", "start": 0, "stop": 5, "step": 0.25},
//   "theory_overlay": true
// }

ThetaSpec theta_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ThetaSpec& spec);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

/// Reads and parses a JSON file. Throws IoError / ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Observation values from a single-column CSV (optional non-numeric header,
/// '#' comments) or a JSON array. Throws IoError / ConfigError.
std::vector<double> read_vector_file(const std::filesystem::path& path);

/// Inclusive grid start, start+step, ... <= stop (+ tiny slack).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace cjs

#endif  // CJS_CONFIG_HPP
