#include "cjs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cjs/numeric.hpp"

namespace cjs {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
T get_as(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

std::vector<double> get_reals(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return {};
    return get_as<std::vector<double>>(j, key, where);
}

std::size_t get_count(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(where + "." + key + " must be a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace

ThetaSpec theta_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "centers", "widths", "fractions", "tau", "rho"}, "theta");
    ThetaSpec spec;
    spec.kind = theta_kind_from_string(get_as<std::string>(j, "kind", "theta"));
    spec.centers = get_reals(j, "centers", "theta");
    spec.widths = get_reals(j, "widths", "theta");
    spec.fractions = get_reals(j, "fractions", "theta");
    if (j.contains("tau")) spec.tau = get_as<double>(j, "tau", "theta");
    if (j.contains("rho")) spec.rho = get_as<double>(j, "rho", "theta");
    return spec;
}

json to_json(const ThetaSpec& spec) {
    json j{{"kind", to_string(spec.kind)}, {"tau", spec.tau}, {"rho", spec.rho}};
    if (spec.kind == ThetaKind::clustered) {
        j["centers"] = spec.centers;
        j["widths"] = spec.widths;
        j["fractions"] = spec.fractions;
    }
    return j;
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
        throw ConfigError("grid needs finite start <= stop and step > 0");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
    return grid;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    const std::string where = "config";
    reject_unknown_keys(j, {"n", "sigma", "trials", "seed", "delta", "estimators", "theta", "sweep", "theory_overlay"},
                        where);
    ExperimentConfig config;
    if (j.contains("n")) config.n = get_count(j, "n", where);
    if (j.contains("sigma")) config.sigma = get_as<double>(j, "sigma", where);
    if (j.contains("trials")) config.trials = get_count(j, "trials", where);
    if (j.contains("seed")) config.seed = get_as<std::uint64_t>(j, "seed", where);
    if (j.contains("delta")) {
        const json& d = j.at("delta");
        if (d.is_string()) {
            if (d.get<std::string>() != "default")
                throw ConfigError("config.delta must be a number or \"default\"");
        } else if (d.is_number()) {
            config.delta = d.get<double>();
        } else {
            throw ConfigError("config.delta must be a number or \"default\"");
        }
    }
    if (j.contains("estimators")) config.estimators = get_as<std::vector<std::string>>(j, "estimators", where);
    if (!j.contains("theta")) throw ConfigError("config.theta is required");
    config.theta = theta_spec_from_json(j.at("theta"));
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown_keys(s, {"variable", "values", "start", "stop", "step"}, "sweep");
        Sweep sweep;
        sweep.variable = sweep_variable_from_string(get_as<std::string>(s, "variable", "sweep"));
        if (s.contains("values")) {
            if (s.contains("start") || s.contains("stop") || s.contains("step"))
                throw ConfigError("sweep takes either values or start/stop/step");
            sweep.values = get_as<std::vector<double>>(s, "values", "sweep");
        } else {
            sweep.values = make_grid(get_as<double>(s, "start", "sweep"), get_as<double>(s, "stop", "sweep"),
                                     get_as<double>(s, "step", "sweep"));
        }
        config.sweep = std::move(sweep);
    }
    if (j.contains("theory_overlay")) config.theory_overlay = get_as<bool>(j, "theory_overlay", where);
    validate(config);
    return config;
}

json to_json(const ExperimentConfig& config) {
    json j{{"n", config.n},
           {"sigma", config.sigma},
           {"trials", config.trials},
           {"seed", config.seed},
           {"estimators", config.estimators},
           {"theta", to_json(config.theta)},
           {"theory_overlay", config.theory_overlay}};
    if (config.delta)
        j["delta"] = *config.delta;
    else
        j["delta"] = "default";
    if (config.sweep) j["sweep"] = json{{"variable", to_string(config.sweep->variable)}, {"values", config.sweep->values}};
    return j;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::vector<double> read_vector_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            return json::parse(text).get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw ConfigError("'" + path.string() + "': expected a JSON array of numbers: " + e.what());
        }
    }

    std::vector<double> values;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(lines, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::string cell = line.substr(start, line.find_last_not_of(" \t") - start + 1);
        if (cell.find(',') != std::string::npos)
            throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) + ": expected a single column");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cell.size()) {
            if (header_allowed) {  // header row
                header_allowed = false;
                continue;
            }
            throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) + ": not a number");
        }
        values.push_back(v);
        header_allowed = false;
    }
    if (values.empty()) throw ConfigError("'" + path.string() + "' contains no values");
    return values;
}

}  // namespace cjs
