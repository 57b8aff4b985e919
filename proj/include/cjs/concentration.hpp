#ifndef CJS_CONCENTRATION_HPP
#define CJS_CONCENTRATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cjs/theta.hpp"

namespace cjs {

/// Empirical statistics whose concentration underpins the attractor
/// construction. "split" terms compare y with its mean (all normalized by 1/n):
///   1: sum y_i 1{y_i > ybar}        -> sum theta_i Q(.) + sigma/sqrt(2pi) sum e_i
///   2: sum y_i 1{y_i <= ybar}       -> sum theta_i Q^c(.) - sigma/sqrt(2pi) sum e_i
///   3: sum theta_i 1{y_i > ybar}    -> sum theta_i Q(.)
///   4: sum theta_i 1{y_i <= ybar}   -> sum theta_i Q^c(.)
///   5: sum 1{y_i > ybar}            -> sum Q(.)
///   6: sum 1{y_i <= ybar}           -> sum Q^c(.)
/// with Q(.) = Q((theta_bar - theta_i)/sigma) and e_i = exp(-(theta_bar - theta_i)^2 / 2 sigma^2).
/// The window statistic sigma^2/(2 n delta) #{|y_i - ybar| <= delta}
/// concentrates near sigma/(n sqrt(2pi)) sum e_i up to an O(delta) bias.
struct ConcentrationStatistic {
    enum class Family { split, window } family = Family::split;
    int term = 1;  // 1..6 for split, ignored for window

    std::string name() const;
};

/// "split:<k>" or "window".
ConcentrationStatistic parse_statistic(const std::string& name);

/// Value of the statistic on one observation.
double empirical_statistic(const ConcentrationStatistic& stat, std::span<const double> y,
                           std::span<const double> theta, double sigma, double delta);

/// The deterministic value the statistic concentrates around.
double predicted_statistic(const ConcentrationStatistic& stat, std::span<const double> theta, double sigma);

struct ConcentrationRow {
    std::size_t n = 0;
    double delta = 0.0;
    double predicted = 0.0;
    double mean_empirical = 0.0;
    double median_abs_deviation = 0.0;
    double max_abs_deviation = 0.0;
    double fraction_within = 0.0;  // share of trials with |stat - predicted| <= epsilon
};

struct ConcentrationReport {
    std::string statistic;
    double epsilon = 0.0;
    std::vector<ConcentrationRow> rows;
    bool trend_ok = false;  // median deviation strictly decreasing along the grid (or exactly 0 throughout)
};

struct ConcentrationConfig {
    ConcentrationStatistic statistic;
    ThetaSpec theta;
    double sigma = 1.0;
    std::optional<double> delta;  // nullopt: 5/sqrt(n)
    std::vector<std::size_t> n_grid{100, 1000, 10000};
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    double epsilon = 0.03;
};

ConcentrationReport check_concentration(const ConcentrationConfig& config);

void write_csv(std::ostream& out, const ConcentrationReport& report);

}  // namespace cjs

#endif  // CJS_CONCENTRATION_HPP
