#ifndef CJS_THETA_HPP
#define CJS_THETA_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cjs/rng.hpp"
#include "cjs/risk_theory.hpp"

namespace cjs {

enum class ThetaKind { two_point, clustered, uniform };

/// Ground-truth structure used by the simulation harness.
///
/// two_point: floor(n rho/(1+rho)) entries at tau, the rest at -rho tau.
/// clustered: cluster k is centred at centers[k]*tau with width widths[k]*tau;
///            members are placed uniformly at random inside it.
/// uniform:   n i.i.d. draws from U[-tau, tau].
struct ThetaSpec {
    ThetaKind kind = ThetaKind::two_point;
    std::vector<double> centers;
    std::vector<double> widths;
    std::vector<double> fractions;  // proportions summing to 1, or counts summing to n
    double tau = 1.0;
    double rho = 1.0;
};

std::string to_string(ThetaKind kind);
ThetaKind theta_kind_from_string(const std::string& name);

/// Per-cluster member counts for a clustered spec (largest-remainder rounding
/// when fractions are proportions). Throws ConfigError if infeasible.
std::vector<std::size_t> cluster_counts(const ThetaSpec& spec, std::size_t n);

/// Throws ConfigError if the spec cannot produce an n-vector.
void validate(const ThetaSpec& spec, std::size_t n);

ThetaVector generate_theta(const ThetaSpec& spec, std::size_t n, Rng& rng);

/// Convenience overload drawing from the harness's dedicated theta stream.
ThetaVector generate_theta(const ThetaSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace cjs

#endif  // CJS_THETA_HPP
