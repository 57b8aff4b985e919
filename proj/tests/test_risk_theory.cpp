#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cjs/numeric.hpp"
#include "cjs/risk_theory.hpp"

using namespace cjs;

namespace {

// Composite Simpson on the Gaussian density over [x, x + 40].
double q_by_integration(double x) {
    const int m = 200000;
    const double h = 40.0 / m;
    auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
    double s = phi(x) + phi(x + 40.0);
    for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * phi(x + k * h);
    return s * h / 3.0;
}

std::vector<double> two_valued(std::size_t n, double tau, double rho) {
    const auto n1 = static_cast<std::size_t>(std::floor(n * rho / (1.0 + rho)));
    std::vector<double> v(n, -rho * tau);
    for (std::size_t i = 0; i < n1; ++i) v[i] = tau;
    return v;
}

}  // namespace

TEST_CASE("q function") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(40.0) < 1e-300);
    CHECK(q_function(1.96) == doctest::Approx(q_by_integration(1.96)).epsilon(1e-9));
    CHECK(std::abs(q_function(1.96) - 0.0249978951) < 1e-6);
    CHECK(q_function(-1.3) + q_function(1.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q_complement(-7.0) == doctest::Approx(q_function(7.0)).epsilon(1e-12));
    CHECK(q_complement(0.4) == doctest::Approx(1.0 - q_function(0.4)).epsilon(1e-15));
}

TEST_CASE("theta vector") {
    CHECK_THROWS_AS(ThetaVector({}), ConfigError);
    CHECK_THROWS_AS(ThetaVector({1.0, NAN}), ConfigError);
    CHECK(ThetaVector({1.0, 2.0, 6.0}).mean() == 3.0);
}

TEST_CASE("two-cluster constants on homogeneous theta") {
    for (double c : {0.0, 2.5, -7.0}) {
        const auto k = theory_two_cluster(ThetaVector(std::vector<double>(9, c)), 1.0);
        CHECK(k.c[0] == doctest::Approx(c));
        CHECK(k.c[1] == doctest::Approx(c));
        CHECK(k.beta == doctest::Approx(0.0));
        CHECK(k.alpha == doctest::Approx(0.0));
        CHECK(k.rho == doctest::Approx(0.0));
        CHECK(k.gamma == doctest::Approx(c * c));
    }
}

TEST_CASE("two-cluster beta vanishes for well separated two-valued theta") {
    const auto k = theory_two_cluster(ThetaVector(two_valued(1000, 20.0, 0.5)), 1.0);
    CHECK(k.beta < 1e-6);
    CHECK(k.c[0] == doctest::Approx(20.0).epsilon(1e-6));
    CHECK(k.c[1] == doctest::Approx(-10.0).epsilon(1e-6));
}

TEST_CASE("L-cluster with mu = mean reproduces the two-cluster constants") {
    const ThetaVector theta({0.3, -1.1, 2.4, 0.0, 5.0, -0.7, 1.9});
    const auto two = theory_two_cluster(theta, 0.8);
    const std::vector<double> mu{theta.mean()};
    const auto gen = theory_L_cluster(theta, 0.8, mu);
    CHECK(gen.beta == doctest::Approx(two.beta).epsilon(1e-12));
    CHECK(gen.alpha == doctest::Approx(two.alpha).epsilon(1e-12));
    CHECK(gen.c[0] == doctest::Approx(two.c[0]).epsilon(1e-12));
    CHECK(gen.c[1] == doctest::Approx(two.c[1]).epsilon(1e-12));
}

TEST_CASE("L-cluster beta vanishes for homogeneous theta and any separators") {
    const ThetaVector theta(std::vector<double>(6, 1.7));
    for (const auto& mu : {std::vector<double>{3.0, 1.7, 0.0}, std::vector<double>{100.0, -4.0}}) {
        const auto k = theory_L_cluster(theta, 1.0, mu);
        CHECK(std::abs(k.beta) < 1e-12);
        for (std::size_t j = 0; j < k.c.size(); ++j)
            if (!k.dropped[j]) CHECK(k.c[j] == doctest::Approx(1.7));
    }
}

TEST_CASE("four-valued theta with refined separators drives the four-cluster beta to 0") {
    std::vector<double> v;
    const double tau = 30.0, rho = 0.5;
    for (double level : {tau, rho * tau, -rho * tau, -tau}) v.insert(v.end(), 250, level);
    const ThetaVector theta(v);
    const auto mu = separator_limits_for(theta, 1.0, 4);
    REQUIRE(mu.size() == 3);
    const auto k = theory_L_cluster(theta, 1.0, mu);
    CHECK(k.beta < 1e-3);
    CHECK(asymptotic_loss(LossKind::cluster, k, 1.0) < 1e-3);
}

TEST_CASE("mass-free clusters are dropped") {
    const ThetaVector theta({0.0, 0.1, -0.2});
    const auto k = theory_L_cluster(theta, 0.01, std::vector<double>{500.0, 0.0});
    CHECK(k.dropped[0]);
    CHECK_FALSE(k.dropped[1]);
    CHECK(std::isfinite(k.beta));
    CHECK_THROWS_AS(theory_L_cluster(theta, 1.0, std::vector<double>{0.0, 1.0}), ConfigError);
}

TEST_CASE("asymptotic loss substitutions") {
    TheoryConstants k;
    k.rho = 1.0;
    CHECK(asymptotic_loss(LossKind::lindley_positive, k, 1.0) == doctest::Approx(0.5));
    k.gamma = 0.0;
    CHECK(asymptotic_loss(LossKind::js_positive, k, 1.0) == 0.0);
    k.beta = 2.0;
    k.alpha = 2.0;
    CHECK(asymptotic_loss(LossKind::cluster, k, 1.0) == doctest::Approx(2.0 / 3.0));
    k.alpha = -0.5;  // alpha + sigma^2 < sigma^2: g floors it
    CHECK(asymptotic_loss(LossKind::cluster, k, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("scale consistency") {
    const std::vector<double> base{0.4, -1.3, 2.0, 0.9, -0.1};
    const double t = 3.0;
    std::vector<double> scaled(base);
    for (double& v : scaled) v *= t;
    const auto a = theory_two_cluster(ThetaVector(base), 0.7);
    const auto b = theory_two_cluster(ThetaVector(scaled), 0.7 * t);
    CHECK(b.beta == doctest::Approx(t * t * a.beta).epsilon(1e-12));
    CHECK(b.alpha == doctest::Approx(t * t * a.alpha).epsilon(1e-12));
    CHECK(b.gamma == doctest::Approx(t * t * a.gamma).epsilon(1e-12));
    CHECK(b.rho == doctest::Approx(t * t * a.rho).epsilon(1e-12));
}

TEST_CASE("exact js risk by Monte Carlo") {
    SUBCASE("origin: n s^2 - (n-2)^2 s^4 E[1/chi2_10] = 10 - 64/8") {
        const auto r = js_exact_risk_mc(ThetaVector(std::vector<double>(10, 0.0)), 1.0, 100000, 3);
        CHECK(std::abs(r.value - 2.0) < 3.0 * r.standard_error);
        CHECK(r.standard_error < 0.02);
    }
    SUBCASE("far from the origin the risk approaches n sigma^2") {
        const auto r = js_exact_risk_mc(ThetaVector(std::vector<double>(10, 50.0)), 1.0, 2000, 4);
        CHECK(r.value == doctest::Approx(10.0).epsilon(0.01));
    }
    SUBCASE("below n sigma^2 and deterministic") {
        const ThetaVector theta({1.0, -2.0, 0.5, 0.0});
        const auto a = js_exact_risk_mc(theta, 1.0, 5000, 9);
        const auto b = js_exact_risk_mc(theta, 1.0, 5000, 9);
        CHECK(a.value < 4.0);
        CHECK(a.value == b.value);
        CHECK_THROWS_AS(js_exact_risk_mc(ThetaVector({1.0, 2.0}), 1.0, 10, 1), DimensionError);
    }
}
