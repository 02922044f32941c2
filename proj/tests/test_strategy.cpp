#include <doctest.h>

#include <bmk/errors.hpp>
#include <bmk/market_model.hpp>
#include <bmk/prior.hpp>
#include <bmk/risk_premium.hpp>
#include <bmk/rng.hpp>
#include <bmk/strategy.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

using namespace bmk;

namespace {

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

// b0 = 5%, sigma = 20%, sigma0 = 40%, T = 1: R(0, b0) = 0.51777006821043514
constexpr double kR0 = 0.51777006821043514;

} // namespace

TEST_SUITE("strategy") {

TEST_CASE("multiplier calibration matches the closed form") {
    CHECK(lambda_for_budget(0.01, kR0) == doctest::Approx(4.11789090945501).epsilon(1e-12));
    // lambda = sqrt((e^r - 1) / (4 theta))
    for (double theta : {0.001, 0.01, 0.5}) {
        const double lam = lambda_for_budget(theta, kR0);
        CHECK(4.0 * theta * lam * lam == doctest::Approx(std::expm1(kR0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lambda_for_budget(0.0, kR0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_for_budget(-0.01, kR0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_for_budget(0.01, 0.0), degenerate_model_error);
    CHECK_THROWS_AS(lambda_for_budget(0.01, -0.1), degenerate_model_error);
}

TEST_CASE("primal value and budget line meet at the calibrated multiplier") {
    MarketModel model(1.0, 0.2, 1.0);
    CHECK(value_U0(model, kR0, 0.01) ==
          doctest::Approx(1.0823578181891003).epsilon(1e-12));
    CHECK(value_U0(model, kR0, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(value_U0(model, kR0, -1e-9), std::invalid_argument);

    Xoshiro256 rng(99);
    for (int i = 0; i < 200; ++i) {
        const double theta = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
        const double r0 = 0.01 + 2.0 * rng.uniform();
        const double lam = lambda_for_budget(theta, r0);
        // the dual envelope is tight at the calibrated multiplier
        CHECK(value_U0(model, r0, theta) ==
              doctest::Approx(lam * theta - value_V0(model, r0, lam)).epsilon(1e-10));
    }
}

TEST_CASE("expected terminal wealth interpolates the budget") {
    MarketModel model(1.0, 0.2, 1.0);
    const double lam = lambda_for_budget(0.01, kR0);
    CHECK(expected_optimal_terminal_wealth(model, kR0, lam) ==
          doctest::Approx(1.0823578181891003).epsilon(1e-12));
    CHECK_THROWS_AS(expected_optimal_terminal_wealth(model, kR0, 0.0), std::invalid_argument);
}

TEST_CASE("learning control with a constant premium reduces to the non-learning rule") {
    MarketModel model(1.0, 0.2, 1.0);
    Eigen::VectorXd b0 = scalar(0.05);
    ConstantDriftRiskPremium rp(model, b0);
    const double r0 = constant_drift_R(model, b0, 0.0);
    const double lam = nonlearning_lambda(model, b0, 0.01);
    StrategyParams params{lam, r0, model.initial_capital()};

    Xoshiro256 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double x = 0.5 + rng.uniform();
        const double t = rng.uniform();
        Eigen::VectorXd pi = bayes_control(t, x, b0, params, rp, model);
        Eigen::VectorXd pi0 = nonlearning_control(x, model, b0, lam);
        CHECK(pi(0) == doctest::Approx(pi0(0)).epsilon(1e-12));
    }
}

TEST_CASE("control vanishes exactly on the target wealth") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    GaussianRiskPremium rp(model, prior);
    const double lam = lambda_for_budget(0.01, kR0);
    StrategyParams params{lam, kR0, model.initial_capital()};
    const double target = model.initial_capital() + std::exp(kR0) / (2.0 * lam);
    for (double t : {0.0, 0.4, 0.9}) {
        for (double b : {-0.1, 0.05, 0.3}) {
            CHECK(std::abs(bayes_control(t, target, scalar(b), params, rp, model)(0)) < 1e-14);
            // above the target the position flips sign
            const double above = bayes_control(t, target + 0.1, scalar(b), params, rp, model)(0);
            const double below = bayes_control(t, target - 0.1, scalar(b), params, rp, model)(0);
            CHECK(above == doctest::Approx(-below).epsilon(1e-12));
        }
    }
}

TEST_CASE("learning control combines myopic and hedging terms") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    GaussianRiskPremium rp(model, prior);
    const double lam = lambda_for_budget(0.01, kR0);
    StrategyParams params{lam, kR0, model.initial_capital()};
    const double t = 0.3, x = 0.9, b = 0.12;

    const double cushion =
        model.initial_capital() - x + std::exp(kR0) / (2.0 * lam);
    const double psi = rp.psi(t, scalar(b))(0, 0);
    const double grad = rp.gradient(t, scalar(b))(0);
    const double direction = b / 0.04 - psi / 0.2 * grad;
    CHECK(bayes_control(t, x, scalar(b), params, rp, model)(0) ==
          doctest::Approx(cushion * direction).epsilon(1e-12));
}

TEST_CASE("non-learning multiplier matches the unit Sharpe hand value") {
    MarketModel unit(1.0, 0.05, 1.0);
    CHECK(nonlearning_lambda(unit, scalar(0.05), 0.01) ==
          doctest::Approx(6.5541624721604306).epsilon(1e-12));
    MarketModel m8(1.0, 0.2, 1.0);
    CHECK(nonlearning_lambda(m8, scalar(0.05), 0.01) ==
          doctest::Approx(1.2697879637744585).epsilon(1e-12));
    CHECK_THROWS_AS(nonlearning_lambda(m8, scalar(0.0), 0.01), degenerate_model_error);
    CHECK_THROWS_AS(nonlearning_lambda(m8, scalar(0.05), 0.0), std::invalid_argument);
}

TEST_CASE("candidate value function satisfies the verification identities") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    GaussianRiskPremium rp(model, prior);
    const double lam = 3.0, gamma = 0.2;

    // quadratic in x with curvature lambda e^{-R}
    const double t = 0.25, b = 0.08;
    const double v0 = value_v_lambda_gamma(t, 1.0, scalar(b), lam, gamma, rp);
    const double vp = value_v_lambda_gamma(t, 1.0 + 1e-4, scalar(b), lam, gamma, rp);
    const double vm = value_v_lambda_gamma(t, 1.0 - 1e-4, scalar(b), lam, gamma, rp);
    const double second = (vp - 2.0 * v0 + vm) / 1e-8;
    CHECK(second == doctest::Approx(2.0 * lam * std::exp(-rp.value(t, scalar(b)))).epsilon(1e-4));

    // at t = T the premium vanishes and the constants cancel:
    // v = lambda x^2 - (1 + 2 lambda gamma) x
    const double x = 1.3;
    const double c = 1.0 + 2.0 * lam * gamma;
    CHECK(value_v_lambda_gamma(1.0, x, scalar(0.05), lam, gamma, rp) ==
          doctest::Approx(lam * x * x - c * x).epsilon(1e-12));
}

} // TEST_SUITE
