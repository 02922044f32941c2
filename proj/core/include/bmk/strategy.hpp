#pragma once

#include <Eigen/Dense>

#include "bmk/market_model.hpp"
#include "bmk/risk_premium.hpp"

namespace bmk {

/**
 * @brief Optimal mean-variance strategies under drift uncertainty.
 *
 * The Markowitz problem sup E[X_T] subject to Var(X_T) <= theta is solved
 * by Lagrangian duality.  With R0 = R(0, b0) the dual value functions are
 *
 *   V0(lambda) = -(e^{R0} - 1) / (4 lambda) - x0,
 *   U0(theta)  = x0 + sqrt(theta (e^{R0} - 1)),
 *
 * the optimal multiplier is lambda(theta) = sqrt((e^{R0} - 1) / (4 theta)),
 * and the optimal learning feedback control is
 *
 *   a(t, x, b) = (x0 - x + e^{R0} / (2 lambda))
 *                  (Sigma^{-1} b - (psi sigma^{-1})^T grad_b R(t, b)).
 *
 * Keeping the drift frozen at its prior mean instead gives the
 * non-learning benchmark with rho = |sigma^{-1} b0|^2 T in place of R0 and
 * a myopic control along Sigma^{-1} b0.
 */
struct StrategyParams {
    double lambda = 0.0; ///< Lagrange multiplier of the variance constraint
    double r0 = 0.0;     ///< R(0, b0)
    double x0 = 0.0;     ///< initial capital
};

/// Optimal multiplier for the risk budget theta.  Requires theta > 0;
/// throws degenerate_model_error when r0 <= 0 (no risky opportunity).
double lambda_for_budget(double theta, double r0);

/// Dual value V0(lambda) of the variance-penalised problem.
double value_V0(const MarketModel& model, double r0, double lambda);

/// Primal value U0(theta): best expected terminal wealth under the budget.
double value_U0(const MarketModel& model, double r0, double theta);

/// E[X_T] under the optimal control, which equals the optimal target
/// gamma*(lambda) = x0 + (e^{r0} - 1) / (2 lambda).
double expected_optimal_terminal_wealth(const MarketModel& model, double r0,
                                        double lambda);

/// Learning (Bayes) feedback control a(t, x, b).
Eigen::VectorXd bayes_control(double t, double x, const Eigen::VectorXd& b,
                              const StrategyParams& params, const RiskPremium& rp,
                              const MarketModel& model);

/// Multiplier of the non-learning benchmark calibrated to the same budget.
double nonlearning_lambda(const MarketModel& model, const Eigen::VectorXd& b0,
                          double theta);

/// Non-learning feedback control, constant direction Sigma^{-1} b0.
Eigen::VectorXd nonlearning_control(double x, const MarketModel& model,
                                    const Eigen::VectorXd& b0, double lambda0);

/// Value function of the quadratic-target auxiliary problem,
///
///   v(t, x, b) = e^{-R(t,b)} [lambda x^2 - (1 + 2 lambda gamma) x
///                  + (1 + 2 lambda gamma)^2 / (4 lambda)]
///                  - (1 + 2 lambda gamma)^2 / (4 lambda).
double value_v_lambda_gamma(double t, double x, const Eigen::VectorXd& b,
                            double lambda, double gamma, const RiskPremium& rp);

} // namespace bmk
