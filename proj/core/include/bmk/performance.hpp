#pragma once

#include <Eigen/Dense>

#include "bmk/market_model.hpp"
#include "bmk/prior.hpp"
#include "bmk/risk_premium.hpp"

namespace bmk {

/**
 * @brief Sharpe ratios of the learning and non-learning strategies.
 *
 * Both strategies are calibrated to the same risk budget.  The learning
 * strategy attains Sh^L = sqrt(e^{R(0,b0)} - 1).  The non-learning
 * benchmark holds the prior mean fixed and attains
 *
 *   Sh^NL = (1 - I1) / sqrt(I2 - I1^2),
 *   I1(t) = int e^{-b0' Sigma^{-1} b t} mu(db),
 *   I2(t) = int e^{-b0' Sigma^{-1} (2b - b0) t} mu(db),
 *
 * evaluated at t = T.  The integrals are handled in log space (Gaussian
 * moment generating function, log-sum-exp over discrete support), since
 * they overflow doubles already for moderately aggressive priors.  The
 * difference Sh^L - Sh^NL is the value of information.
 */
struct SharpeReport {
    double r0 = 0.0;                   ///< R(0, b0) backing the learning ratio
    double sh_learning = 0.0;          ///< sqrt(e^{r0} - 1)
    double sh_nonlearning = 0.0;       ///< prior-mean benchmark, can be negative
    double value_of_information = 0.0; ///< sh_learning - sh_nonlearning
    double nl_upper_bound = 0.0;       ///< sqrt(e^{|sigma^{-1} b0|^2 T} - 1)
};

struct WealthMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Sh^L from a risk premium value R(0, b0) > 0.  Invariant to x0 and theta.
double sharpe_learning(double r0);

/// Sh^L for a Gaussian prior; explicit for one asset,
///
///   sqrt( (sigma^2 + sigma0^2 T) / (sigma sqrt(sigma^2 + 2 sigma0^2 T))
///           e^{b0^2 T / (sigma^2 + 2 sigma0^2 T)} - 1 ),
///
/// quadrature-backed R(0, b0) otherwise.
double sharpe_learning_gaussian(const MarketModel& model, const GaussianPrior& prior);

/// Sh^NL at the horizon.
double sharpe_nonlearning(const Prior& prior, const MarketModel& model);

/// Sh^NL of the wealth at an intermediate time t (the multiplier
/// calibrated at the horizon cancels).  Returns 0 at t = 0.
double sharpe_nonlearning_at(const Prior& prior, const MarketModel& model, double t);

/// Upper bound sqrt(e^{|sigma^{-1} b0|^2 T} - 1) for Sh^NL, attained by a
/// Dirac prior.
double nl_upper_bound(const MarketModel& model, const Eigen::VectorXd& b0);

/// Mean and variance of the non-learning wealth at time t, with the
/// multiplier lambda0(theta) calibrated at the horizon.  Throws
/// numerical_error if the variance argument is not positive.
WealthMoments nl_wealth_moments(const Prior& prior, const MarketModel& model,
                                double theta, double t);

/// Full report.  R(0, b0) comes from the closed form for Gaussian and
/// Dirac priors and from the finite-difference solver (default grid) for
/// one-asset discrete priors; discrete priors in higher dimension have no
/// supported premium evaluator and raise std::invalid_argument.
SharpeReport value_of_information(const Prior& prior, const MarketModel& model);

/// Same report with the learning premium taken from an existing evaluator,
/// e.g. a grid solved once and shared across a sweep.
SharpeReport value_of_information(const Prior& prior, const MarketModel& model,
                                  const RiskPremium& rp);

} // namespace bmk
