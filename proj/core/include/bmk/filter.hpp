#pragma once

#include <Eigen/Dense>

#include "bmk/market_model.hpp"
#include "bmk/prior.hpp"

namespace bmk {

/**
 * @brief Bayesian filter for the unobserved drift.
 *
 * The price history up to t is equivalent to the observation vector
 *
 *   y = h(t, s) = sigma^{-1} [ ln(s^i / s0^i) + |sigma^i|^2 t / 2 ]_i,
 *
 * which follows Y_t = sigma^{-1} B t + W_t.  Conditioning the prior mu on
 * Y_t = y gives the posterior law
 *
 *   mu_{t,y}(db)  proportional to  exp(<sigma^{-1} b, y> - |sigma^{-1} b|^2 t / 2) mu(db),
 *
 * whose mean f(t, y) drives the learning strategy.  The map y -> f(t, y) is
 * injective on the relevant domain with Jacobian
 *
 *   grad_y f(t, y) = Cov(B | Y_t = y) (sigma^{-1})^T,
 *
 * and the drift estimate solves dBhat_t = psi(t, Bhat_t) dWhat_t under the
 * innovation process, with psi(t, b) = grad_y f(t, f_t^{-1}(b)).
 *
 * Gaussian and Dirac priors admit closed forms; discrete priors use
 * softmax weights (evaluated with a max shift) and a damped Newton
 * inversion of f_t.
 */
struct PosteriorState {
    double t = 0.0;
    Eigen::VectorXd y;     ///< observation vector
    Eigen::VectorXd b_hat; ///< posterior mean of B
    Eigen::MatrixXd cov;   ///< posterior covariance of B
};

/// Observation vector h(t, s) from a positive price vector.
Eigen::VectorXd observation_from_prices(const MarketModel& model, double t,
                                        const Eigen::VectorXd& prices);

/// Inverse of observation_from_prices: s^i = s0^i exp(sigma^i y - |sigma^i|^2 t / 2).
Eigen::VectorXd prices_from_observation(const MarketModel& model, double t,
                                        const Eigen::VectorXd& y);

/// Posterior mean f(t, y) of the drift given Y_t = y.
Eigen::VectorXd posterior_mean(const Prior& prior, const MarketModel& model,
                               double t, const Eigen::VectorXd& y);

/// Posterior covariance of the drift given Y_t = y (independent of y for
/// Gaussian priors, identically zero for Dirac priors).
Eigen::MatrixXd posterior_covariance(const Prior& prior, const MarketModel& model,
                                     double t, const Eigen::VectorXd& y);

/// Posterior weights of a discrete prior given Y_t = y (sums to one).
Eigen::VectorXd posterior_weights(const DiscretePrior& prior, const MarketModel& model,
                                  double t, const Eigen::VectorXd& y);

/// Convenience bundle of the above at (t, y).
PosteriorState posterior_state(const Prior& prior, const MarketModel& model,
                               double t, const Eigen::VectorXd& y);

/// Diffusion coefficient psi(t, b) of the drift estimate, defined on the
/// open domain of attainable posterior means.  For discrete priors b must
/// lie strictly inside the convex hull of the support (relative margin
/// 1e-8 in barycentric coordinates), otherwise a std::domain_error
/// identifies the violated face.
Eigen::MatrixXd psi(const Prior& prior, const MarketModel& model, double t,
                    const Eigen::VectorXd& b);

/// Solves f(t, y) = b for y.  Closed form for Gaussian priors; damped
/// Newton iteration (residual tolerance 1e-10, at most 50 steps, started
/// from the moment-matched Gaussian inverse) for discrete priors.  Dirac
/// priors have a constant posterior mean, so inversion is a domain error.
Eigen::VectorXd invert_posterior_mean(const Prior& prior, const MarketModel& model,
                                      double t, const Eigen::VectorXd& b);

} // namespace bmk
