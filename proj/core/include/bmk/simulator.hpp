#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bmk/market_model.hpp"
#include "bmk/prior.hpp"
#include "bmk/risk_premium.hpp"

namespace bmk {

/**
 * @brief Monte Carlo simulation of the learning and non-learning strategies.
 *
 * Per path: the drift B is drawn from the prior, the wealth follows an
 * Euler-Maruyama discretisation of dX = a^T (B dt + sigma dW), and the
 * drift estimate is recovered exactly from the observation process
 * Y_t = sigma^{-1} B t + W_t through the posterior mean map (no separate
 * discretisation of the estimate dynamics, so E[Bhat_t] = E[B] holds at
 * every step size).  Both strategies see the same Brownian increments.
 *
 * Determinism: path i consumes only its own generator stream, keyed by
 * (seed, i), and results land in preallocated slots indexed by i.  The
 * ensemble is therefore bit-identical for any worker count.
 */
enum class StrategyMode { learning, nonlearning, both };

struct SimulationSpec {
    long n_paths = 10000;
    int n_steps = 250;
    std::uint64_t seed = 1;
    int n_workers = 1;
    /// Store wealth series every `series_stride` steps (0: terminal only).
    /// Time 0 and T are always included when a stride is set.
    int series_stride = 0;
    StrategyMode mode = StrategyMode::both;
    double theta = 0.01; ///< risk budget both strategies are calibrated to
    /// Additionally store the drift-estimate series (first component).
    bool store_drift_estimates = false;
};

struct PathEnsemble {
    long n_paths = 0;
    double dt = 0.0;
    double theta = 0.0;
    double r0 = 0.0;                ///< R(0, b0) used for the learning control
    double lambda_learning = 0.0;
    double lambda_nonlearning = 0.0;

    std::vector<double> terminal_learning;     ///< X_T per path
    std::vector<double> terminal_nonlearning;

    std::vector<double> series_times;          ///< stored time points
    std::vector<double> wealth_learning;       ///< [time][path], row-major
    std::vector<double> wealth_nonlearning;
    std::vector<double> drift_estimates;       ///< first component, [time][path]

    long clamp_count = 0;       ///< drift estimates projected into the premium domain
    long total_filter_steps = 0;

    std::span<const double> learning_at(int time_index) const {
        return {wealth_learning.data() + static_cast<std::size_t>(time_index) * n_paths,
                static_cast<std::size_t>(n_paths)};
    }
    std::span<const double> nonlearning_at(int time_index) const {
        return {wealth_nonlearning.data() +
                    static_cast<std::size_t>(time_index) * n_paths,
                static_cast<std::size_t>(n_paths)};
    }
    std::span<const double> drift_at(int time_index) const {
        return {drift_estimates.data() + static_cast<std::size_t>(time_index) * n_paths,
                static_cast<std::size_t>(n_paths)};
    }
};

/// Runs the ensemble.  The premium evaluator must match the prior the
/// ensemble draws drifts from.  Throws config_error for empty grids and
/// numerical_error if more than 0.1% of filter steps needed clamping into
/// the evaluator's domain.
PathEnsemble simulate(const Prior& prior, const MarketModel& model,
                      const RiskPremium& rp, const SimulationSpec& spec);

/// Empirical Sharpe ratio (mean excess wealth over the unbiased standard
/// deviation) and its standard error (delta method with sample skewness
/// and kurtosis).  Throws std::invalid_argument on fewer than two values
/// or zero dispersion.
struct SharpeEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

SharpeEstimate empirical_sharpe(std::span<const double> wealth, double x0);

/// Sample mean and unbiased variance with their standard errors.
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    double se_mean = 0.0;
    double se_variance = 0.0;
};

MomentSummary ensemble_moments(std::span<const double> values);

} // namespace bmk
