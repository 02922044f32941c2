#pragma once

#include <Eigen/Dense>

namespace bmk {

/**
 * @brief Frictionless Black-Scholes market with an uncertain drift.
 *
 * Prices follow dS^i_t = S^i_t (B^i dt + sigma^i dW_t) on [0, T] with a
 * constant, invertible volatility matrix sigma and an unobserved drift
 * vector B.  The model holds everything that is known to the investor up
 * front: the number of assets, the horizon, sigma, the initial capital x0
 * and the initial prices s0.
 *
 * Derived quantities (sigma^{-1}, Sigma = sigma sigma^T and its inverse,
 * squared row norms |sigma^i|^2) are computed once at construction.
 * Construction fails with std::invalid_argument if sigma is singular to
 * working precision or any dimension/positivity constraint is violated.
 */
class MarketModel {
public:
    MarketModel(double horizon,
                Eigen::MatrixXd sigma,
                double initial_capital,
                Eigen::VectorXd initial_prices);

    /// Single-asset convenience: sigma and s0 as scalars.
    MarketModel(double horizon, double sigma, double initial_capital,
                double initial_price = 1.0);

    int n() const { return static_cast<int>(sigma_.rows()); }
    double horizon() const { return horizon_; }
    double initial_capital() const { return x0_; }

    const Eigen::MatrixXd& sigma() const { return sigma_; }
    const Eigen::MatrixXd& sigma_inv() const { return sigma_inv_; }
    /// Sigma = sigma sigma^T.
    const Eigen::MatrixXd& covariance() const { return Sigma_; }
    const Eigen::MatrixXd& covariance_inv() const { return Sigma_inv_; }
    const Eigen::VectorXd& initial_prices() const { return s0_; }
    /// |sigma^i|^2, the squared Euclidean norm of row i of sigma.
    const Eigen::VectorXd& squared_row_norms() const { return row_norms2_; }

    /// |sigma^{-1} b|^2, the squared market price of risk for drift b.
    double squared_risk_price(const Eigen::VectorXd& b) const;

    /// Throws std::out_of_range unless t lies in [0, T].
    void require_time(double t) const;

private:
    void finalize();

    double horizon_;
    Eigen::MatrixXd sigma_;
    double x0_;
    Eigen::VectorXd s0_;

    Eigen::MatrixXd sigma_inv_;
    Eigen::MatrixXd Sigma_;
    Eigen::MatrixXd Sigma_inv_;
    Eigen::VectorXd row_norms2_;
};

} // namespace bmk
