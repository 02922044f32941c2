#pragma once

#include <variant>

#include <Eigen/Dense>

namespace bmk {

/**
 * @brief Prior laws for the unobserved drift vector B.
 *
 * Three families are supported.  The Gaussian family admits closed forms
 * for the filter and the risk premium; the discrete family (finite support)
 * exercises the genuinely nonlinear filter; the Dirac family recovers the
 * classical fully-observed drift as a degenerate special case.
 *
 * Each constructor validates its parameters and throws
 * std::invalid_argument on failure.  Instances are immutable.
 */
class GaussianPrior {
public:
    GaussianPrior(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

    /// Single-asset convenience taking the standard deviation sigma0.
    GaussianPrior(double mean, double sigma0);

    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    /// Sigma0^{-1}, computed once via a Cholesky factorisation.
    const Eigen::MatrixXd& covariance_inv() const { return cov_inv_; }

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd cov_inv_;
};

class DiscretePrior {
public:
    /// Support points are the columns of `support` (n x N); `weights` are
    /// the prior probabilities, strictly positive and summing to one.
    DiscretePrior(Eigen::MatrixXd support, Eigen::VectorXd weights);

    int size() const { return static_cast<int>(support_.cols()); }
    const Eigen::MatrixXd& support() const { return support_; }
    const Eigen::VectorXd& weights() const { return weights_; }

    Eigen::VectorXd mean() const;
    Eigen::MatrixXd covariance() const;

private:
    Eigen::MatrixXd support_;
    Eigen::VectorXd weights_;
};

class DiracPrior {
public:
    explicit DiracPrior(Eigen::VectorXd point);
    explicit DiracPrior(double point);

    const Eigen::VectorXd& mean() const { return point_; }

private:
    Eigen::VectorXd point_;
};

using Prior = std::variant<GaussianPrior, DiscretePrior, DiracPrior>;

/// Dimension of the drift vector the prior describes.
int prior_dimension(const Prior& prior);

/// Prior mean of B.
Eigen::VectorXd prior_mean(const Prior& prior);

/// Prior covariance of B (zero for a Dirac prior).
Eigen::MatrixXd prior_covariance(const Prior& prior);

/// Throws std::invalid_argument unless the prior lives in dimension n.
void require_dimension(const Prior& prior, int n);

} // namespace bmk
