#pragma once

#include <memory>
#include <shared_mutex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bmk/market_model.hpp"
#include "bmk/prior.hpp"
#include "bmk/quadrature.hpp"

namespace bmk {

/**
 * @brief Evaluator for the risk premium R(t, b) and its gradient.
 *
 * R solves the semi-linear terminal value problem
 *
 *   -dR/dt - tr(psi psi^T D^2_b R) / 2 + 2 (psi sigma^{-1} b)^T grad_b R
 *        - |psi^T grad_b R|^2 / 2 - |sigma^{-1} b|^2 = 0,      R(T, .) = 0,
 *
 * where psi is the diffusion coefficient of the drift estimate.  Concrete
 * backends: a constant known drift (psi = 0, linear in t), the Gaussian
 * prior closed form (quadratic ansatz b^T M(t) b + U(t)), and an
 * interpolated finite-difference grid for priors without closed forms.
 */
class RiskPremium {
public:
    virtual ~RiskPremium() = default;

    virtual double value(double t, const Eigen::VectorXd& b) const = 0;
    virtual Eigen::VectorXd gradient(double t, const Eigen::VectorXd& b) const = 0;
    /// Diffusion coefficient psi(t, b) of the drift estimate this premium
    /// was built for (zero when the drift is known).
    virtual Eigen::MatrixXd psi(double t, const Eigen::VectorXd& b) const = 0;
};

/// R(t, b) = |sigma^{-1} b0|^2 (T - t) for a known constant drift b0; the
/// b argument of the evaluator is ignored beyond a dimension check.
class ConstantDriftRiskPremium : public RiskPremium {
public:
    ConstantDriftRiskPremium(const MarketModel& model, Eigen::VectorXd b0);

    double value(double t, const Eigen::VectorXd& b) const override;
    Eigen::VectorXd gradient(double t, const Eigen::VectorXd& b) const override;
    Eigen::MatrixXd psi(double t, const Eigen::VectorXd& b) const override;

private:
    double horizon_;
    int n_;
    double rho_; ///< |sigma^{-1} b0|^2
};

/// Closed-form Gaussian-prior premium R(t, b) = b^T M(t) b + U(t).
/// One asset: explicit rational/logarithmic formulas.  Several assets:
/// adaptive Gauss-Legendre quadrature of the matrix Riccati solution, with
/// results memoised per time point (thread safe, so simulations can share
/// one instance across workers).
class GaussianRiskPremium : public RiskPremium {
public:
    GaussianRiskPremium(MarketModel model, GaussianPrior prior,
                        QuadratureOptions quad = {});

    double value(double t, const Eigen::VectorXd& b) const override;
    Eigen::VectorXd gradient(double t, const Eigen::VectorXd& b) const override;
    Eigen::MatrixXd psi(double t, const Eigen::VectorXd& b) const override;

    Eigen::MatrixXd M(double t) const;
    double U(double t) const;

    /// Precompute M, U at the given times (e.g. a simulation grid) so that
    /// concurrent evaluation never contends on the memo lock.
    void warm_cache(const std::vector<double>& times) const;

    const MarketModel& model() const { return model_; }
    const GaussianPrior& prior() const { return prior_; }

private:
    std::pair<Eigen::MatrixXd, double> m_and_u(double t) const;

    MarketModel model_;
    GaussianPrior prior_;
    QuadratureOptions quad_;
    mutable std::map<double, std::pair<Eigen::MatrixXd, double>> cache_;
    mutable std::shared_mutex cache_mutex_;
};

/// R(t, b0-part) of the constant known drift: |sigma^{-1} b0|^2 (T - t).
double constant_drift_R(const MarketModel& model, const Eigen::VectorXd& b0, double t);

/// Quadratic coefficient M(t) of the Gaussian-prior premium.
Eigen::MatrixXd gaussian_M(const MarketModel& model, const GaussianPrior& prior,
                           double t, const QuadratureOptions& quad = {});

/// Constant coefficient U(t) of the Gaussian-prior premium.
double gaussian_U(const MarketModel& model, const GaussianPrior& prior, double t,
                  const QuadratureOptions& quad = {});

/// R(t, b) = b^T M(t) b + U(t).
double gaussian_R(const MarketModel& model, const GaussianPrior& prior, double t,
                  const Eigen::VectorXd& b, const QuadratureOptions& quad = {});

/// grad_b R(t, b) = 2 M(t) b.
Eigen::VectorXd gaussian_grad_R(const MarketModel& model, const GaussianPrior& prior,
                                double t, const Eigen::VectorXd& b,
                                const QuadratureOptions& quad = {});

/// Residuals of the coefficient ODEs
///
///   -M' - 2 M^T G^T Sigma G M + 4 G M - Sigma^{-1} = 0,
///   -U' - tr(G^T Sigma G M) = 0,        G(t) = (Sigma + Sigma0 t)^{-1} Sigma0,
///
/// with the time derivatives taken by fourth-order central differences of
/// step h.  Requires t - 2h >= 0 and t + 2h <= T.
struct RiccatiResidual {
    double m; ///< max-abs entry of the M equation residual
    double u; ///< abs value of the U equation residual
};

RiccatiResidual riccati_residual(const MarketModel& model, const GaussianPrior& prior,
                                 double t, double h = 1e-3,
                                 const QuadratureOptions& quad = {});

} // namespace bmk
