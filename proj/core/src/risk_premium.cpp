#include "bmk/risk_premium.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "bmk/errors.hpp"

namespace bmk {

namespace {

bool is_univariate(const MarketModel& model) { return model.n() == 1; }

/// G(t) = (Sigma + Sigma0 t)^{-1} Sigma0.
Eigen::MatrixXd gain(const MarketModel& model, const GaussianPrior& prior, double t) {
    const Eigen::MatrixXd denom = model.covariance() + prior.covariance() * t;
    return denom.partialPivLu().solve(prior.covariance());
}

/// H(t) = G^T Sigma G = Sigma0 (Sigma + Sigma0 t)^{-1} Sigma (Sigma + Sigma0 t)^{-1} Sigma0.
Eigen::MatrixXd gain_quadratic(const MarketModel& model, const GaussianPrior& prior,
                               double t) {
    const Eigen::MatrixXd g = gain(model, prior, t);
    return g.transpose() * model.covariance() * g;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, const char* who) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw numerical_error(std::string(who) +
                              ": matrix is not symmetric positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

double explicit_M_1d(double s2, double s02, double T, double t) {
    return (s2 + s02 * t) * (T - t) / (s2 * (s2 + s02 * (2.0 * T - t)));
}

double explicit_U_1d(double s2, double s02, double T, double t) {
    return std::log((s2 + s02 * T) /
                    std::sqrt((s2 + s02 * t) * (s2 + s02 * (2.0 * T - t))));
}

Eigen::MatrixXd quadrature_M(const MarketModel& model, const GaussianPrior& prior,
                             double t, const QuadratureOptions& quad) {
    const double T = model.horizon();
    if (t >= T) return Eigen::MatrixXd::Zero(model.n(), model.n());
    const Eigen::MatrixXd theta =
        spd_inverse(prior.covariance_inv() + model.covariance_inv() * T, "gaussian_M") +
        2.0 * adaptive_integrate(
                  [&](double s) { return gain_quadratic(model, prior, s); }, t, T, quad);
    return prior.covariance_inv() + model.covariance_inv() * t -
           spd_inverse(theta, "gaussian_M");
}

} // namespace

ConstantDriftRiskPremium::ConstantDriftRiskPremium(const MarketModel& model,
                                                   Eigen::VectorXd b0)
    : horizon_(model.horizon()),
      n_(model.n()),
      rho_(model.squared_risk_price(b0)) {}

double ConstantDriftRiskPremium::value(double t, const Eigen::VectorXd& b) const {
    if (b.size() != n_)
        throw std::invalid_argument("ConstantDriftRiskPremium: dimension mismatch");
    return rho_ * (horizon_ - t);
}

Eigen::VectorXd ConstantDriftRiskPremium::gradient(double,
                                                   const Eigen::VectorXd&) const {
    return Eigen::VectorXd::Zero(n_);
}

Eigen::MatrixXd ConstantDriftRiskPremium::psi(double, const Eigen::VectorXd&) const {
    return Eigen::MatrixXd::Zero(n_, n_);
}

GaussianRiskPremium::GaussianRiskPremium(MarketModel model, GaussianPrior prior,
                                         QuadratureOptions quad)
    : model_(std::move(model)), prior_(std::move(prior)), quad_(quad) {
    require_dimension(Prior{prior_}, model_.n());
}

std::pair<Eigen::MatrixXd, double> GaussianRiskPremium::m_and_u(double t) const {
    model_.require_time(t);
    if (is_univariate(model_)) {
        const double s2 = model_.covariance()(0, 0);
        const double s02 = prior_.covariance()(0, 0);
        const double T = model_.horizon();
        return {Eigen::MatrixXd::Constant(1, 1, explicit_M_1d(s2, s02, T, t)),
                explicit_U_1d(s2, s02, T, t)};
    }
    {
        std::shared_lock lock(cache_mutex_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
    }
    std::pair<Eigen::MatrixXd, double> result{gaussian_M(model_, prior_, t, quad_),
                                              gaussian_U(model_, prior_, t, quad_)};
    std::unique_lock lock(cache_mutex_);
    return cache_.emplace(t, std::move(result)).first->second;
}

double GaussianRiskPremium::value(double t, const Eigen::VectorXd& b) const {
    const auto [m, u] = m_and_u(t);
    return b.dot(m * b) + u;
}

Eigen::VectorXd GaussianRiskPremium::gradient(double t, const Eigen::VectorXd& b) const {
    return 2.0 * m_and_u(t).first * b;
}

Eigen::MatrixXd GaussianRiskPremium::psi(double t, const Eigen::VectorXd&) const {
    const Eigen::MatrixXd denom = model_.covariance() + prior_.covariance() * t;
    return prior_.covariance() * denom.partialPivLu().solve(model_.sigma());
}

Eigen::MatrixXd GaussianRiskPremium::M(double t) const { return m_and_u(t).first; }

double GaussianRiskPremium::U(double t) const { return m_and_u(t).second; }

void GaussianRiskPremium::warm_cache(const std::vector<double>& times) const {
    for (double t : times) m_and_u(t);
}

double constant_drift_R(const MarketModel& model, const Eigen::VectorXd& b0, double t) {
    model.require_time(t);
    return model.squared_risk_price(b0) * (model.horizon() - t);
}

Eigen::MatrixXd gaussian_M(const MarketModel& model, const GaussianPrior& prior,
                           double t, const QuadratureOptions& quad) {
    model.require_time(t);
    require_dimension(Prior{prior}, model.n());
    if (is_univariate(model))
        return Eigen::MatrixXd::Constant(
            1, 1,
            explicit_M_1d(model.covariance()(0, 0), prior.covariance()(0, 0),
                          model.horizon(), t));
    return quadrature_M(model, prior, t, quad);
}

double gaussian_U(const MarketModel& model, const GaussianPrior& prior, double t,
                  const QuadratureOptions& quad) {
    model.require_time(t);
    require_dimension(Prior{prior}, model.n());
    if (is_univariate(model))
        return explicit_U_1d(model.covariance()(0, 0), prior.covariance()(0, 0),
                             model.horizon(), t);
    if (t == model.horizon()) return 0.0;
    // U(t) = int_t^T tr(H(s) M(s)) ds, the M evaluation nesting one more
    // quadrature level; the inner tolerance is tightened accordingly.
    QuadratureOptions inner = quad;
    inner.abs_tol = 0.1 * quad.abs_tol;
    return adaptive_integrate(
        [&](double s) {
            return (gain_quadratic(model, prior, s) *
                    quadrature_M(model, prior, s, inner))
                .trace();
        },
        t, model.horizon(), quad);
}

double gaussian_R(const MarketModel& model, const GaussianPrior& prior, double t,
                  const Eigen::VectorXd& b, const QuadratureOptions& quad) {
    return b.dot(gaussian_M(model, prior, t, quad) * b) +
           gaussian_U(model, prior, t, quad);
}

Eigen::VectorXd gaussian_grad_R(const MarketModel& model, const GaussianPrior& prior,
                                double t, const Eigen::VectorXd& b,
                                const QuadratureOptions& quad) {
    return 2.0 * gaussian_M(model, prior, t, quad) * b;
}

RiccatiResidual riccati_residual(const MarketModel& model, const GaussianPrior& prior,
                                 double t, double h, const QuadratureOptions& quad) {
    if (!(h > 0.0))
        throw std::invalid_argument("riccati_residual: step h must be positive");
    if (t - 2.0 * h < 0.0 || t + 2.0 * h > model.horizon())
        throw std::out_of_range(
            "riccati_residual: central stencil [t - 2h, t + 2h] leaves [0, T]");

    const auto M_at = [&](double s) { return gaussian_M(model, prior, s, quad); };
    const auto U_at = [&](double s) { return gaussian_U(model, prior, s, quad); };

    const Eigen::MatrixXd m_prime =
        (M_at(t - 2.0 * h) - 8.0 * M_at(t - h) + 8.0 * M_at(t + h) -
         M_at(t + 2.0 * h)) /
        (12.0 * h);
    const double u_prime =
        (U_at(t - 2.0 * h) - 8.0 * U_at(t - h) + 8.0 * U_at(t + h) -
         U_at(t + 2.0 * h)) /
        (12.0 * h);

    const Eigen::MatrixXd m = M_at(t);
    const Eigen::MatrixXd g = gain(model, prior, t);
    const Eigen::MatrixXd h_mat = g.transpose() * model.covariance() * g;

    const Eigen::MatrixXd m_residual = -m_prime -
                                       2.0 * m.transpose() * h_mat * m +
                                       4.0 * g * m - model.covariance_inv();
    const double u_residual = -u_prime - (h_mat * m).trace();
    return {m_residual.cwiseAbs().maxCoeff(), std::abs(u_residual)};
}

} // namespace bmk
