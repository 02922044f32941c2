#include "bmk/strategy.hpp"

#include <cmath>
#include <stdexcept>

#include "bmk/errors.hpp"

namespace bmk {

namespace {
void require_budget(double theta) {
    if (!(theta > 0.0))
        throw std::invalid_argument("risk budget theta must be positive");
}

void require_premium(double r0) {
    if (!(r0 > 0.0))
        throw degenerate_model_error(
            "R(0, b0) <= 0: the model admits no risky opportunity and the "
            "mean-variance trade-off degenerates");
}

void require_multiplier(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("Lagrange multiplier lambda must be positive");
}
} // namespace

double lambda_for_budget(double theta, double r0) {
    require_budget(theta);
    require_premium(r0);
    return std::sqrt(std::expm1(r0) / (4.0 * theta));
}

double value_V0(const MarketModel& model, double r0, double lambda) {
    require_multiplier(lambda);
    return -std::expm1(r0) / (4.0 * lambda) - model.initial_capital();
}

double value_U0(const MarketModel& model, double r0, double theta) {
    // A zero budget is a valid degenerate query: no variance allowed, so
    // the best attainable expectation is the initial capital itself.
    if (!(theta >= 0.0))
        throw std::invalid_argument("risk budget theta must be nonnegative");
    require_premium(r0);
    return model.initial_capital() + std::sqrt(theta * std::expm1(r0));
}

double expected_optimal_terminal_wealth(const MarketModel& model, double r0,
                                        double lambda) {
    require_multiplier(lambda);
    return model.initial_capital() + std::expm1(r0) / (2.0 * lambda);
}

Eigen::VectorXd bayes_control(double t, double x, const Eigen::VectorXd& b,
                              const StrategyParams& params, const RiskPremium& rp,
                              const MarketModel& model) {
    model.require_time(t);
    require_multiplier(params.lambda);
    const double cushion =
        params.x0 - x + std::exp(params.r0) / (2.0 * params.lambda);
    const Eigen::VectorXd direction =
        model.covariance_inv() * b -
        (rp.psi(t, b) * model.sigma_inv()).transpose() * rp.gradient(t, b);
    return cushion * direction;
}

double nonlearning_lambda(const MarketModel& model, const Eigen::VectorXd& b0,
                          double theta) {
    require_budget(theta);
    const double rho = model.squared_risk_price(b0) * model.horizon();
    require_premium(rho);
    return std::sqrt(std::expm1(rho) / (4.0 * theta));
}

Eigen::VectorXd nonlearning_control(double x, const MarketModel& model,
                                    const Eigen::VectorXd& b0, double lambda0) {
    require_multiplier(lambda0);
    const double rho = model.squared_risk_price(b0) * model.horizon();
    const double cushion =
        model.initial_capital() - x + std::exp(rho) / (2.0 * lambda0);
    return cushion * (model.covariance_inv() * b0);
}

double value_v_lambda_gamma(double t, double x, const Eigen::VectorXd& b,
                            double lambda, double gamma, const RiskPremium& rp) {
    require_multiplier(lambda);
    const double k = 1.0 + 2.0 * lambda * gamma;
    const double k2_4l = k * k / (4.0 * lambda);
    return std::exp(-rp.value(t, b)) * (lambda * x * x - k * x + k2_4l) - k2_4l;
}

} // namespace bmk
