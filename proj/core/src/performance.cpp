#include "bmk/performance.hpp"

#include <cmath>
#include <stdexcept>

#include "bmk/errors.hpp"
#include "bmk/filter.hpp"
#include "bmk/pde_solver.hpp"
#include "bmk/strategy.hpp"

namespace bmk {

namespace {

double log_sum_exp(const Eigen::VectorXd& v) {
    const double shift = v.maxCoeff();
    return shift + std::log((v.array() - shift).exp().sum());
}

/// ln(e^x - 1), stable for both large and small positive x.
double log_expm1(double x) {
    if (!(x > 0.0))
        throw numerical_error("variance argument of the Sharpe ratio is not positive");
    if (x > 36.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

struct LogIntegrals {
    double l1; ///< ln I1(t)
    double l2; ///< ln I2(t)
};

/// Log integrals of the non-learning moments at time t.
LogIntegrals nl_log_integrals(const Prior& prior, const MarketModel& model, double t) {
    const Eigen::VectorXd b0 = prior_mean(prior);
    const double rho1 = b0.dot(model.covariance_inv() * b0);
    return std::visit(
        [&](const auto& p) -> LogIntegrals {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>) {
                const Eigen::VectorXd c = model.covariance_inv() * b0;
                const double q = c.dot(p.covariance() * c);
                return {-t * rho1 + 0.5 * t * t * q, -t * rho1 + 2.0 * t * t * q};
            } else if constexpr (std::is_same_v<T, DiscretePrior>) {
                const Eigen::VectorXd c =
                    p.support().transpose() * (model.covariance_inv() * b0);
                const Eigen::VectorXd logpi = p.weights().array().log();
                const double l1 = log_sum_exp(logpi - t * c);
                const double l2 = t * rho1 + log_sum_exp(logpi - 2.0 * t * c);
                return {l1, l2};
            } else {
                return {-t * rho1, -t * rho1};
            }
        },
        prior);
}

/// ln|1 - e^{l1}| and its sign.
std::pair<double, double> log_abs_one_minus_exp(double l1) {
    if (l1 == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    if (l1 < 0.0) return {std::log1p(-std::exp(l1)), 1.0};
    if (l1 > 36.0) return {l1, -1.0};
    return {std::log(std::expm1(l1)), -1.0};
}

double learning_r0(const Prior& prior, const MarketModel& model) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>) {
                return gaussian_R(model, p, 0.0, p.mean());
            } else if constexpr (std::is_same_v<T, DiscretePrior>) {
                if (model.n() != 1)
                    throw std::invalid_argument(
                        "value_of_information: discrete priors beyond one asset have "
                        "no supported premium evaluator");
                const PdeGrid1d grid = solve_pde_1d(model, Prior{p});
                return grid.value(0.0, p.mean()(0));
            } else {
                return constant_drift_R(model, p.mean(), 0.0);
            }
        },
        prior);
}

SharpeReport report_from_r0(const Prior& prior, const MarketModel& model, double r0) {
    SharpeReport rep;
    rep.r0 = r0;
    rep.sh_learning = sharpe_learning(r0);
    rep.sh_nonlearning = sharpe_nonlearning(prior, model);
    rep.value_of_information = rep.sh_learning - rep.sh_nonlearning;
    rep.nl_upper_bound = nl_upper_bound(model, prior_mean(prior));
    return rep;
}

} // namespace

double sharpe_learning(double r0) {
    if (!(r0 > 0.0))
        throw degenerate_model_error(
            "sharpe_learning: R(0, b0) must be positive");
    return std::sqrt(std::expm1(r0));
}

double sharpe_learning_gaussian(const MarketModel& model, const GaussianPrior& prior) {
    require_dimension(Prior{prior}, model.n());
    if (model.n() == 1) {
        const double s2 = model.covariance()(0, 0);
        const double s02 = prior.covariance()(0, 0);
        const double T = model.horizon();
        const double b0 = prior.mean()(0);
        const double arg = (s2 + s02 * T) / (std::sqrt(s2) * std::sqrt(s2 + 2.0 * s02 * T)) *
                               std::exp(b0 * b0 * T / (s2 + 2.0 * s02 * T)) -
                           1.0;
        if (!(arg > 0.0))
            throw degenerate_model_error("sharpe_learning_gaussian: degenerate model");
        return std::sqrt(arg);
    }
    return sharpe_learning(gaussian_R(model, prior, 0.0, prior.mean()));
}

double sharpe_nonlearning_at(const Prior& prior, const MarketModel& model, double t) {
    model.require_time(t);
    require_dimension(prior, model.n());
    const Eigen::VectorXd b0 = prior_mean(prior);
    const double rho1 = b0.dot(model.covariance_inv() * b0);
    if (!(rho1 > 0.0))
        throw degenerate_model_error(
            "sharpe_nonlearning: prior mean drift is zero, the benchmark never trades");
    if (t == 0.0) return 0.0;

    const auto [l1, l2] = nl_log_integrals(prior, model, t);
    const auto [log_num, sign] = log_abs_one_minus_exp(l1);
    if (sign == 0.0) return 0.0;
    const double b = l2 - 2.0 * l1; // >= t rho1 > 0 by Cauchy-Schwarz
    const double log_den = l1 + 0.5 * log_expm1(b);
    return sign * std::exp(log_num - log_den);
}

double sharpe_nonlearning(const Prior& prior, const MarketModel& model) {
    return sharpe_nonlearning_at(prior, model, model.horizon());
}

double nl_upper_bound(const MarketModel& model, const Eigen::VectorXd& b0) {
    const double rho = model.squared_risk_price(b0) * model.horizon();
    return std::sqrt(std::expm1(rho));
}

WealthMoments nl_wealth_moments(const Prior& prior, const MarketModel& model,
                                double theta, double t) {
    model.require_time(t);
    require_dimension(prior, model.n());
    const Eigen::VectorXd b0 = prior_mean(prior);
    const double lambda0 = nonlearning_lambda(model, b0, theta);
    const double rho = model.squared_risk_price(b0) * model.horizon();
    const double log_c1 = rho - std::log(2.0 * lambda0);

    WealthMoments out;
    if (t == 0.0) {
        out.mean = model.initial_capital();
        out.variance = 0.0;
        return out;
    }
    const auto [l1, l2] = nl_log_integrals(prior, model, t);
    const auto [log_num, sign] = log_abs_one_minus_exp(l1);
    out.mean = model.initial_capital() + sign * std::exp(log_c1 + log_num);
    const double b = l2 - 2.0 * l1;
    out.variance = std::exp(2.0 * (log_c1 + l1) + log_expm1(b));
    return out;
}

SharpeReport value_of_information(const Prior& prior, const MarketModel& model) {
    require_dimension(prior, model.n());
    return report_from_r0(prior, model, learning_r0(prior, model));
}

SharpeReport value_of_information(const Prior& prior, const MarketModel& model,
                                  const RiskPremium& rp) {
    require_dimension(prior, model.n());
    return report_from_r0(prior, model, rp.value(0.0, prior_mean(prior)));
}

} // namespace bmk
