#include "bmk/market_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bmk {

namespace {
constexpr double kConditionLimit = 1e12;
}

MarketModel::MarketModel(double horizon, Eigen::MatrixXd sigma,
                         double initial_capital, Eigen::VectorXd initial_prices)
    : horizon_(horizon),
      sigma_(std::move(sigma)),
      x0_(initial_capital),
      s0_(std::move(initial_prices)) {
    finalize();
}

MarketModel::MarketModel(double horizon, double sigma, double initial_capital,
                         double initial_price)
    : horizon_(horizon),
      sigma_(Eigen::MatrixXd::Constant(1, 1, sigma)),
      x0_(initial_capital),
      s0_(Eigen::VectorXd::Constant(1, initial_price)) {
    finalize();
}

void MarketModel::finalize() {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
        throw std::invalid_argument("MarketModel: horizon must be positive and finite");
    if (sigma_.rows() == 0 || sigma_.rows() != sigma_.cols())
        throw std::invalid_argument("MarketModel: sigma must be square and non-empty");
    if (!sigma_.allFinite())
        throw std::invalid_argument("MarketModel: sigma has non-finite entries");
    if (s0_.size() != sigma_.rows())
        throw std::invalid_argument("MarketModel: initial prices dimension mismatch");
    if (!(s0_.array() > 0.0).all())
        throw std::invalid_argument("MarketModel: initial prices must be positive");
    if (!std::isfinite(x0_))
        throw std::invalid_argument("MarketModel: initial capital must be finite");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sigma_);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 0.0) || smax / smin > kConditionLimit)
        throw std::invalid_argument(
            "MarketModel: sigma is singular to working precision (condition number "
            "exceeds " + std::to_string(kConditionLimit) + ")");

    sigma_inv_ = sigma_.partialPivLu().solve(
        Eigen::MatrixXd::Identity(sigma_.rows(), sigma_.cols()));
    Sigma_ = sigma_ * sigma_.transpose();
    Sigma_inv_ = sigma_inv_.transpose() * sigma_inv_;
    row_norms2_ = sigma_.rowwise().squaredNorm();
}

double MarketModel::squared_risk_price(const Eigen::VectorXd& b) const {
    if (b.size() != sigma_.rows())
        throw std::invalid_argument("squared_risk_price: drift dimension mismatch");
    return (sigma_inv_ * b).squaredNorm();
}

void MarketModel::require_time(double t) const {
    if (!(t >= 0.0) || !(t <= horizon_))
        throw std::out_of_range("time " + std::to_string(t) +
                                " outside the trading interval [0, " +
                                std::to_string(horizon_) + "]");
}

} // namespace bmk
