#include "bmk/prior.hpp"

#include <cmath>
#include <stdexcept>

namespace bmk {

namespace {
constexpr double kWeightSumTol = 1e-12;

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, const char* who) {
    if (a.rows() != a.cols() || !a.allFinite() ||
        !a.isApprox(a.transpose(), 1e-12))
        throw std::invalid_argument(std::string(who) + ": covariance must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument(std::string(who) +
                                    ": covariance must be positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}
} // namespace

GaussianPrior::GaussianPrior(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
    if (mean_.size() == 0 || cov_.rows() != mean_.size())
        throw std::invalid_argument("GaussianPrior: dimension mismatch");
    if (!mean_.allFinite())
        throw std::invalid_argument("GaussianPrior: mean has non-finite entries");
    cov_inv_ = spd_inverse(cov_, "GaussianPrior");
}

GaussianPrior::GaussianPrior(double mean, double sigma0)
    : GaussianPrior(Eigen::VectorXd::Constant(1, mean),
                    Eigen::MatrixXd::Constant(1, 1, sigma0 * sigma0)) {
    if (!(sigma0 > 0.0))
        throw std::invalid_argument("GaussianPrior: sigma0 must be positive");
}

DiscretePrior::DiscretePrior(Eigen::MatrixXd support, Eigen::VectorXd weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.rows() == 0 || support_.cols() == 0)
        throw std::invalid_argument("DiscretePrior: empty support");
    if (weights_.size() != support_.cols())
        throw std::invalid_argument("DiscretePrior: one weight per support point required");
    if (!support_.allFinite() || !weights_.allFinite())
        throw std::invalid_argument("DiscretePrior: non-finite parameters");
    if (!(weights_.array() > 0.0).all())
        throw std::invalid_argument("DiscretePrior: weights must be strictly positive");
    if (std::abs(weights_.sum() - 1.0) > kWeightSumTol)
        throw std::invalid_argument("DiscretePrior: weights must sum to one");
    // Positive-definite prior covariance: the support must affinely span
    // the drift space (this also forces more points than dimensions).
    Eigen::LLT<Eigen::MatrixXd> llt(covariance());
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument(
            "DiscretePrior: support points must span the drift space "
            "(prior covariance is not positive definite)");
}

Eigen::VectorXd DiscretePrior::mean() const { return support_ * weights_; }

Eigen::MatrixXd DiscretePrior::covariance() const {
    const Eigen::VectorXd m = mean();
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(support_.rows(), support_.rows());
    for (int i = 0; i < support_.cols(); ++i)
        second += weights_(i) * support_.col(i) * support_.col(i).transpose();
    return second - m * m.transpose();
}

DiracPrior::DiracPrior(Eigen::VectorXd point) : point_(std::move(point)) {
    if (point_.size() == 0 || !point_.allFinite())
        throw std::invalid_argument("DiracPrior: point must be finite and non-empty");
}

DiracPrior::DiracPrior(double point)
    : DiracPrior(Eigen::VectorXd::Constant(1, point)) {}

int prior_dimension(const Prior& prior) {
    return std::visit(
        [](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DiscretePrior>)
                return static_cast<int>(p.support().rows());
            else
                return static_cast<int>(p.mean().size());
        },
        prior);
}

Eigen::VectorXd prior_mean(const Prior& prior) {
    return std::visit([](const auto& p) -> Eigen::VectorXd { return p.mean(); }, prior);
}

Eigen::MatrixXd prior_covariance(const Prior& prior) {
    return std::visit(
        [](const auto& p) -> Eigen::MatrixXd {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>)
                return p.covariance();
            else if constexpr (std::is_same_v<T, DiscretePrior>)
                return p.covariance();
            else
                return Eigen::MatrixXd::Zero(p.mean().size(), p.mean().size());
        },
        prior);
}

void require_dimension(const Prior& prior, int n) {
    if (prior_dimension(prior) != n)
        throw std::invalid_argument("prior dimension does not match the market model");
}

} // namespace bmk
