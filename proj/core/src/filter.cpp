#include "bmk/filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bmk/errors.hpp"

namespace bmk {

namespace {

constexpr double kHullMargin = 1e-8;
constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 50;

void require_vector(const Eigen::VectorXd& v, int n, const char* who) {
    if (v.size() != n)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    if (!v.allFinite())
        throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

/// log weights l_i = ln pi_i + y^T sigma^{-1} V_i - V_i^T Sigma^{-1} V_i t / 2,
/// normalised to probabilities with a max shift.
Eigen::VectorXd discrete_weights(const DiscretePrior& prior, const MarketModel& model,
                                 double t, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd& V = prior.support();
    Eigen::VectorXd logw(prior.size());
    const Eigen::VectorXd siy = model.sigma_inv().transpose() * y;
    for (int i = 0; i < prior.size(); ++i) {
        const Eigen::VectorXd vi = V.col(i);
        logw(i) = std::log(prior.weights()(i)) + siy.dot(vi) -
                  0.5 * t * vi.dot(model.covariance_inv() * vi);
    }
    const double shift = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - shift).exp();
    return w / w.sum();
}

Eigen::MatrixXd discrete_covariance_from_weights(const DiscretePrior& prior,
                                                 const Eigen::VectorXd& w) {
    const Eigen::MatrixXd& V = prior.support();
    const Eigen::VectorXd mean = V * w;
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(V.rows(), V.rows());
    for (int i = 0; i < V.cols(); ++i)
        second += w(i) * V.col(i) * V.col(i).transpose();
    return second - mean * mean.transpose();
}

/// Gaussian posterior precision Sigma0^{-1} + Sigma^{-1} t, factored once.
Eigen::LLT<Eigen::MatrixXd> gaussian_precision_llt(const GaussianPrior& prior,
                                                   const MarketModel& model, double t) {
    Eigen::MatrixXd precision = prior.covariance_inv() + model.covariance_inv() * t;
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
        throw numerical_error("posterior precision matrix is not positive definite");
    return llt;
}

/// Strict-interior test for b in conv{V_i}, with a relative margin in
/// barycentric coordinates.  Exact for one asset and for simplex supports;
/// larger supports fall back to a bounding-box test, with the Newton
/// inversion acting as the final arbiter.
void require_interior(const DiscretePrior& prior, const Eigen::VectorXd& b) {
    const Eigen::MatrixXd& V = prior.support();
    const int n = static_cast<int>(V.rows());
    const int N = static_cast<int>(V.cols());

    if (n == 1) {
        const double lo = V.row(0).minCoeff();
        const double hi = V.row(0).maxCoeff();
        const double span = hi - lo;
        if (!(span > 0.0))
            throw std::domain_error("discrete support is a single point; the posterior "
                                    "mean map has empty interior");
        const double alpha = (b(0) - lo) / span;
        if (alpha < kHullMargin)
            throw std::domain_error("drift value violates the lower face of the support "
                                    "interval [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
        if (alpha > 1.0 - kHullMargin)
            throw std::domain_error("drift value violates the upper face of the support "
                                    "interval [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
        return;
    }

    if (N == n + 1) {
        Eigen::MatrixXd A(n + 1, N);
        A.topRows(n) = V;
        A.bottomRows(1).setOnes();
        Eigen::VectorXd rhs(n + 1);
        rhs.head(n) = b;
        rhs(n) = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.isInvertible()) {
            const Eigen::VectorXd lambda = lu.solve(rhs);
            for (int i = 0; i < lambda.size(); ++i)
                if (lambda(i) < kHullMargin)
                    throw std::domain_error(
                        "drift value violates the face of the support hull opposite "
                        "vertex " + std::to_string(i));
            return;
        }
    }

    for (int k = 0; k < n; ++k) {
        const double lo = V.row(k).minCoeff();
        const double hi = V.row(k).maxCoeff();
        const double pad = kHullMargin * std::max(hi - lo, 1.0);
        if (b(k) < lo + pad || b(k) > hi - pad)
            throw std::domain_error("drift component " + std::to_string(k) +
                                    " lies outside the support hull's bounding box");
    }
}

Eigen::VectorXd newton_invert(const DiscretePrior& prior, const MarketModel& model,
                              double t, const Eigen::VectorXd& b) {
    require_interior(prior, b);

    // Moment-matched Gaussian inverse as the starting point.
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(model.n());
    {
        const Eigen::MatrixXd cov0 = prior.covariance();
        Eigen::LLT<Eigen::MatrixXd> llt(cov0);
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd cov0_inv =
                llt.solve(Eigen::MatrixXd::Identity(model.n(), model.n()));
            y0 = model.sigma().transpose() *
                 ((cov0_inv + model.covariance_inv() * t) * b - cov0_inv * prior.mean());
        }
    }

    Eigen::VectorXd y = y0;
    Eigen::VectorXd w = discrete_weights(prior, model, t, y);
    Eigen::VectorXd residual = prior.support() * w - b;
    double rnorm = residual.norm();

    for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
        if (rnorm <= kNewtonTol) {
            // Polish: quadratic convergence makes extra steps nearly free and
            // pushes the composed-inverse identity towards machine precision.
            for (int extra = 0; extra < 3; ++extra) {
                const Eigen::MatrixXd jac =
                    discrete_covariance_from_weights(prior, w) *
                    model.sigma_inv().transpose();
                Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
                if (!lu.isInvertible()) break;
                const Eigen::VectorXd y_next = y - lu.solve(residual);
                const Eigen::VectorXd w_next = discrete_weights(prior, model, t, y_next);
                const Eigen::VectorXd r_next = prior.support() * w_next - b;
                if (!(r_next.norm() < rnorm)) break;
                y = y_next;
                w = w_next;
                residual = r_next;
                rnorm = residual.norm();
            }
            return y;
        }

        const Eigen::MatrixXd jac =
            discrete_covariance_from_weights(prior, w) * model.sigma_inv().transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible())
            throw numerical_error("invert_posterior_mean: posterior collapsed, the "
                                  "Jacobian of the mean map is singular");
        const Eigen::VectorXd step = lu.solve(residual);

        double damp = 1.0;
        for (int halving = 0; halving < 40; ++halving) {
            const Eigen::VectorXd y_next = y - damp * step;
            const Eigen::VectorXd w_next = discrete_weights(prior, model, t, y_next);
            const Eigen::VectorXd r_next = prior.support() * w_next - b;
            if (r_next.norm() < rnorm) {
                y = y_next;
                w = w_next;
                residual = r_next;
                rnorm = residual.norm();
                break;
            }
            damp *= 0.5;
            if (halving == 39)
                throw numerical_error("invert_posterior_mean: Newton step failed to "
                                      "reduce the residual");
        }
    }
    if (rnorm <= kNewtonTol) return y;
    throw numerical_error("invert_posterior_mean: no convergence within " +
                          std::to_string(kNewtonMaxIter) + " iterations (residual " +
                          std::to_string(rnorm) + ")");
}

} // namespace

Eigen::VectorXd observation_from_prices(const MarketModel& model, double t,
                                        const Eigen::VectorXd& prices) {
    model.require_time(t);
    require_vector(prices, model.n(), "observation_from_prices");
    if (!(prices.array() > 0.0).all())
        throw std::invalid_argument("observation_from_prices: prices must be positive");
    const Eigen::VectorXd z =
        (prices.array() / model.initial_prices().array()).log().matrix() +
        0.5 * t * model.squared_row_norms();
    return model.sigma_inv() * z;
}

Eigen::VectorXd prices_from_observation(const MarketModel& model, double t,
                                        const Eigen::VectorXd& y) {
    model.require_time(t);
    require_vector(y, model.n(), "prices_from_observation");
    const Eigen::VectorXd z = model.sigma() * y - 0.5 * t * model.squared_row_norms();
    return (model.initial_prices().array() * z.array().exp()).matrix();
}

Eigen::VectorXd posterior_mean(const Prior& prior, const MarketModel& model,
                               double t, const Eigen::VectorXd& y) {
    model.require_time(t);
    require_dimension(prior, model.n());
    require_vector(y, model.n(), "posterior_mean");
    return std::visit(
        [&](const auto& p) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>) {
                const Eigen::VectorXd rhs = p.covariance_inv() * p.mean() +
                                            model.sigma_inv().transpose() * y;
                return gaussian_precision_llt(p, model, t).solve(rhs);
            } else if constexpr (std::is_same_v<T, DiscretePrior>) {
                return p.support() * discrete_weights(p, model, t, y);
            } else {
                return p.mean();
            }
        },
        prior);
}

Eigen::MatrixXd posterior_covariance(const Prior& prior, const MarketModel& model,
                                     double t, const Eigen::VectorXd& y) {
    model.require_time(t);
    require_dimension(prior, model.n());
    require_vector(y, model.n(), "posterior_covariance");
    return std::visit(
        [&](const auto& p) -> Eigen::MatrixXd {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>) {
                return gaussian_precision_llt(p, model, t)
                    .solve(Eigen::MatrixXd::Identity(model.n(), model.n()));
            } else if constexpr (std::is_same_v<T, DiscretePrior>) {
                return discrete_covariance_from_weights(
                    p, discrete_weights(p, model, t, y));
            } else {
                return Eigen::MatrixXd::Zero(model.n(), model.n());
            }
        },
        prior);
}

Eigen::VectorXd posterior_weights(const DiscretePrior& prior, const MarketModel& model,
                                  double t, const Eigen::VectorXd& y) {
    model.require_time(t);
    require_dimension(Prior{prior}, model.n());
    require_vector(y, model.n(), "posterior_weights");
    return discrete_weights(prior, model, t, y);
}

PosteriorState posterior_state(const Prior& prior, const MarketModel& model,
                               double t, const Eigen::VectorXd& y) {
    PosteriorState state;
    state.t = t;
    state.y = y;
    state.b_hat = posterior_mean(prior, model, t, y);
    state.cov = posterior_covariance(prior, model, t, y);
    return state;
}

Eigen::MatrixXd psi(const Prior& prior, const MarketModel& model, double t,
                    const Eigen::VectorXd& b) {
    model.require_time(t);
    require_dimension(prior, model.n());
    require_vector(b, model.n(), "psi");
    return std::visit(
        [&](const auto& p) -> Eigen::MatrixXd {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>) {
                const Eigen::MatrixXd denom =
                    model.covariance() + p.covariance() * t;
                Eigen::PartialPivLU<Eigen::MatrixXd> lu(denom);
                return p.covariance() * lu.solve(model.sigma());
            } else if constexpr (std::is_same_v<T, DiscretePrior>) {
                const Eigen::VectorXd y = newton_invert(p, model, t, b);
                const Eigen::VectorXd w = discrete_weights(p, model, t, y);
                return discrete_covariance_from_weights(p, w) *
                       model.sigma_inv().transpose();
            } else {
                return Eigen::MatrixXd::Zero(model.n(), model.n());
            }
        },
        prior);
}

Eigen::VectorXd invert_posterior_mean(const Prior& prior, const MarketModel& model,
                                      double t, const Eigen::VectorXd& b) {
    model.require_time(t);
    require_dimension(prior, model.n());
    require_vector(b, model.n(), "invert_posterior_mean");
    return std::visit(
        [&](const auto& p) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPrior>) {
                return model.sigma().transpose() *
                       ((p.covariance_inv() + model.covariance_inv() * t) * b -
                        p.covariance_inv() * p.mean());
            } else if constexpr (std::is_same_v<T, DiscretePrior>) {
                return newton_invert(p, model, t, b);
            } else {
                throw std::domain_error(
                    "invert_posterior_mean: the posterior mean map of a Dirac prior "
                    "is constant and cannot be inverted");
            }
        },
        prior);
}

} // namespace bmk
