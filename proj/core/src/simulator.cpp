#include "bmk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bmk/errors.hpp"
#include "bmk/filter.hpp"
#include "bmk/pde_solver.hpp"
#include "bmk/rng.hpp"
#include "bmk/strategy.hpp"

namespace bmk {

namespace {

constexpr double kClampBudget = 1e-3;

struct StoredIndex {
    std::vector<int> step_to_slot; ///< -1 when the step is not stored
    std::vector<double> times;
};

StoredIndex build_stored_index(const SimulationSpec& spec, double dt) {
    StoredIndex idx;
    idx.step_to_slot.assign(spec.n_steps + 1, -1);
    if (spec.series_stride > 0) {
        int slot = 0;
        for (int k = 0; k <= spec.n_steps; ++k) {
            if (k % spec.series_stride == 0 || k == spec.n_steps) {
                idx.step_to_slot[k] = slot++;
                idx.times.push_back(k * dt);
            }
        }
    }
    return idx;
}

struct RunContext {
    const Prior& prior;
    const MarketModel& model;
    const RiskPremium& rp;
    const SimulationSpec& spec;
    const StoredIndex& stored;
    PathEnsemble& out;

    double dt = 0.0;
    Eigen::VectorXd b0;
    double cushion_l = 0.0;  ///< e^{r0} / (2 lambda)
    double cushion_nl = 0.0; ///< e^{rho} / (2 lambda0)
    bool want_l = false;
    bool want_nl = false;

    // Domain clamp box (PDE-backed premium only).
    bool has_box = false;
    double box_lo = 0.0, box_hi = 0.0;
};

/// Scalar kernel for the one-asset Gaussian closed-form premium: no
/// dynamic allocation inside the path loop.
struct Gaussian1dKernel {
    double s;     ///< sigma
    double s2;    ///< sigma^2
    double prec0; ///< 1 / sigma0^2
    double b0;
    double T;

    std::vector<double> dir_coef; ///< 1/sigma^2 - 2 psi(t) M(t) / sigma per step
    std::vector<double> prec;     ///< prec0 + t / sigma^2 per step

    Gaussian1dKernel(const MarketModel& model, const GaussianPrior& prior,
                     int n_steps, double dt) {
        s = model.sigma()(0, 0);
        s2 = s * s;
        const double s02 = prior.covariance()(0, 0);
        prec0 = 1.0 / s02;
        b0 = prior.mean()(0);
        T = model.horizon();
        dir_coef.resize(n_steps + 1);
        prec.resize(n_steps + 1);
        for (int k = 0; k <= n_steps; ++k) {
            const double t = k * dt;
            const double m = (s2 + s02 * t) * (T - t) / (s2 * (s2 + s02 * (2.0 * T - t)));
            const double psi_t = s02 * s / (s2 + s02 * t);
            dir_coef[k] = 1.0 / s2 - 2.0 * psi_t * m / s;
            prec[k] = prec0 + t / s2;
        }
    }

    double posterior_mean(int k, double y) const {
        return (prec0 * b0 + y / s) / prec[k];
    }
};

void run_paths_gaussian1d(const RunContext& ctx, const Gaussian1dKernel& kern,
                          long first, long last, long& clamp_count) {
    const auto& spec = ctx.spec;
    const double dt = ctx.dt;
    const double sq_dt = std::sqrt(dt);
    const double x0 = ctx.model.initial_capital();
    const double s = kern.s;
    const double sigma0 = std::sqrt(1.0 / kern.prec0);
    const double dir_nl = kern.b0 / kern.s2;
    clamp_count = 0;

    for (long p = first; p < last; ++p) {
        NormalSampler rng(path_stream_seed(spec.seed, static_cast<std::uint64_t>(p)));
        const double b = kern.b0 + sigma0 * rng.normal();

        double xl = x0, xnl = x0, y = 0.0;
        auto store = [&](int k, double bhat) {
            const int slot = ctx.stored.step_to_slot.empty()
                                 ? -1
                                 : ctx.stored.step_to_slot[k];
            if (slot < 0) return;
            const std::size_t at =
                static_cast<std::size_t>(slot) * ctx.out.n_paths + p;
            if (ctx.want_l) ctx.out.wealth_learning[at] = xl;
            if (ctx.want_nl) ctx.out.wealth_nonlearning[at] = xnl;
            if (spec.store_drift_estimates) ctx.out.drift_estimates[at] = bhat;
        };

        store(0, kern.b0);
        for (int k = 0; k < spec.n_steps; ++k) {
            const double bhat = kern.posterior_mean(k, y);
            const double z = rng.normal();
            const double ret = b * dt + s * sq_dt * z;
            if (ctx.want_l) {
                const double a = (x0 - xl + ctx.cushion_l) * kern.dir_coef[k] * bhat;
                xl += a * ret;
            }
            if (ctx.want_nl) {
                const double a = (x0 - xnl + ctx.cushion_nl) * dir_nl;
                xnl += a * ret;
            }
            y += (b / s) * dt + sq_dt * z;
            store(k + 1, kern.posterior_mean(k + 1, y));
        }
        if (ctx.want_l) ctx.out.terminal_learning[p] = xl;
        if (ctx.want_nl) ctx.out.terminal_nonlearning[p] = xnl;
    }
}

void run_paths_generic(const RunContext& ctx, long first, long last,
                       long& clamp_count) {
    const auto& spec = ctx.spec;
    const auto& model = ctx.model;
    const int n = model.n();
    const double dt = ctx.dt;
    const double sq_dt = std::sqrt(dt);
    const double x0 = model.initial_capital();
    clamp_count = 0;

    // Prior draw machinery.
    Eigen::MatrixXd chol0;
    if (const auto* g = std::get_if<GaussianPrior>(&ctx.prior)) {
        Eigen::LLT<Eigen::MatrixXd> llt(g->covariance());
        if (llt.info() != Eigen::Success)
            throw numerical_error("simulate: prior covariance is not positive definite");
        chol0 = llt.matrixL();
    }

    const Eigen::VectorXd dir_nl = model.covariance_inv() * ctx.b0;

    Eigen::VectorXd b(n), y(n), bhat(n), z(n), dw(n), ret(n);
    for (long p = first; p < last; ++p) {
        NormalSampler rng(path_stream_seed(spec.seed, static_cast<std::uint64_t>(p)));

        // Drift draw consumes the stream first, in a fixed order.
        if (const auto* g = std::get_if<GaussianPrior>(&ctx.prior)) {
            for (int i = 0; i < n; ++i) z(i) = rng.normal();
            b = g->mean() + chol0 * z;
        } else if (const auto* d = std::get_if<DiscretePrior>(&ctx.prior)) {
            const double u = rng.uniform();
            double acc = 0.0;
            int pick = d->size() - 1;
            for (int i = 0; i < d->size(); ++i) {
                acc += d->weights()(i);
                if (u <= acc) {
                    pick = i;
                    break;
                }
            }
            b = d->support().col(pick);
        } else {
            b = std::get<DiracPrior>(ctx.prior).mean();
        }

        double xl = x0, xnl = x0;
        y.setZero();
        bhat = ctx.b0;

        auto store = [&](int k) {
            const int slot = ctx.stored.step_to_slot.empty()
                                 ? -1
                                 : ctx.stored.step_to_slot[k];
            if (slot < 0) return;
            const std::size_t at =
                static_cast<std::size_t>(slot) * ctx.out.n_paths + p;
            if (ctx.want_l) ctx.out.wealth_learning[at] = xl;
            if (ctx.want_nl) ctx.out.wealth_nonlearning[at] = xnl;
            if (spec.store_drift_estimates) ctx.out.drift_estimates[at] = bhat(0);
        };

        store(0);
        for (int k = 0; k < spec.n_steps; ++k) {
            const double t = k * dt;
            bhat = posterior_mean(ctx.prior, model, t, y);
            if (ctx.has_box) {
                for (int i = 0; i < n; ++i) {
                    if (bhat(i) < ctx.box_lo) {
                        bhat(i) = ctx.box_lo;
                        ++clamp_count;
                    } else if (bhat(i) > ctx.box_hi) {
                        bhat(i) = ctx.box_hi;
                        ++clamp_count;
                    }
                }
            }

            for (int i = 0; i < n; ++i) z(i) = rng.normal();
            dw = sq_dt * z;
            ret = b * dt + model.sigma() * dw;

            if (ctx.want_l) {
                const Eigen::VectorXd direction =
                    model.covariance_inv() * bhat -
                    (ctx.rp.psi(t, bhat) * model.sigma_inv()).transpose() *
                        ctx.rp.gradient(t, bhat);
                const double cushion = x0 - xl + ctx.cushion_l;
                xl += cushion * direction.dot(ret);
            }
            if (ctx.want_nl) {
                const double cushion = x0 - xnl + ctx.cushion_nl;
                xnl += cushion * dir_nl.dot(ret);
            }
            y += model.sigma_inv() * b * dt + dw;

            if (ctx.stored.step_to_slot.empty() ||
                ctx.stored.step_to_slot[k + 1] >= 0) {
                bhat = posterior_mean(ctx.prior, model, (k + 1) * dt, y);
                store(k + 1);
            }
        }
        if (ctx.want_l) ctx.out.terminal_learning[p] = xl;
        if (ctx.want_nl) ctx.out.terminal_nonlearning[p] = xnl;
    }
}

} // namespace

PathEnsemble simulate(const Prior& prior, const MarketModel& model,
                      const RiskPremium& rp, const SimulationSpec& spec) {
    require_dimension(prior, model.n());
    if (spec.n_paths < 1) throw config_error("simulate: n_paths must be positive");
    if (spec.n_steps < 1) throw config_error("simulate: n_steps must be positive");
    if (spec.n_workers < 1) throw config_error("simulate: n_workers must be positive");
    if (spec.series_stride < 0)
        throw config_error("simulate: series_stride must be non-negative");

    PathEnsemble out;
    out.n_paths = spec.n_paths;
    out.dt = model.horizon() / spec.n_steps;
    out.theta = spec.theta;

    const Eigen::VectorXd b0 = prior_mean(prior);
    out.r0 = rp.value(0.0, b0);
    out.lambda_learning = lambda_for_budget(spec.theta, out.r0);
    out.lambda_nonlearning = nonlearning_lambda(model, b0, spec.theta);

    const double rho = model.squared_risk_price(b0) * model.horizon();

    RunContext ctx{prior, model, rp, spec, build_stored_index(spec, out.dt), out};
    ctx.dt = out.dt;
    ctx.b0 = b0;
    ctx.cushion_l = std::exp(out.r0) / (2.0 * out.lambda_learning);
    ctx.cushion_nl = std::exp(rho) / (2.0 * out.lambda_nonlearning);
    ctx.want_l = spec.mode != StrategyMode::nonlearning;
    ctx.want_nl = spec.mode != StrategyMode::learning;

    if (const auto* pde = dynamic_cast<const PdeRiskPremium*>(&rp)) {
        ctx.has_box = true;
        ctx.box_lo = pde->grid().b_min();
        ctx.box_hi = pde->grid().b_max();
    }
    if (const auto* gauss = dynamic_cast<const GaussianRiskPremium*>(&rp);
        gauss && model.n() > 1) {
        std::vector<double> times(spec.n_steps + 1);
        for (int k = 0; k <= spec.n_steps; ++k) times[k] = k * out.dt;
        gauss->warm_cache(times);
    }

    out.series_times = ctx.stored.times;
    const std::size_t slots = ctx.stored.times.size();
    if (ctx.want_l) {
        out.terminal_learning.resize(spec.n_paths);
        out.wealth_learning.resize(slots * spec.n_paths);
    }
    if (ctx.want_nl) {
        out.terminal_nonlearning.resize(spec.n_paths);
        out.wealth_nonlearning.resize(slots * spec.n_paths);
    }
    if (spec.store_drift_estimates) out.drift_estimates.resize(slots * spec.n_paths);

    const bool fast = model.n() == 1 && std::holds_alternative<GaussianPrior>(prior) &&
                      dynamic_cast<const GaussianRiskPremium*>(&rp) != nullptr;

    const int workers = static_cast<int>(
        std::min<long>(spec.n_workers, std::max<long>(1, spec.n_paths)));
    std::vector<long> clamp_counts(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = (spec.n_paths + workers - 1) / workers;

    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        const long first = w * chunk;
        const long last = std::min<long>(spec.n_paths, first + chunk);
        if (first >= last) break;
        pool.emplace_back([&, w, first, last] {
            try {
                if (fast) {
                    const Gaussian1dKernel kern(model,
                                                std::get<GaussianPrior>(prior),
                                                spec.n_steps, ctx.dt);
                    run_paths_gaussian1d(ctx, kern, first, last, clamp_counts[w]);
                } else {
                    run_paths_generic(ctx, first, last, clamp_counts[w]);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    for (long c : clamp_counts) out.clamp_count += c;
    out.total_filter_steps =
        static_cast<long>(spec.n_paths) * static_cast<long>(spec.n_steps);
    if (out.clamp_count >
        static_cast<long>(kClampBudget * static_cast<double>(out.total_filter_steps)))
        throw numerical_error(
            "simulate: drift estimate left the premium evaluator's domain on more "
            "than 0.1% of steps; enlarge the grid domain");
    return out;
}

SharpeEstimate empirical_sharpe(std::span<const double> wealth, double x0) {
    const std::size_t n = wealth.size();
    if (n < 2)
        throw std::invalid_argument("empirical_sharpe: need at least two values");
    double mean = 0.0;
    for (double v : wealth) mean += v;
    mean /= static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : wealth) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double var_unbiased = m2 / static_cast<double>(n - 1);
    if (!(var_unbiased > 0.0))
        throw std::invalid_argument("empirical_sharpe: zero dispersion");
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    SharpeEstimate est;
    est.value = (mean - x0) / std::sqrt(var_unbiased);
    // Delta-method variance with sample skewness and kurtosis
    // (normal-distribution special case: (1 + Sh^2/2) / n).
    const double sk = m3 / std::pow(m2, 1.5);
    const double ku = m4 / (m2 * m2);
    const double v = 1.0 - sk * est.value + 0.25 * (ku - 1.0) * est.value * est.value;
    est.std_error = std::sqrt(std::max(v, 0.0) / static_cast<double>(n));
    return est;
}

MomentSummary ensemble_moments(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2)
        throw std::invalid_argument("ensemble_moments: need at least two values");
    MomentSummary s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    s.variance = m2 / static_cast<double>(n - 1);
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    s.se_mean = std::sqrt(s.variance / static_cast<double>(n));
    const double var_of_var =
        (m4 - m2 * m2 * (static_cast<double>(n) - 3.0) / (static_cast<double>(n) - 1.0)) /
        static_cast<double>(n);
    s.se_variance = std::sqrt(std::max(var_of_var, 0.0));
    return s;
}

} // namespace bmk
