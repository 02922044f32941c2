#include <benchmark/benchmark.h>

#include <bmk/filter.hpp>
#include <bmk/pde_solver.hpp>
#include <bmk/risk_premium.hpp>
#include <bmk/simulator.hpp>

namespace {

const bmk::MarketModel& model_1d() {
    static const bmk::MarketModel m(1.0, 0.2, 1.0);
    return m;
}

void bm_posterior_mean_gaussian(benchmark::State& state) {
    const bmk::Prior prior = bmk::GaussianPrior(0.05, 0.4);
    Eigen::VectorXd y(1);
    y << 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bmk::posterior_mean(prior, model_1d(), 0.5, y));
    }
}
BENCHMARK(bm_posterior_mean_gaussian);

void bm_posterior_mean_discrete(benchmark::State& state) {
    Eigen::MatrixXd v(1, 3);
    v << -0.1, 0.02, 0.15;
    Eigen::VectorXd w(3);
    w << 0.25, 0.4, 0.35;
    const bmk::Prior prior = bmk::DiscretePrior(v, w);
    Eigen::VectorXd y(1);
    y << 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bmk::posterior_mean(prior, model_1d(), 0.5, y));
    }
}
BENCHMARK(bm_posterior_mean_discrete);

void bm_invert_posterior_mean(benchmark::State& state) {
    Eigen::MatrixXd v(1, 3);
    v << -0.1, 0.02, 0.15;
    Eigen::VectorXd w(3);
    w << 0.25, 0.4, 0.35;
    const bmk::Prior prior = bmk::DiscretePrior(v, w);
    Eigen::VectorXd b(1);
    b << 0.08;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bmk::invert_posterior_mean(prior, model_1d(), 0.5, b));
    }
}
BENCHMARK(bm_invert_posterior_mean);

void bm_gaussian_premium_multid(benchmark::State& state) {
    Eigen::MatrixXd sigma(2, 2), cov(2, 2);
    sigma << 0.2, 0.0, 0.05, 0.3;
    cov << 0.16, 0.02, 0.02, 0.09;
    Eigen::VectorXd b0(2), s0(2);
    b0 << 0.05, 0.03;
    s0 << 1.0, 1.0;
    const bmk::MarketModel model(1.0, sigma, 1.0, s0);
    const bmk::GaussianPrior prior(b0, cov);
    for (auto _ : state) {
        // Fresh evaluator each round so the memo cache does not trivialise
        // the measurement.
        bmk::GaussianRiskPremium rp(model, prior);
        benchmark::DoNotOptimize(rp.value(0.37, b0));
    }
}
BENCHMARK(bm_gaussian_premium_multid);

void bm_pde_solve(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    bmk::PdeGridSpec spec;
    spec.n_space = n;
    spec.n_time = 5 * n;
    const bmk::Prior prior = bmk::GaussianPrior(0.05, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bmk::solve_pde_1d(model_1d(), prior, spec));
    }
}
BENCHMARK(bm_pde_solve)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_simulate_fast_kernel(benchmark::State& state) {
    const bmk::GaussianPrior gp(0.05, 0.4);
    const bmk::Prior prior = gp;
    const bmk::GaussianRiskPremium rp(model_1d(), gp);
    bmk::SimulationSpec spec;
    spec.n_paths = state.range(0);
    spec.n_steps = 250;
    spec.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bmk::simulate(prior, model_1d(), rp, spec));
    }
    state.SetItemsProcessed(state.iterations() * spec.n_paths * spec.n_steps);
}
BENCHMARK(bm_simulate_fast_kernel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void bm_simulate_generic_kernel(benchmark::State& state) {
    Eigen::MatrixXd v(1, 2);
    v << -0.15, 0.15;
    Eigen::VectorXd w(2);
    w << 0.5, 0.5;
    const bmk::Prior prior = bmk::DiscretePrior(v, w);
    const bmk::PdeRiskPremium rp(model_1d(), prior,
                                 bmk::PdeGridSpec{200, 1000});
    bmk::SimulationSpec spec;
    spec.n_paths = state.range(0);
    spec.n_steps = 250;
    spec.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bmk::simulate(prior, model_1d(), rp, spec));
    }
    state.SetItemsProcessed(state.iterations() * spec.n_paths * spec.n_steps);
}
BENCHMARK(bm_simulate_generic_kernel)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
