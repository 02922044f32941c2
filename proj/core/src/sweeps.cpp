#include "bmk/sweeps.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <memory>

#include "bmk/errors.hpp"
#include "bmk/pde_solver.hpp"
#include "bmk/performance.hpp"
#include "bmk/risk_premium.hpp"
#include "bmk/simulator.hpp"
#include "bmk/strategy.hpp"
#include "bmk/svg.hpp"

namespace bmk {

namespace {

std::vector<double> uniform_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    g.back() = hi;
    return g;
}

const char* kind_name(PriorKind k) {
    switch (k) {
        case PriorKind::gaussian: return "gaussian";
        case PriorKind::discrete: return "discrete";
        case PriorKind::point: return "point";
    }
    return "?";
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_full(v[i]);
    }
    return out;
}

void echo_asset(Table& t, const AssetConfig& a, const std::string& prefix) {
    t.add_meta(prefix + "label", a.label);
    t.add_meta(prefix + "b0", a.b0);
    if (a.has_sigma) t.add_meta(prefix + "sigma", a.sigma);
    t.add_meta(prefix + "prior", kind_name(a.kind));
    if (a.has_sigma0) t.add_meta(prefix + "sigma0", a.sigma0);
    if (!a.support.empty()) t.add_meta(prefix + "support", join(a.support));
    if (!a.weights.empty()) t.add_meta(prefix + "weights", join(a.weights));
    t.add_meta(prefix + "horizon", a.horizon);
    t.add_meta(prefix + "x0", a.x0);
    t.add_meta(prefix + "s0", a.s0);
    t.add_meta(prefix + "theta", a.theta);
}

void echo_sweep(Table& t, const std::string& axis, double lo, double hi, int points) {
    t.add_meta("sweep.axis", axis);
    t.add_meta("sweep.min", lo);
    t.add_meta("sweep.max", hi);
    t.add_meta("sweep.points", static_cast<long>(points));
}

void echo_mc(Table& t, const McConfig& mc) {
    t.add_meta("mc.paths", mc.paths);
    t.add_meta("mc.steps", static_cast<long>(mc.steps));
    t.add_meta("mc.seed", static_cast<long>(mc.seed));
    t.add_meta("mc.workers", static_cast<long>(mc.workers));
    t.add_meta("mc.stride", static_cast<long>(mc.stride));
}

void require_gaussian(const AssetConfig& a, const char* command) {
    if (a.kind != PriorKind::gaussian)
        throw config_error(std::string(command) + ": asset '" + a.label +
                           "' must use prior = gaussian");
}

std::unique_ptr<RiskPremium> make_risk_premium(const Prior& prior,
                                               const MarketModel& model) {
    if (const auto* g = std::get_if<GaussianPrior>(&prior))
        return std::make_unique<GaussianRiskPremium>(model, *g);
    if (std::holds_alternative<DiscretePrior>(prior))
        return std::make_unique<PdeRiskPremium>(model, prior);
    return std::make_unique<ConstantDriftRiskPremium>(model, prior_mean(prior));
}

SharpeReport report_at(const AssetConfig& asset, const MarketModel& model,
                       double sigma0) {
    const Prior prior = sigma0 > 0.0 ? Prior(GaussianPrior(asset.b0, sigma0))
                                     : Prior(DiracPrior(asset.b0));
    return value_of_information(prior, model);
}

} // namespace

std::string slugify(const std::string& label) {
    std::string out;
    for (char c : label) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u))
            out += static_cast<char>(std::tolower(u));
        else if (!out.empty() && out.back() != '-')
            out += '-';
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out.empty() ? "asset" : out;
}

std::vector<SweepArtifact> sweep_sigma0(const ScenarioConfig& cfg) {
    if (cfg.assets.empty())
        throw config_error("sweep-sigma0: no [asset] sections configured");
    const double lo = cfg.sweep.has_min ? cfg.sweep.min : 0.0;
    const double hi = cfg.sweep.has_max ? cfg.sweep.max : 1.0;
    if (lo < 0.0) throw config_error("sweep-sigma0: min must be non-negative");
    const auto grid = uniform_grid(lo, hi, cfg.sweep.points);

    std::vector<SweepArtifact> artifacts;
    for (const auto& asset : cfg.assets) {
        require_gaussian(asset, "sweep-sigma0");
        const MarketModel model = asset.make_model();

        Table t({"sigma0", "sh_learning", "sh_nonlearning", "value_of_information"});
        t.add_meta("command", "sweep-sigma0");
        echo_asset(t, asset, "asset.");
        echo_sweep(t, "sigma0", lo, hi, cfg.sweep.points);
        for (double s0 : grid) {
            const SharpeReport rep = report_at(asset, model, s0);
            t.add_row({s0, rep.sh_learning, rep.sh_nonlearning,
                       rep.value_of_information});
        }

        SweepArtifact art{"sweep-sigma0-" + slugify(asset.label),
                          std::move(t),
                          "Sharpe ratios vs drift volatility (" + asset.label + ")",
                          "sigma0",
                          "Sharpe ratio",
                          "sigma0",
                          {"sh_learning", "sh_nonlearning", "value_of_information"}};
        artifacts.push_back(std::move(art));
    }
    return artifacts;
}

std::vector<SweepArtifact> sweep_sharpe(const ScenarioConfig& cfg) {
    if (cfg.assets.empty())
        throw config_error("sweep-sharpe: no [asset] sections configured");
    const double lo = cfg.sweep.has_min ? cfg.sweep.min : 0.01;
    const double hi = cfg.sweep.has_max ? cfg.sweep.max : 1.0;
    if (lo <= 0.0) throw config_error("sweep-sharpe: min (volatility) must be positive");

    const AssetConfig& head = cfg.assets.front();
    if (head.b0 == 0.0)
        throw config_error("sweep-sharpe: b0 must be nonzero");
    std::vector<std::string> columns{"asset_sharpe", "sigma"};
    for (const auto& asset : cfg.assets) {
        require_gaussian(asset, "sweep-sharpe");
        if (!asset.has_sigma0)
            throw config_error("sweep-sharpe: asset '" + asset.label +
                               "' needs sigma0");
        if (asset.b0 != head.b0 || asset.horizon != head.horizon)
            throw config_error("sweep-sharpe: assets must share b0 and horizon");
        columns.push_back("vi_" + slugify(asset.label));
    }

    Table t(std::move(columns));
    t.add_meta("command", "sweep-sharpe");
    for (std::size_t i = 0; i < cfg.assets.size(); ++i)
        echo_asset(t, cfg.assets[i], "asset" + std::to_string(i + 1) + ".");
    echo_sweep(t, "sigma", lo, hi, cfg.sweep.points);

    // Descending volatility makes the Sharpe ratio b0/sigma ascend.
    auto grid = uniform_grid(lo, hi, cfg.sweep.points);
    std::vector<std::string> y_cols;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        const double sigma = *it;
        std::vector<double> row{head.b0 / sigma, sigma};
        for (const auto& asset : cfg.assets) {
            AssetConfig probe = asset;
            probe.sigma = sigma;
            probe.has_sigma = true;
            const MarketModel model = probe.make_model();
            row.push_back(report_at(probe, model, probe.sigma0).value_of_information);
        }
        t.add_row(std::move(row));
    }
    for (const auto& asset : cfg.assets) y_cols.push_back("vi_" + slugify(asset.label));

    SweepArtifact art{"sweep-sharpe",
                      std::move(t),
                      "Value of information vs asset Sharpe ratio",
                      "asset Sharpe ratio b0/sigma",
                      "value of information",
                      "asset_sharpe",
                      std::move(y_cols)};
    std::vector<SweepArtifact> out;
    out.push_back(std::move(art));
    return out;
}

std::vector<SweepArtifact> sweep_time(const ScenarioConfig& cfg) {
    const AssetConfig& asset = cfg.single_asset("sweep-time");
    if (cfg.mc.stride < 1)
        throw config_error("sweep-time: mc stride must be positive");
    const MarketModel model = asset.make_model();
    const Prior prior = asset.make_prior();
    const auto rp = make_risk_premium(prior, model);

    SimulationSpec spec;
    spec.n_paths = cfg.mc.paths;
    spec.n_steps = cfg.mc.steps;
    spec.seed = cfg.mc.seed;
    spec.n_workers = cfg.mc.workers;
    spec.series_stride = cfg.mc.stride;
    spec.mode = StrategyMode::learning;
    spec.theta = asset.theta;
    const PathEnsemble sim = simulate(prior, model, *rp, spec);

    Table t({"t", "sharpe_learning_mc", "sharpe_learning_mc_se", "sharpe_nonlearning",
             "value_of_information", "undefined_at_zero"});
    t.add_meta("command", "sweep-time");
    echo_asset(t, asset, "asset.");
    echo_mc(t, cfg.mc);
    t.add_meta("r0", sim.r0);
    t.add_meta("lambda_learning", sim.lambda_learning);
    t.add_meta("lambda_nonlearning", sim.lambda_nonlearning);

    for (std::size_t k = 0; k < sim.series_times.size(); ++k) {
        const double time = sim.series_times[k];
        if (time == 0.0) {
            // Both ratios are 0/0 at t = 0; report zero and flag the row.
            t.add_row({0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
            continue;
        }
        const SharpeEstimate est =
            empirical_sharpe(sim.learning_at(static_cast<int>(k)),
                             model.initial_capital());
        const double snl = sharpe_nonlearning_at(prior, model, time);
        t.add_row({time, est.value, est.std_error, snl, est.value - snl, 0.0});
    }

    SweepArtifact art{"sweep-time-" + slugify(asset.label),
                      std::move(t),
                      "Value of information over time (" + asset.label + ")",
                      "t",
                      "Sharpe ratio",
                      "t",
                      {"sharpe_learning_mc", "sharpe_nonlearning",
                       "value_of_information"}};
    std::vector<SweepArtifact> out;
    out.push_back(std::move(art));
    return out;
}

std::vector<SweepArtifact> sweep_horizon(const ScenarioConfig& cfg) {
    if (cfg.assets.empty())
        throw config_error("sweep-horizon: no [asset] sections configured");
    const double lo = cfg.sweep.has_min ? cfg.sweep.min : 0.0;
    const double hi = cfg.sweep.has_max ? cfg.sweep.max : 50.0;
    if (lo < 0.0) throw config_error("sweep-horizon: min must be non-negative");

    std::vector<std::string> columns{"horizon"};
    for (const auto& asset : cfg.assets) {
        require_gaussian(asset, "sweep-horizon");
        if (!asset.has_sigma0)
            throw config_error("sweep-horizon: asset '" + asset.label +
                               "' needs sigma0");
        columns.push_back("vi_" + slugify(asset.label));
    }

    Table t(std::move(columns));
    t.add_meta("command", "sweep-horizon");
    for (std::size_t i = 0; i < cfg.assets.size(); ++i)
        echo_asset(t, cfg.assets[i], "asset" + std::to_string(i + 1) + ".");
    echo_sweep(t, "horizon", lo, hi, cfg.sweep.points);

    for (double T : uniform_grid(lo, hi, cfg.sweep.points)) {
        std::vector<double> row{T};
        for (const auto& asset : cfg.assets) {
            if (T <= 0.0) {
                // No time to invest or learn: both ratios are zero.
                row.push_back(0.0);
                continue;
            }
            const MarketModel model = asset.make_model(T);
            row.push_back(report_at(asset, model, asset.sigma0).value_of_information);
        }
        t.add_row(std::move(row));
    }

    std::vector<std::string> y_cols;
    for (const auto& asset : cfg.assets) y_cols.push_back("vi_" + slugify(asset.label));
    SweepArtifact art{"sweep-horizon",
                      std::move(t),
                      "Value of information vs investment horizon",
                      "horizon T",
                      "value of information",
                      "horizon",
                      std::move(y_cols)};
    std::vector<SweepArtifact> out;
    out.push_back(std::move(art));
    return out;
}

std::vector<SweepArtifact> simulate_summary(const ScenarioConfig& cfg) {
    const AssetConfig& asset = cfg.single_asset("simulate");
    const MarketModel model = asset.make_model();
    const Prior prior = asset.make_prior();
    const auto rp = make_risk_premium(prior, model);

    SimulationSpec spec;
    spec.n_paths = cfg.mc.paths;
    spec.n_steps = cfg.mc.steps;
    spec.seed = cfg.mc.seed;
    spec.n_workers = cfg.mc.workers;
    spec.series_stride = 0;
    spec.mode = StrategyMode::both;
    spec.theta = asset.theta;
    const PathEnsemble sim = simulate(prior, model, *rp, spec);

    const double x0 = model.initial_capital();
    const SharpeEstimate sh_l = empirical_sharpe(sim.terminal_learning, x0);
    const SharpeEstimate sh_nl = empirical_sharpe(sim.terminal_nonlearning, x0);
    const MomentSummary mom_l = ensemble_moments(sim.terminal_learning);
    const MomentSummary mom_nl = ensemble_moments(sim.terminal_nonlearning);
    const WealthMoments nl_exact =
        nl_wealth_moments(prior, model, asset.theta, model.horizon());
    const double sh_l_exact = sharpe_learning(sim.r0);
    const double sh_nl_exact = sharpe_nonlearning(prior, model);

    Table t({"theta",
             "r0",
             "lambda_learning",
             "lambda_nonlearning",
             "sh_learning_analytic",
             "sh_nonlearning_analytic",
             "sh_learning_mc",
             "sh_learning_mc_se",
             "sh_nonlearning_mc",
             "sh_nonlearning_mc_se",
             "mean_learning_mc",
             "mean_learning_mc_se",
             "var_learning_mc",
             "var_learning_mc_se",
             "mean_learning_analytic",
             "mean_nonlearning_mc",
             "var_nonlearning_mc",
             "mean_nonlearning_analytic",
             "var_nonlearning_analytic",
             "clamped_steps",
             "total_steps"});
    t.add_meta("command", "simulate");
    echo_asset(t, asset, "asset.");
    echo_mc(t, cfg.mc);
    t.add_row({asset.theta, sim.r0, sim.lambda_learning, sim.lambda_nonlearning,
               sh_l_exact, sh_nl_exact, sh_l.value, sh_l.std_error, sh_nl.value,
               sh_nl.std_error, mom_l.mean, mom_l.se_mean, mom_l.variance,
               mom_l.se_variance,
               expected_optimal_terminal_wealth(model, sim.r0, sim.lambda_learning),
               mom_nl.mean, mom_nl.variance, nl_exact.mean, nl_exact.variance,
               static_cast<double>(sim.clamp_count),
               static_cast<double>(sim.total_filter_steps)});

    std::vector<SweepArtifact> out;
    out.push_back(SweepArtifact{"simulate-" + slugify(asset.label), std::move(t),
                                "", "", "", "", {}});

    if (cfg.output.write_paths) {
        Table paths({"path", "terminal_learning", "terminal_nonlearning"});
        paths.add_meta("command", "simulate (per-path terminal wealth)");
        echo_asset(paths, asset, "asset.");
        echo_mc(paths, cfg.mc);
        for (long p = 0; p < sim.n_paths; ++p)
            paths.add_row({static_cast<double>(p), sim.terminal_learning[p],
                           sim.terminal_nonlearning[p]});
        out.push_back(SweepArtifact{"simulate-" + slugify(asset.label) + "-paths",
                                    std::move(paths), "", "", "", "", {}});
    }
    return out;
}

std::vector<ReportPreset> report_presets() {
    auto gaussian_asset = [](std::string label, double b0, double sigma,
                             double sigma0) {
        AssetConfig a;
        a.label = std::move(label);
        a.b0 = b0;
        a.has_b0 = true;
        if (sigma > 0.0) {
            a.sigma = sigma;
            a.has_sigma = true;
        }
        if (sigma0 > 0.0) {
            a.sigma0 = sigma0;
            a.has_sigma0 = true;
        }
        return a;
    };

    std::vector<ReportPreset> presets;

    {
        ScenarioConfig cfg;
        cfg.assets = {gaussian_asset("Asset 1", 0.05, 0.05, 0.0),
                      gaussian_asset("Asset 2", 0.05, 0.10, 0.0),
                      gaussian_asset("Asset 3", 0.05, 0.20, 0.0)};
        cfg.sweep = {200, 0.0, 1.0, true, true};
        presets.push_back({"figure1", std::move(cfg), &sweep_sigma0});
    }
    {
        ScenarioConfig cfg;
        cfg.assets = {gaussian_asset("Asset 4", 0.10, 0.05, 0.0)};
        cfg.sweep = {512, 0.0, 0.30, true, true};
        presets.push_back({"figure2", std::move(cfg), &sweep_sigma0});
    }
    {
        ScenarioConfig cfg;
        cfg.assets = {gaussian_asset("Asset 5", 0.05, 0.0, 0.75),
                      gaussian_asset("Asset 6", 0.05, 0.0, 0.35),
                      gaussian_asset("Asset 7", 0.05, 0.0, 0.10)};
        cfg.sweep = {200, 0.01, 1.0, true, true};
        presets.push_back({"figure3", std::move(cfg), &sweep_sharpe});
    }
    {
        ScenarioConfig cfg;
        cfg.assets = {gaussian_asset("Asset 8", 0.05, 0.20, 0.40)};
        cfg.mc = {100000, 250, 1, 1, 10};
        presets.push_back({"figure4", std::move(cfg), &sweep_time});
    }
    {
        ScenarioConfig cfg;
        cfg.assets = {gaussian_asset("Asset 9", 0.05, 0.20, 0.75),
                      gaussian_asset("Asset 10", 0.05, 0.20, 0.35),
                      gaussian_asset("Asset 11", 0.05, 0.20, 0.10)};
        cfg.sweep = {200, 0.0, 50.0, true, true};
        presets.push_back({"figure5", std::move(cfg), &sweep_horizon});
    }
    return presets;
}

void write_artifact(const SweepArtifact& artifact, const OutputConfig& out) {
    namespace fs = std::filesystem;
    if (!out.dir.empty()) fs::create_directories(out.dir);
    const fs::path base = fs::path(out.dir) / artifact.name;

    Table stamped = artifact.table;
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    stamped.add_meta("generated", std::string(buf));
    stamped.write_csv_file((base.string() + ".csv"));

    if (out.svg && !artifact.y_columns.empty()) {
        LineChart chart(artifact.title, artifact.x_label, artifact.y_label);
        const auto& table = artifact.table;
        const std::size_t xi = table.column_index(artifact.x_column);
        for (const auto& yc : artifact.y_columns) {
            const std::size_t yi = table.column_index(yc);
            ChartSeries s;
            s.name = yc;
            s.x.reserve(table.n_rows());
            s.y.reserve(table.n_rows());
            for (std::size_t r = 0; r < table.n_rows(); ++r) {
                s.x.push_back(table.at(r, xi));
                s.y.push_back(table.at(r, yi));
            }
            chart.add_series(std::move(s));
        }
        chart.write_file(base.string() + ".svg");
    }
}

} // namespace bmk
