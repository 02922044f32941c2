/**
 * Command-line front end: sensitivity sweeps, Monte Carlo runs, and the
 * bundled report presets.  Exit codes: 0 success, 2 configuration
 * error, 3 numerical failure.
 */

#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmk/errors.hpp"
#include "bmk/scenario_config.hpp"
#include "bmk/sweeps.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    bool svg = false;
    bool has_seed = false;
    std::uint64_t seed = 0;
    long paths = 0;
    int steps = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path,
                                "scenario config file");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory (default: .)");
    cmd->add_flag("--svg", flags.svg, "also write SVG line charts");
    cmd->add_option("--seed", flags.seed, "override the Monte Carlo seed")
        ->each([&](const std::string&) { flags.has_seed = true; });
    cmd->add_option("--paths", flags.paths, "override the Monte Carlo path count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--steps", flags.steps, "override the Monte Carlo step count")
        ->check(CLI::PositiveNumber);
}

void apply_overrides(bmk::ScenarioConfig& cfg, const CommonFlags& flags) {
    if (!flags.out_dir.empty()) cfg.output.dir = flags.out_dir;
    if (flags.svg) cfg.output.svg = true;
    if (flags.has_seed) cfg.mc.seed = flags.seed;
    if (flags.paths > 0) cfg.mc.paths = flags.paths;
    if (flags.steps > 0) cfg.mc.steps = flags.steps;
}

int run_command(const CommonFlags& flags,
                std::vector<bmk::SweepArtifact> (*runner)(const bmk::ScenarioConfig&)) {
    bmk::ScenarioConfig cfg = bmk::load_scenario_config(flags.config_path);
    apply_overrides(cfg, flags);
    for (const auto& artifact : runner(cfg)) {
        bmk::write_artifact(artifact, cfg.output);
        std::printf("wrote %s/%s.csv\n", cfg.output.dir.c_str(),
                    artifact.name.c_str());
    }
    return 0;
}

int run_report_all(const CommonFlags& flags) {
    for (auto& preset : bmk::report_presets()) {
        bmk::ScenarioConfig cfg = preset.config;
        apply_overrides(cfg, flags);
        for (const auto& artifact : preset.run(cfg)) {
            bmk::write_artifact(artifact, cfg.output);
            std::printf("[%s] wrote %s/%s.csv\n", preset.name.c_str(),
                        cfg.output.dir.c_str(), artifact.name.c_str());
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian-Markowitz portfolio engine: learning vs non-learning "
                 "strategies, value of information reports"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::vector<bmk::SweepArtifact> (*runner)(const bmk::ScenarioConfig&);
    };
    const Sub subs[] = {
        {"sweep-sigma0",
         "Sharpe ratios and value of information vs drift volatility",
         &bmk::sweep_sigma0},
        {"sweep-sharpe", "value of information vs the asset's Sharpe ratio",
         &bmk::sweep_sharpe},
        {"sweep-time",
         "Monte Carlo value of information along the investment period",
         &bmk::sweep_time},
        {"sweep-horizon", "value of information vs the investment horizon",
         &bmk::sweep_horizon},
        {"simulate", "Monte Carlo summary of both strategies", &bmk::simulate_summary},
    };

    std::vector<std::unique_ptr<CommonFlags>> flag_sets;
    std::function<int()> action;

    for (const auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        flag_sets.push_back(std::make_unique<CommonFlags>());
        CommonFlags* flags = flag_sets.back().get();
        add_common(cmd, *flags, true);
        cmd->callback([&action, flags, runner = sub.runner] {
            action = [flags, runner] { return run_command(*flags, runner); };
        });
    }
    {
        auto* cmd = app.add_subcommand(
            "report-all", "regenerate all five bundled sensitivity reports");
        flag_sets.push_back(std::make_unique<CommonFlags>());
        CommonFlags* flags = flag_sets.back().get();
        add_common(cmd, *flags, false);
        cmd->callback([&action, flags] {
            action = [flags] { return run_report_all(*flags); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Command-line problems are configuration errors (exit 2); help and
        // version requests exit 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const bmk::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bmk::degenerate_model_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bmk::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
