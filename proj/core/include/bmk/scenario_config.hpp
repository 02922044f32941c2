#pragma once

/**
 * Scenario configuration: a small sectioned key-value text format that
 * describes assets (one-asset models with a drift prior), a sweep axis,
 * Monte Carlo settings, and output options.
 *
 * Format
 *   # comment                ; comment
 *   [asset growth]           one section per asset, label after the keyword
 *   b0 = 0.05
 *   sigma = 0.2
 *   prior = gaussian         gaussian (default) | discrete | point
 *   sigma0 = 0.4             gaussian prior standard deviation
 *   support = -0.3 0.3       discrete prior: whitespace-separated points
 *   weights = 0.5 0.5        discrete prior: matching positive weights
 *   horizon = 1.0
 *   x0 = 1.0
 *   s0 = 1.0
 *   theta = 0.01             terminal-variance budget
 *   [sweep]
 *   points = 200
 *   min = 0.0
 *   max = 1.0
 *   [mc]
 *   paths = 100000
 *   steps = 250
 *   seed = 1
 *   workers = 1
 *   stride = 10              wealth-series storage stride, in steps
 *   [output]
 *   dir = out
 *   svg = false
 *   write_paths = false      dump per-path terminal wealth from `simulate`
 *
 * Unknown sections or keys are hard errors; silent typo absorption is
 * worse than a failed run.  All errors carry the 1-based line number.
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "bmk/market_model.hpp"
#include "bmk/prior.hpp"

namespace bmk {

enum class PriorKind { gaussian, discrete, point };

struct AssetConfig {
    std::string label;
    double b0 = 0.0;
    double sigma = 0.0;
    PriorKind kind = PriorKind::gaussian;
    double sigma0 = 0.0;
    std::vector<double> support;
    std::vector<double> weights;
    double horizon = 1.0;
    double x0 = 1.0;
    double s0 = 1.0;
    double theta = 0.01;

    bool has_b0 = false;
    bool has_sigma = false;
    bool has_sigma0 = false;

    MarketModel make_model() const;
    /// Model with the horizon overridden (horizon sweeps).
    MarketModel make_model(double horizon_override) const;
    Prior make_prior() const;
};

struct SweepConfig {
    int points = 200;
    double min = 0.0;
    double max = 1.0;
    bool has_min = false;
    bool has_max = false;
};

struct McConfig {
    long paths = 100000;
    int steps = 250;
    std::uint64_t seed = 1;
    int workers = 1;
    int stride = 10;
};

struct OutputConfig {
    std::string dir = ".";
    bool svg = false;
    bool write_paths = false;
};

struct ScenarioConfig {
    std::vector<AssetConfig> assets;
    SweepConfig sweep;
    McConfig mc;
    OutputConfig output;

    const AssetConfig& single_asset(const char* command) const;
};

/// Parses the format above.  Throws config_error with a line number on
/// any malformed, unknown, or missing entry.
ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig load_scenario_config(const std::string& path);

} // namespace bmk
