#pragma once

/**
 * Sensitivity sweeps and report generation over scenario configs: the
 * value of information as a function of drift volatility, asset Sharpe
 * ratio, time (Monte Carlo), and investment horizon, plus a one-row
 * Monte Carlo summary.  Each command yields CSV tables (with the
 * resolved scenario echoed as metadata) and an optional line chart.
 */

#include <string>
#include <vector>

#include "bmk/scenario_config.hpp"
#include "bmk/table.hpp"

namespace bmk {

struct SweepArtifact {
    std::string name; ///< file stem; files written as <dir>/<name>.csv/.svg
    Table table;
    std::string title;
    std::string x_label, y_label;
    std::string x_column;               ///< chart abscissa
    std::vector<std::string> y_columns; ///< empty: no chart for this table
};

/// Learning/non-learning Sharpe ratios and their gap as the prior
/// standard deviation runs over [sweep.min, sweep.max] (default [0,1]);
/// one artifact per configured asset.  sigma0 = 0 rows use the
/// known-drift prior, where the gap is zero.  Gaussian-prior assets only.
std::vector<SweepArtifact> sweep_sigma0(const ScenarioConfig& cfg);

/// Information value against the asset's Sharpe ratio b0/sigma as sigma
/// runs over [sweep.min, sweep.max] (default [0.01, 1]); one column per
/// asset (assets differ by prior standard deviation; b0 and horizon must
/// agree).  Rows ascend in Sharpe ratio.
std::vector<SweepArtifact> sweep_sharpe(const ScenarioConfig& cfg);

/// Monte Carlo sweep over time for a single asset: empirical learning
/// Sharpe ratio at each stored step against the analytic non-learning
/// ratio.  Both ratios are 0/0 at t = 0; rows there carry zeros and the
/// undefined_at_zero flag.
std::vector<SweepArtifact> sweep_time(const ScenarioConfig& cfg);

/// Information value against the investment horizon for each asset
/// (default range [0, 50]); a zero horizon yields zero rows since there
/// is no time to invest or learn.
std::vector<SweepArtifact> sweep_horizon(const ScenarioConfig& cfg);

/// One-row Monte Carlo summary (both strategies) for a single asset;
/// with output.write_paths, a second artifact dumps per-path terminal
/// wealth.
std::vector<SweepArtifact> simulate_summary(const ScenarioConfig& cfg);

struct ReportPreset {
    std::string name; ///< figure1 .. figure5
    ScenarioConfig config;
    std::vector<SweepArtifact> (*run)(const ScenarioConfig&);
};

/// The five bundled sensitivity studies (drift volatility for three
/// Sharpe levels, the high-Sharpe bump, Sharpe-ratio dependence, the
/// Monte Carlo time sweep, and horizon dependence).
std::vector<ReportPreset> report_presets();

/// Writes <dir>/<name>.csv (plus .svg when requested and the artifact
/// defines chart columns).  Appends a `generated` timestamp to the
/// metadata; everything else in the file is deterministic.
void write_artifact(const SweepArtifact& artifact, const OutputConfig& out);

/// Lowercased label with non-alphanumerics collapsed to single dashes.
std::string slugify(const std::string& label);

} // namespace bmk
