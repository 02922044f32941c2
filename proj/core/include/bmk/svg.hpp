#pragma once

/**
 * Minimal SVG line-chart writer: axes, tick labels, one polyline per
 * series, and a legend.  Display-only output for eyeballing sweep
 * results; the CSV files are the interface of record.
 */

#include <string>
#include <vector>

namespace bmk {

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label);

    /// Non-finite points split the polyline rather than aborting.
    void add_series(ChartSeries series);

    void write(std::ostream& out) const;
    void write_file(const std::string& path) const;

private:
    std::string title_, x_label_, y_label_;
    std::vector<ChartSeries> series_;
};

} // namespace bmk
