#include "bmk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace bmk {

namespace {

constexpr double kWidth = 760.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 24.0, kTop = 42.0, kBottom = 56.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Round tick step to 1/2/5 x 10^k covering the range with ~5 ticks.
double tick_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

} // namespace

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LineChart::add_series(ChartSeries series) {
    if (series.x.size() != series.y.size())
        throw std::invalid_argument("LineChart: series '" + series.name +
                                    "' has mismatched x/y lengths");
    series_.push_back(std::move(series));
}

void LineChart::write(std::ostream& out) const {
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool seen = false;
    for (const auto& s : series_)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!seen) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                seen = true;
            } else {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i]);
                y_hi = std::max(y_hi, s.y[i]);
            }
        }
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) y_hi = y_lo + 1.0;
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    const double px_w = kWidth - kLeft - kRight;
    const double px_h = kHeight - kTop - kBottom;
    auto X = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * px_w; };
    auto Y = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * px_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title_)
        << "</text>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    const double xs = tick_step(x_hi - x_lo);
    for (double v = std::ceil(x_lo / xs) * xs; v <= x_hi + 1e-9 * xs; v += xs) {
        const double px = X(v);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << kTop << "\" x2=\"" << num(px)
            << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 16
            << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    }
    const double ys = tick_step(y_hi - y_lo);
    for (double v = std::ceil(y_lo / ys) * ys; v <= y_hi + 1e-9 * ys; v += ys) {
        const double py = Y(v);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << num(py) << "\" x2=\""
            << kWidth - kRight << "\" y2=\"" << num(py) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    out << "</g>\n";

    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(x_label_) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << kHeight / 2 << ")\">" << escape(y_label_)
        << "</text>\n";

    for (std::size_t si = 0; si < series_.size(); ++si) {
        const auto& s = series_[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        std::string d;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            d += pen_down ? " L" : (d.empty() ? "M" : " M");
            d += num(X(s.x[i])) + ' ';
            d += num(Y(s.y[i]));
            pen_down = true;
        }
        if (!d.empty())
            out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.6\"/>\n";
    }

    double ly = kTop + 8.0;
    for (std::size_t si = 0; si < series_.size(); ++si) {
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        const double lx = kWidth - kRight - 170.0;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22
            << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"1.6\"/>\n";
        out << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(series_[si].name) << "</text>\n";
        ly += 16.0;
    }
    out << "</svg>\n";
}

void LineChart::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write(out);
}

} // namespace bmk
