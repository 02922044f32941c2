#pragma once

/**
 * Minimal numeric table with CSV emission: a metadata block of
 * '#'-prefixed key/value lines followed by a header row and data rows.
 * Values print with 17 significant digits so analytic outputs
 * round-trip bit-exactly; the metadata echoes the resolved scenario so
 * every file names the inputs that produced it.
 */

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bmk {

class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_meta(std::string key, std::string value);
    void add_meta(std::string key, double value);
    void add_meta(std::string key, long value);

    /// Appends one row; throws std::invalid_argument on width mismatch.
    void add_row(std::vector<double> values);

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return columns_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }
    double at(std::size_t row, std::size_t col) const;
    /// Column index by name; throws std::out_of_range when absent.
    std::size_t column_index(const std::string& name) const;

    void write_csv(std::ostream& out) const;
    void write_csv_file(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<double>> rows_;
};

/// Shortest decimal string that parses back to exactly `v` is not
/// required; fixed %.17g keeps files stable across platforms.
std::string format_full(double v);

} // namespace bmk
