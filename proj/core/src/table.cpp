#include "bmk/table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bmk {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("Table: no columns");
}

void Table::add_meta(std::string key, std::string value) {
    meta_.emplace_back(std::move(key), std::move(value));
}

void Table::add_meta(std::string key, double value) {
    meta_.emplace_back(std::move(key), format_full(value));
}

void Table::add_meta(std::string key, long value) {
    meta_.emplace_back(std::move(key), std::to_string(value));
}

void Table::add_row(std::vector<double> values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("Table: row width " + std::to_string(values.size()) +
                                    " does not match " + std::to_string(columns_.size()) +
                                    " columns");
    rows_.push_back(std::move(values));
}

double Table::at(std::size_t row, std::size_t col) const {
    return rows_.at(row).at(col);
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw std::out_of_range("Table: no column named '" + name + "'");
}

void Table::write_csv(std::ostream& out) const {
    for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << columns_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_full(row[i]);
        out << "\n";
    }
}

void Table::write_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace bmk
