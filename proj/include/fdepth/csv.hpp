#pragma once

// Dataset CSV: header "t_1,...,t_T[,label]", one curve per row, '.' decimal,
// comma separator. Numbers are written with %.17g so a written file parses
// back bit-exactly.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fdepth/errors.hpp"
#include "fdepth/grid.hpp"

namespace fdepth {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Dataset {
  FunctionalSample sample;
  std::vector<std::string> labels;  // empty when no label column
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  while (ptr < last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
  if (ec != std::errc() || ptr != last)
    throw ConfigError("csv parse error at row " + std::to_string(row) +
                      ", column " + std::to_string(col) + ": '" + cell + "'");
  if (!std::isfinite(v))
    throw ConfigError("csv: non-finite value at row " + std::to_string(row) +
                      ", column " + std::to_string(col));
  return v;
}

}  // namespace detail

inline Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty input");
  const auto header = detail::split_csv_line(line);
  bool has_label = !header.empty() && header.back() == "label";
  const std::size_t t = header.size() - (has_label ? 1 : 0);
  if (t < 2) throw ConfigError("csv: header must name at least 2 grid columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw ConfigError("csv: row " + std::to_string(row_no) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    std::vector<double> values(t);
    for (std::size_t k = 0; k < t; ++k)
      values[k] = detail::parse_cell(cells[k], row_no, k + 1);
    rows.push_back(std::move(values));
    if (has_label) labels.push_back(cells.back());
  }
  if (rows.empty()) throw ConfigError("csv: no data rows");

  GridPtr grid = make_grid(t);
  FunctionalSample sample(grid, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) sample.set_curve(i, rows[i]);
  return Dataset{std::move(sample), std::move(labels)};
}

inline Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset: " + path);
  return read_dataset_csv(in);
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data,
                              const std::vector<double>* depths = nullptr) {
  const std::size_t t = data.sample.grid_size();
  for (std::size_t k = 0; k < t; ++k) {
    if (k) out << ',';
    out << "t_" << (k + 1);
  }
  if (!data.labels.empty()) out << ",label";
  if (depths) out << ",depth";
  out << '\n';
  for (std::size_t i = 0; i < data.sample.size(); ++i) {
    auto c = data.sample.curve(i);
    for (std::size_t k = 0; k < t; ++k) {
      if (k) out << ',';
      out << format_double(c[k]);
    }
    if (!data.labels.empty()) out << ',' << data.labels[i];
    if (depths) out << ',' << format_double((*depths)[i]);
    out << '\n';
  }
}

}  // namespace fdepth
