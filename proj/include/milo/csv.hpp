#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "milo/error.hpp"
#include "milo/json.hpp"
#include "milo/models/dataset.hpp"
#include "milo/transport.hpp"

namespace milo {

// Strictly numeric CSV: one header row of column names, then rectangular
// float64 rows. Comma separator, '.' decimal point, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string trim_ws(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

inline double parse_csv_number(const std::string& cell, std::size_t line_no) {
  const std::string t = trim_ws(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    raise(Errc::parse_failure,
          "line " + std::to_string(line_no) + ": '" + t + "' is not a number");
  return value;
}

}  // namespace detail

inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (detail::trim_ws(line).empty()) continue;
    const std::vector<std::string> cells = detail::split_csv_line(line);
    if (table.header.empty()) {
      for (const std::string& c : cells) {
        const std::string name = detail::trim_ws(c);
        if (name.empty())
          raise(Errc::parse_failure, "line 1: empty column name in header");
        table.header.push_back(name);
      }
      continue;
    }
    if (cells.size() != table.header.size())
      raise(Errc::parse_failure, "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " cells, got " +
                                     std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) row.push_back(detail::parse_csv_number(c, line_no));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) raise(Errc::parse_failure, "CSV has no header row");
  return table;
}

inline CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

inline std::string render_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const std::vector<double>& row : table.rows) {
    if (row.size() != table.header.size())
      raise(Errc::length_mismatch, "CSV row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double_pretty(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::string& path, const CsvTable& table) {
  write_file(path, render_csv(table));
}

// Splits `target` (by name) out of the table as y; remaining columns form X
// in header order. Without a target the whole table is the design matrix.
inline Dataset dataset_from_csv(const CsvTable& table,
                                const std::optional<std::string>& target = std::nullopt) {
  std::optional<std::size_t> target_idx;
  if (target) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
      if (table.header[i] == *target) target_idx = i;
    if (!target_idx)
      raise(Errc::invalid_args, "target column '" + *target + "' not in CSV header");
  }
  if (table.rows.empty()) raise(Errc::empty_dataset, "CSV has no data rows");
  const std::size_t p = table.header.size() - (target_idx ? 1 : 0);
  if (p == 0) raise(Errc::invalid_args, "CSV has no feature columns besides the target");

  std::vector<double> flat;
  flat.reserve(table.rows.size() * p);
  std::vector<double> y;
  if (target_idx) y.reserve(table.rows.size());
  for (const std::vector<double>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (target_idx && i == *target_idx)
        y.push_back(row[i]);
      else
        flat.push_back(row[i]);
    }
  }
  Tensor X = Tensor::f64(std::move(flat), {static_cast<std::int64_t>(table.rows.size()),
                                           static_cast<std::int64_t>(p)});
  if (!target_idx) return Dataset(std::move(X));
  return Dataset(std::move(X), vector_tensor(std::move(y)));
}

}  // namespace milo
