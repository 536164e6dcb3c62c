#ifndef VISGRAPH_SERIES_HPP
#define VISGRAPH_SERIES_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "visgraph/error.hpp"

namespace visgraph {

/// Ordered sequence of finite values; index i is the i-th source row.
/// `origin_index` is the source row of element 0 and `origin_date` the
/// date of source row 0 when known.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> values, std::string label = {},
             std::optional<std::string> origin_date = std::nullopt, std::size_t origin_index = 0)
      : values_(std::move(values)),
        label_(std::move(label)),
        origin_date_(std::move(origin_date)),
        origin_index_(origin_index) {
    if (values_.size() < 2) throw std::invalid_argument("TimeSeries: length must be at least 2");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw std::invalid_argument("TimeSeries: non-finite value at index " + std::to_string(i));
    }
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<std::string>& origin_date() const noexcept { return origin_date_; }
  std::size_t origin_index() const noexcept { return origin_index_; }

  friend bool operator==(const TimeSeries& a, const TimeSeries& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  std::string label_;
  std::optional<std::string> origin_date_;
  std::size_t origin_index_;
};

/// Window [start, start + length) of a series.
inline TimeSeries slice(const TimeSeries& series, std::size_t start, std::size_t length) {
  if (length < 2) throw std::invalid_argument("slice: length must be at least 2");
  if (start > series.size() || length > series.size() - start)
    throw std::out_of_range("slice: window [" + std::to_string(start) + ", " +
                            std::to_string(start + length) + ") exceeds series length " +
                            std::to_string(series.size()));
  const auto v = series.values().subspan(start, length);
  return TimeSeries(std::vector<double>(v.begin(), v.end()), series.label(), series.origin_date(),
                    series.origin_index() + start);
}

/// Column by header name or 0-based position.
using ColumnSelector = std::variant<std::string, std::size_t>;

namespace csv {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Splits one comma-separated record; double-quoted cells may contain commas.
inline std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.emplace_back(trim(cell));
  return cells;
}

inline bool all_empty(const std::vector<std::string>& cells) {
  for (const auto& c : cells)
    if (!c.empty()) return false;
  return true;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Header cells and data rows (with 1-based line numbers), all-empty rows dropped.
struct Table {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

inline Table read_table(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open input file '" + path.string() + "'");
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
      line.erase(0, 3);
    auto cells = split_row(line);
    if (all_empty(cells)) continue;
    if (header_pending) {
      table.header = std::move(cells);
      header_pending = false;
      continue;
    }
    table.rows.emplace_back(line_no, std::move(cells));
  }
  if (in.bad()) throw IngestError("read error on '" + path.string() + "'");
  return table;
}

inline std::size_t resolve_column(const Table& table, const ColumnSelector& column,
                                  const std::filesystem::path& path) {
  if (const auto* index = std::get_if<std::size_t>(&column)) return *index;
  const auto& name = std::get<std::string>(column);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i] == name) return i;
  throw IngestError("column '" + name + "' not found in header of '" + path.string() + "'");
}

}  // namespace csv

/// Reads one numeric column. The label is the header name when a header is
/// present, otherwise the file stem.
inline TimeSeries load_csv(const std::filesystem::path& path, const ColumnSelector& column,
                           bool has_header = true) {
  const auto table = csv::read_table(path, has_header);
  const auto col = csv::resolve_column(table, column, path);
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (const auto& [line_no, cells] : table.rows) {
    if (col >= cells.size())
      throw IngestError(path.string() + ": row " + std::to_string(line_no) + " has no column " +
                        std::to_string(col));
    const auto v = csv::parse_real(cells[col]);
    if (!v)
      throw IngestError(path.string() + ": row " + std::to_string(line_no) +
                        ": cannot parse '" + cells[col] + "' as a real number");
    if (!std::isfinite(*v))
      throw IngestError(path.string() + ": row " + std::to_string(line_no) + ": non-finite value");
    values.push_back(*v);
  }
  if (values.size() < 2)
    throw IngestError(path.string() + ": need at least 2 data rows, found " +
                      std::to_string(values.size()));
  std::string label = path.stem().string();
  if (has_header && col < table.header.size() && !table.header[col].empty())
    label = table.header[col];
  return TimeSeries(std::move(values), std::move(label));
}

/// Header names of the columns whose every data cell parses as a finite real.
inline std::vector<std::string> numeric_columns(const std::filesystem::path& path) {
  const auto table = csv::read_table(path, true);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    bool numeric = !table.rows.empty();
    for (const auto& [line_no, cells] : table.rows) {
      const auto v = c < cells.size() ? csv::parse_real(cells[c]) : std::nullopt;
      if (!v || !std::isfinite(*v)) {
        numeric = false;
        break;
      }
    }
    if (numeric) names.push_back(table.header[c]);
  }
  return names;
}

/// Writes `index,value` rows with 15 significant digits.
inline void write_csv(const TimeSeries& series, std::ostream& out) {
  out << "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.15g\n", i, series[i]);
    out << buf;
  }
  if (!out) throw OutputError("failed writing series CSV");
}

}  // namespace visgraph

#endif  // VISGRAPH_SERIES_HPP
