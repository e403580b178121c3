#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace lballs {

/// 12 significant digits, '.' decimal separator, locale independent.
std::string format_number(double value);

/// Current UTC time as YYYY-MM-DDThh:mm:ssZ.
std::string iso8601_now();

using Cell = std::variant<std::string, double>;

/// A header plus rows; rendered as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::logic_error when the row width differs from the header.
  void add(std::vector<Cell> row);
};

/// '\n' line endings, header row first. Cells containing ',', '"' or a
/// newline are quoted.
void write_csv(std::ostream& out, const Table& table);

/// Numbers are emitted as JSON numbers rounded to 12 significant digits.
void write_json(std::ostream& out, const Table& table);

/// Parses output of write_json back into a table (numbers as doubles).
Table read_json(std::istream& in);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line chart with axes, tick labels and a legend.
void write_svg_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<Series>& series);

/// Flat `key = value` file; '#' starts a comment, blank lines are ignored.
/// Throws std::runtime_error on unreadable files or lines without '='.
std::map<std::string, std::string> load_config(const std::string& path);

}  // namespace lballs
