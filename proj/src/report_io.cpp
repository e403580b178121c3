#include "lballs/report_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace lballs {

std::string format_number(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0.0 ? "inf" : "-inf";
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
  return std::string(buffer, result.ptr);
}

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) {
    throw std::logic_error("Table: row width does not match header");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* number = std::get_if<double>(&cell)) {
    return format_number(*number);
  }
  return std::get<std::string>(cell);
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) {
    return text;
  }
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') {
      out += '"';
    }
    out += ch;
  }
  out += '"';
  return out;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << csv_escape(table.header[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  // Numbers are written as their 12-digit text so the JSON matches the CSV.
  auto quoted = [](const std::string& text) { return nlohmann::json(text).dump(); };
  out << "{\n  \"columns\": [";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? ", " : "") << quoted(table.header[i]);
  }
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? "," : "") << "\n    {";
    const auto& row = table.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? ", " : "") << quoted(table.header[i]) << ": ";
      if (const auto* number = std::get_if<double>(&row[i])) {
        out << (std::isfinite(*number) ? format_number(*number) : "null");
      } else {
        out << quoted(std::get<std::string>(row[i]));
      }
    }
    out << "}";
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

Table read_json(std::istream& in) {
  const nlohmann::json doc = nlohmann::json::parse(in);
  Table table;
  table.header = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& object : doc.at("rows")) {
    std::vector<Cell> row;
    for (const auto& name : table.header) {
      const auto& value = object.at(name);
      if (value.is_number()) {
        row.emplace_back(value.get<double>());
      } else if (value.is_null()) {
        row.emplace_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        row.emplace_back(value.get<std::string>());
      }
    }
    table.add(std::move(row));
  }
  return table;
}

void write_svg_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<Series>& series) {
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double left = 80.0;
  constexpr double right = 170.0;
  constexpr double top = 40.0;
  constexpr double bottom = 60.0;
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max - x_min < 1e-300) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max - y_min < 1e-12 * std::max(1.0, std::abs(y_max))) {
    const double pad = 0.5 * std::max(1e-6, 1e-3 * std::abs(y_max));
    y_min -= pad;
    y_max += pad;
  }
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_min + (x_max - x_min) * k / 4.0;
    const double yv = y_min + (y_max - y_min) * k / 4.0;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(xv) << "\" y2=\""
        << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
        << format_number(std::round(xv * 1e4) / 1e4) << "</text>\n";
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << left << "\" y2=\"" << py(yv)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << xml_escape(format_number(yv).substr(0, 9)) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
      }
    }
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 32
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << width - right + 38 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot read '" + path + "'");
  }
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      return std::string();
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  std::map<std::string, std::string> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: line " + std::to_string(number) + " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw std::runtime_error("config: line " + std::to_string(number) + " has an empty key");
    }
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

}  // namespace lballs
