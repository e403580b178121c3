#include "lballs/cli.hpp"
#include "lballs/invariant_suite.hpp"
#include "lballs/report_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lballs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lballs_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream fields(line);
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_SUITE("report_io") {

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-2.5e-20) == "-2.5e-20");
  CHECK(format_number(12.0) == "12");
  CHECK(std::stod(format_number(M_PI)) == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("timestamps") {
  const std::string now = iso8601_now();
  CHECK(now.size() == 20);
  CHECK(now[4] == '-');
  CHECK(now[10] == 'T');
  CHECK(now.back() == 'Z');
}

TEST_CASE("csv quoting and width checks") {
  Table t;
  t.header = {"name", "value"};
  t.add({std::string("a,b"), 1.5});
  t.add({std::string("say \"hi\""), 2.0});
  CHECK_THROWS_AS(t.add({1.0}), std::logic_error);
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() == "name,value\n\"a,b\",1.5\n\"say \"\"hi\"\"\",2\n");
}

TEST_CASE("json round trip") {
  Table t;
  t.header = {"model", "x", "y"};
  t.add({std::string("heisenberg1"), 1.0 / 3.0, -4.25e-11});
  t.add({std::string("with \"quote\""), 12.0, 0.0});
  std::stringstream io;
  write_json(io, t);
  const Table back = read_json(io);
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows.size() == 2);
  CHECK(std::get<std::string>(back.rows[1][0]) == "with \"quote\"");
  CHECK(std::get<double>(back.rows[0][1]) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::get<double>(back.rows[0][2]) == -4.25e-11);
}

TEST_CASE("svg chart") {
  std::ostringstream out;
  write_svg_chart(out, "t <&>", "x", "y", {{"a", {0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}}, {"b", {0.0, 2.0}, {0.3, 0.3}}});
  const std::string svg = out.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("t &lt;&amp;&gt;") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("config files") {
  const fs::path path = scratch("cfg.txt");
  {
    std::ofstream f(path);
    f << "# comment\n\nmodel = heisenberg1\n  radial=4  # inline\nr = 1 0.5\n";
  }
  const auto values = load_config(path.string());
  CHECK(values.at("model") == "heisenberg1");
  CHECK(values.at("radial") == "4");
  CHECK(values.at("r") == "1 0.5");
  {
    std::ofstream f(path);
    f << "model heisenberg1\n";
  }
  CHECK_THROWS_AS(load_config(path.string()), std::runtime_error);
  CHECK_THROWS_AS(load_config((fs::temp_directory_path() / "no_such_lballs.cfg").string()), std::runtime_error);
}

}  // TEST_SUITE

TEST_SUITE("verification_cli") {

TEST_CASE("argument errors exit with status 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  const Outcome unknown = cli({"suite", "--model", "heisenberg1", "--frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(cli({"geometry", "--model", "laplacian:x"}).code == 2);
  CHECK(cli({"geometry", "--point", "1,2"}).code == 2);
  CHECK(cli({"geometry", "--r", "-1"}).code == 2);
  CHECK(cli({"averages", "--alpha", "-1"}).code == 2);
  CHECK(cli({"averages", "--field", "nope"}).code == 2);
  CHECK(cli({"averages", "--radial", "1"}).code == 2);
  CHECK(cli({"averages", "--format", "xml"}).code == 2);
  CHECK(cli({"representation", "--field", "hat"}).code == 2);
  CHECK(cli({"pizzetti", "--field", "gauss", "--mode", "potential"}).code == 2);
  CHECK(cli({"pizzetti", "--count", "2", "--field", "sqnorm"}).code == 2);
  CHECK(cli({"suite", "--model", "laplacian:3", "--only", "no.such.check"}).code == 2);
  CHECK(cli({"averages", "--config", scratch("missing.cfg").string()}).code == 2);
}

TEST_CASE("help exits cleanly") {
  const Outcome help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("pizzetti") != std::string::npos);
}

TEST_CASE("averages of |y|^2 on the unit Euclidean ball") {
  const Outcome o = cli({"averages", "--model", "laplacian:3", "--alpha", "2", "--field", "sqnorm", "--point",
                         "0,0,0", "--r", "12.566370614"});
  REQUIRE(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"model", "alpha", "field", "x1", "x2", "x3", "r", "M", "M_err", "N",
                                            "N_err", "Q", "Q_err", "Q_double", "Q_double_err"});
  CHECK(std::stod(rows[1][column(rows[0], "M")]) == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(std::stod(rows[1][column(rows[0], "Q")]) == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(std::stod(rows[1][column(rows[0], "Q_double")]) == doctest::Approx(0.1).epsilon(1e-6));
  // N of the field itself: (1/2) int_0^1 s^3 (s^3 - 3 s + 2) ds = 3/140.
  CHECK(std::stod(rows[1][column(rows[0], "N")]) == doctest::Approx(3.0 / 140.0).epsilon(1e-6));
}

TEST_CASE("identical configurations give byte-identical output") {
  const std::vector<std::string> args = {"averages", "--model", "heisenberg1", "--field", "gauss", "--point",
                                         "0.1,0.2,0.3", "--point", "0,0,0", "--r", "1", "--r", "0.5"};
  const Outcome a = cli(args);
  const Outcome b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto rows = parse_csv(a.out);
  CHECK(rows.size() == 5);
}

TEST_CASE("json output re-parses to the csv values") {
  const std::vector<std::string> base = {"geometry", "--model", "heisenberg1", "--point", "0.5,0,1"};
  const Outcome csv = cli(base);
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const Outcome json = cli(json_args);
  REQUIRE(csv.code == 0);
  REQUIRE(json.code == 0);
  std::istringstream in(json.out);
  const Table table = read_json(in);
  const auto rows = parse_csv(csv.out);
  REQUIRE(table.rows.size() + 1 == rows.size());
  CHECK(table.header == rows[0]);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 1; j < table.header.size(); ++j) {
      CHECK(format_number(std::get<double>(table.rows[i][j])) == rows[i + 1][j]);
    }
  }
}

TEST_CASE("geometry shrinks along the default radii") {
  const Outcome o = cli({"geometry", "--model", "laplacian:3"});
  REQUIRE(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 10);
  const std::size_t bound = column(rows[0], "euclidean_bound");
  const std::size_t ratio = column(rows[0], "measure_over_r");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][bound]) < std::stod(rows[i - 1][bound]));
    CHECK(std::stod(rows[i][ratio]) < std::stod(rows[i - 1][ratio]));
  }
}

TEST_CASE("flags override the config file") {
  const fs::path cfg = scratch("averages.cfg");
  {
    std::ofstream f(cfg);
    f << "model = laplacian:3\nalpha = 2\nfield = sqnorm\nr = 12.566370614359172 6.283185307179586\n";
  }
  const Outcome from_file = cli({"averages", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  auto rows = parse_csv(from_file.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][2] == "sqnorm");
  const Outcome overridden = cli({"averages", "--config", cfg.string(), "--field", "one", "--r", "3"});
  REQUIRE(overridden.code == 0);
  rows = parse_csv(overridden.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] == "one");
  CHECK(std::stod(rows[1][column(rows[0], "M")]) == doctest::Approx(1.0));
  {
    std::ofstream f(cfg);
    f << "bogus = 1\n";
  }
  CHECK(cli({"averages", "--config", cfg.string()}).code == 2);
  {
    std::ofstream f(cfg);
    f << "field = one sqnorm\n";
  }
  CHECK(cli({"averages", "--config", cfg.string()}).code == 2);
}

TEST_CASE("representation residual table") {
  const Outcome o = cli({"representation", "--model", "heisenberg1", "--field", "coordsq:1", "--alpha", "1"});
  REQUIRE(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][column(rows[0], "residual")])) < 1e-4);
  }
}

TEST_CASE("pizzetti on a smooth field writes table and chart") {
  const fs::path dir = scratch("pizzetti_out");
  fs::remove_all(dir);
  const Outcome o = cli({"pizzetti", "--model", "heisenberg1", "--field", "coordsq:1", "--mode", "direct",
                         "--output-dir", dir.string()});
  REQUIRE(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"model", "alpha", "x1", "x2", "x3", "r", "M", "Q", "quotient", "quad_err",
                                            "target", "abs_err"});
  CHECK(std::stod(rows[6][column(rows[0], "target")]) == 2.0);
  CHECK(std::stod(rows[6][column(rows[0], "abs_err")]) < 1e-3);
  CHECK(fs::exists(dir / "pizzetti.csv"));
  CHECK(fs::exists(dir / "pizzetti.svg"));
  std::ifstream written(dir / "pizzetti.csv");
  std::stringstream content;
  content << written.rdbuf();
  CHECK(content.str() == o.out);
  CHECK(o.err.find("extrapolated") != std::string::npos);
}

TEST_CASE("calibrate writes the cache") {
  const fs::path cache = scratch("beta.tsv");
  fs::remove(cache);
  const Outcome o = cli({"calibrate", "--model", "laplacian:3", "--beta-cache", cache.string()});
  REQUIRE(o.code == 0);
  std::ifstream in(cache);
  std::string id;
  double beta = 0.0;
  in >> id >> beta;
  CHECK(id == "laplacian:3");
  CHECK(beta == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-8));
  // The default calibration rule must be fine enough that cached constants keep M_r(1) = 1.
  REQUIRE(cli({"calibrate", "--model", "heisenberg1", "--beta-cache", cache.string()}).code == 0);
  const Outcome avg = cli({"averages", "--model", "heisenberg1", "--beta-cache", cache.string(), "--field", "one",
                           "--point", "0.2,0.1,0.3", "--r", "0.7"});
  REQUIRE(avg.code == 0);
  const auto rows = parse_csv(avg.out);
  CHECK(std::abs(std::stod(rows[1][column(rows[0], "M")]) - 1.0) < 1e-9);
}

TEST_CASE("suite listing and selection") {
  const Outcome list = cli({"suite", "--list"});
  REQUIRE(list.code == 0);
  std::size_t lines = 0;
  for (char c : list.out) lines += c == '\n' ? 1 : 0;
  CHECK(lines == invariant_names().size());
  const Outcome some = cli({"suite", "--model", "heisenberg1", "--only", "gamma.symmetry,lball.nesting"});
  CHECK(some.code == 0);
  CHECK(some.out.find("PASS gamma.symmetry") != std::string::npos);
  CHECK(some.out.find("PASS lball.nesting") != std::string::npos);
  CHECK(some.out.find("2/2") != std::string::npos);
}

}  // TEST_SUITE
