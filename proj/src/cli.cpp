#include "lballs/cli.hpp"
#include "lballs/averages.hpp"
#include "lballs/invariant_suite.hpp"
#include "lballs/lball.hpp"
#include "lballs/potential.hpp"
#include "lballs/report_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace lballs {

namespace {

/// Bad input detected after parsing; maps to exit status 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A result that is numerically unreliable; maps to exit status 1.
class FailureExit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Session {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  bool quadrature_failed = false;

  void note(const AverageResult& result, const std::string& what) {
    if (!result.converged) {
      quadrature_failed = true;
      err << "warning: " << what << " did not reach rel_tol " << format_number(cfg.quad.rel_tol) << "\n";
    }
  }
};

std::vector<std::string> split(const std::string& text, const std::string& separators) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find_first_of(separators, start);
    const std::string piece = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!piece.empty()) {
      parts.push_back(piece);
    }
    if (end == std::string::npos) {
      break;
    }
    start = end + 1;
  }
  return parts;
}

ModelPtr load_model(const RunConfig& cfg) {
  const CalibrationCache cache = CalibrationCache::load(cfg.beta_cache);
  try {
    return model_from_id(cfg.model_id, &cache);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<Point> resolve_points(const RunConfig& cfg, const OperatorModel& model) {
  std::vector<Point> points;
  for (const auto& text : cfg.points) {
    Point p;
    try {
      p = parse_point(text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (p.size() != model.dim()) {
      throw UsageError("point '" + text + "' has dimension " + std::to_string(p.size()) + ", model " +
                       model.id() + " needs " + std::to_string(model.dim()));
    }
    points.push_back(p);
  }
  if (points.empty()) {
    points.push_back(Point::Zero(model.dim()));
  }
  return points;
}

Alpha resolve_alpha(const RunConfig& cfg, const OperatorModel& model) {
  if (!cfg.alpha) {
    return default_alpha(model);
  }
  try {
    return Alpha(*cfg.alpha);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ScalarField resolve_field(const RunConfig& cfg, const ModelPtr& model) {
  try {
    return catalog(cfg.field_name, model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> resolve_radii(const RunConfig& cfg, std::vector<double> fallback) {
  const std::vector<double>& radii = cfg.radii.empty() ? fallback : cfg.radii;
  for (const double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw UsageError("radii must be positive");
    }
  }
  return radii;
}

void point_header(std::vector<std::string>& header, int n) {
  for (int i = 1; i <= n; ++i) {
    header.push_back("x" + std::to_string(i));
  }
}

void point_cells(std::vector<Cell>& row, const Point& x) {
  for (int i = 0; i < x.size(); ++i) {
    row.emplace_back(x(i));
  }
}

void emit(Session& s, const Table& table, const std::string& stem) {
  auto render = [&](std::ostream& os) {
    if (s.cfg.format == "json") {
      write_json(os, table);
    } else {
      write_csv(os, table);
    }
  };
  render(s.out);
  if (!s.cfg.output_dir.empty()) {
    std::filesystem::create_directories(s.cfg.output_dir);
    const auto path = std::filesystem::path(s.cfg.output_dir) / (stem + "." + s.cfg.format);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    render(file);
  }
}

// ------------------------------------------------------------- commands

void cmd_calibrate(Session& s) {
  ModelPtr model;
  try {
    model = model_from_id(s.cfg.model_id);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CalibrationResult result = calibrate(*model, s.cfg.quad);
  CalibrationCache cache = CalibrationCache::load(s.cfg.beta_cache);
  cache.put(model->id(), {result.beta, result.nodes_used, iso8601_now()});
  cache.save(s.cfg.beta_cache);
  Table table;
  table.header = {"model", "beta", "err_estimate", "nodes"};
  table.add({model->id(), result.beta, result.err_estimate, static_cast<double>(result.nodes_used)});
  emit(s, table, "calibrate");
  s.err << "beta cache updated: " << s.cfg.beta_cache << "\n";
}

void cmd_geometry(Session& s) {
  const ModelPtr model = load_model(s.cfg);
  std::vector<double> fallback;
  for (int k = 0; k <= 8; ++k) {
    fallback.push_back(std::ldexp(1.0, -k));
  }
  const auto radii = resolve_radii(s.cfg, fallback);
  Table table;
  table.header = {"model"};
  point_header(table.header, model->dim());
  for (const char* col : {"r", "gauge_radius", "measure", "euclidean_bound", "measure_over_r"}) {
    table.header.emplace_back(col);
  }
  for (const auto& x : resolve_points(s.cfg, *model)) {
    for (const double r : radii) {
      const LBall ball(model, x, r);
      std::vector<Cell> row = {model->id()};
      point_cells(row, x);
      for (const double v : {r, ball.gauge_radius(), ball.measure(), ball.euclidean_bound(), ball.measure() / r}) {
        row.emplace_back(v);
      }
      table.add(std::move(row));
    }
  }
  emit(s, table, "geometry");
}

void cmd_averages(Session& s) {
  const ModelPtr model = load_model(s.cfg);
  const Alpha alpha = resolve_alpha(s.cfg, *model);
  const ScalarField u = resolve_field(s.cfg, model);
  const auto radii = resolve_radii(s.cfg, {1.0});
  Table table;
  table.header = {"model", "alpha", "field"};
  point_header(table.header, model->dim());
  for (const char* col : {"r", "M", "M_err", "N", "N_err", "Q", "Q_err", "Q_double", "Q_double_err"}) {
    table.header.emplace_back(col);
  }
  for (const auto& x : resolve_points(s.cfg, *model)) {
    for (const double r : radii) {
      const AverageResult m = mean_M(*model, alpha, u, x, r, s.cfg.quad);
      const AverageResult n = mean_N(*model, alpha, u, x, r, s.cfg.quad);
      const AverageResult q = q_r(*model, alpha, x, r, s.cfg.quad, QForm::Simplified);
      const AverageResult qd = q_r(*model, alpha, x, r, s.cfg.quad, QForm::Double);
      s.note(m, "M_r");
      s.note(n, "N_r");
      s.note(q, "Q_r");
      s.note(qd, "Q_r (double)");
      std::vector<Cell> row = {model->id(), alpha.value(), u.label};
      point_cells(row, x);
      for (const double v : {r, m.value, m.err_estimate, n.value, n.err_estimate, q.value, q.err_estimate,
                             qd.value, qd.err_estimate}) {
        row.emplace_back(v);
      }
      table.add(std::move(row));
    }
  }
  emit(s, table, "averages");
}

void cmd_representation(Session& s) {
  const ModelPtr model = load_model(s.cfg);
  const Alpha alpha = resolve_alpha(s.cfg, *model);
  const ScalarField u = resolve_field(s.cfg, model);
  if (!u.has_exact_L()) {
    throw UsageError("field '" + u.label + "' has no closed-form L-image");
  }
  const auto radii = resolve_radii(s.cfg, {1.0, 0.5});
  Table table;
  table.header = {"model", "alpha", "field"};
  point_header(table.header, model->dim());
  for (const char* col : {"r", "u", "residual", "err_estimate"}) {
    table.header.emplace_back(col);
  }
  for (const auto& x : resolve_points(s.cfg, *model)) {
    for (const double r : radii) {
      const AverageResult res = representation_residual(*model, alpha, u, x, r, s.cfg.quad);
      s.note(res, "representation residual");
      std::vector<Cell> row = {model->id(), alpha.value(), u.label};
      point_cells(row, x);
      for (const double v : {r, u(x), res.value, res.err_estimate}) {
        row.emplace_back(v);
      }
      table.add(std::move(row));
    }
  }
  emit(s, table, "representation");
}

void cmd_pizzetti(Session& s) {
  const ModelPtr model = load_model(s.cfg);
  const Alpha alpha = resolve_alpha(s.cfg, *model);
  const ScalarField field = resolve_field(s.cfg, model);
  std::string mode = s.cfg.mode;
  if (mode.empty()) {
    mode = field.support_radius ? "potential" : "direct";
  }
  if (mode == "potential" && !field.support_radius) {
    throw UsageError("field '" + field.label + "' has no compact support; use --mode direct");
  }
  if (mode == "direct" && !field.has_exact_L()) {
    throw UsageError("field '" + field.label + "' has no closed-form L-image; use --mode potential");
  }
  if (s.cfg.potential_radial < 2 || s.cfg.potential_angular < 2) {
    throw UsageError("potential node counts must be >= 2");
  }
  const ScalarField u =
      mode == "potential" ? potential_field(model, field, s.cfg.potential_radial, s.cfg.potential_angular) : field;

  Table table;
  table.header = {"model", "alpha"};
  point_header(table.header, model->dim());
  for (const char* col : {"r", "M", "Q", "quotient", "quad_err", "target", "abs_err"}) {
    table.header.emplace_back(col);
  }
  std::vector<Series> series;
  for (const auto& x : resolve_points(s.cfg, *model)) {
    RadiusSchedule schedule;
    try {
      schedule = mode == "potential" ? potential_schedule(*model, field, x) : gauge_schedule(*model, 0.5);
      if (s.cfg.r0) {
        schedule.r0 = *s.cfg.r0;
      }
      schedule.ratio = s.cfg.ratio;
      schedule.count = s.cfg.count;
      schedule.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const double target = mode == "potential" ? -field(x) : field.exact_L(x);
    const ConvergenceReport report = estimate(*model, alpha, u, x, schedule, s.cfg.quad);
    Series curve;
    std::ostringstream label;
    label << "x=(";
    for (int i = 0; i < x.size(); ++i) {
      label << (i ? "," : "") << format_number(x(i));
    }
    label << ")";
    curve.label = label.str();
    for (const auto& rec : report.records) {
      std::vector<Cell> row = {model->id(), alpha.value()};
      point_cells(row, x);
      for (const double v :
           {rec.r, rec.M_value, rec.Q_value, rec.quotient, rec.quad_err, target, std::abs(rec.quotient - target)}) {
        row.emplace_back(v);
      }
      table.add(std::move(row));
      curve.x.push_back(std::log10(rec.r));
      curve.y.push_back(rec.quotient);
    }
    series.push_back(curve);
    Series goal;
    goal.label = "target " + curve.label;
    goal.x = {curve.x.front(), curve.x.back()};
    goal.y = {target, target};
    series.push_back(goal);
    s.err << curve.label << ": extrapolated " << format_number(report.extrapolated) << ", observed order "
          << format_number(report.observed_order) << ", converged " << (report.converged ? "yes" : "no")
          << "\n";
  }
  emit(s, table, "pizzetti");
  if (!s.cfg.output_dir.empty()) {
    const auto path = std::filesystem::path(s.cfg.output_dir) / "pizzetti.svg";
    std::ofstream svg(path, std::ios::binary | std::ios::trunc);
    if (!svg) {
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    write_svg_chart(svg, "Pizzetti quotient, " + model->id() + ", field " + field.label, "log10 r", "quotient",
                    series);
  }
}

void cmd_suite(Session& s) {
  if (s.cfg.list) {
    for (const auto& name : invariant_names()) {
      s.out << name << "\n";
    }
    return;
  }
  const ModelPtr model = load_model(s.cfg);
  SuiteOptions options;
  options.seed = s.cfg.seed;
  options.quad = s.cfg.quad;
  options.only = s.cfg.only;
  int failures = 0;
  std::vector<InvariantOutcome> outcomes;
  try {
    outcomes = run_suite(model, options, [&](const InvariantOutcome& o) {
      s.out << to_string(o.status) << ' ' << o.name << " (" << format_number(std::round(o.seconds * 100) / 100)
            << " s)" << (o.detail.empty() ? "" : ": ") << o.detail << "\n";
      s.out.flush();
      failures += o.status == CheckStatus::Fail ? 1 : 0;
    });
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  s.out << model->id() << ": " << outcomes.size() - static_cast<std::size_t>(failures) << "/" << outcomes.size()
        << " invariants without violation\n";
  if (failures > 0) {
    throw FailureExit(std::to_string(failures) + " invariant(s) violated");
  }
}

// --------------------------------------------------------------- parsing

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model_id, "laplacian:<n> (n >= 3) or heisenberg1")->capture_default_str();
  sub->add_option("--beta-cache", cfg.beta_cache, "calibration cache file")->capture_default_str();
}

void add_quad_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--radial", cfg.quad.radial_nodes, "radial nodes (level 0)")->capture_default_str();
  sub->add_option("--angular", cfg.quad.angular_nodes, "angular nodes per chart axis (level 0)")
      ->capture_default_str();
  sub->add_option("--outer", cfg.quad.outer_nodes, "outer nodes of N_r (level 0)")->capture_default_str();
  sub->add_option("--rel-tol", cfg.quad.rel_tol, "refinement tolerance")->capture_default_str();
  sub->add_option("--max-levels", cfg.quad.max_levels, "maximum refinement levels")->capture_default_str();
  sub->add_flag("--refine,!--no-refine", cfg.quad.refine, "adaptive refinement (default on)");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--output-dir", cfg.output_dir, "also write tables (and charts) into this directory");
  sub->add_option("--format", cfg.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_point_options(CLI::App* sub, RunConfig& cfg, bool with_radii) {
  sub->add_option("--point", cfg.points, "evaluation point a,b,c (repeatable; default origin)");
  if (with_radii) {
    sub->add_option("--r", cfg.radii, "radii r (repeatable)");
  }
}

void add_field_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--alpha", cfg.alpha, "exponent alpha > -1 (default 2/(Q-2))");
  sub->add_option("--field", cfg.field_name, "catalog field")->capture_default_str();
}

/// Applies config entries for options that were not given on the command line.
void apply_config(CLI::App* sub, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt || key == "config") {
      throw UsageError("config: unknown key '" + key + "' for " + sub->get_name());
    }
    if (opt->count() > 0) {
      continue;
    }
    const auto parts = split(value, " \t");
    if (parts.empty()) {
      throw UsageError("config: empty value for '" + key + "'");
    }
    if (parts.size() > 1 && opt->get_items_expected_max() <= 1) {
      throw UsageError("config: '" + key + "' takes a single value");
    }
    try {
      for (const auto& part : parts) {
        opt->add_result(part);
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;
  std::string only_text;

  CLI::App app{"Mean-value operators on L-balls and Pizzetti-limit verification", "lballs_cli"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  struct Sub {
    const char* name;
    const char* help;
    bool model;
    bool quad;
    bool points;
    bool radii;
    bool field;
  };
  const Sub subs[] = {
      {"calibrate", "calibrate beta and update the cache", true, true, false, false, false},
      {"geometry", "L-ball gauge radius, measure and Euclidean bound", true, false, true, true, false},
      {"averages", "M_r, N_r and Q_r of a field", true, true, true, true, true},
      {"representation", "residual u - M_r(u) + N_r(Lu)", true, true, true, true, true},
      {"pizzetti", "Pizzetti quotient along a radius schedule", true, true, true, false, true},
      {"suite", "run the invariant battery", true, true, false, false, false},
  };
  std::map<std::string, CLI::App*> apps;
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", config_path, "flat key = value file (flags take precedence)");
    if (sub.model) {
      add_model_options(cmd, cfg);
    }
    if (sub.quad) {
      add_quad_options(cmd, cfg);
    }
    if (sub.points) {
      add_point_options(cmd, cfg, sub.radii);
    }
    if (sub.field) {
      add_field_options(cmd, cfg);
    }
    if (std::string(sub.name) != "suite") {
      add_output_options(cmd, cfg);
    }
    apps[sub.name] = cmd;
  }
  CLI::App* pizzetti = apps["pizzetti"];
  pizzetti->add_option("--mode", cfg.mode, "potential (u = u_f) or direct (u = field)")
      ->check(CLI::IsMember({"potential", "direct"}));
  pizzetti->add_option("--r0", cfg.r0, "first radius (default from the field and point)");
  pizzetti->add_option("--ratio", cfg.ratio, "radius ratio in (0,1)")->capture_default_str();
  pizzetti->add_option("--count", cfg.count, "number of radii (>= 3)")->capture_default_str();
  pizzetti->add_option("--potential-radial", cfg.potential_radial, "radial nodes of u_f")->capture_default_str();
  pizzetti->add_option("--potential-angular", cfg.potential_angular, "angular nodes of u_f")
      ->capture_default_str();
  // Calibration has its own defaults; flags and config entries still win.
  const QuadratureSpec calibration = calibration_quadrature();
  const std::map<std::string, std::string> calibration_defaults = {
      {"radial", std::to_string(calibration.radial_nodes)},
      {"angular", std::to_string(calibration.angular_nodes)},
      {"rel-tol", format_number(calibration.rel_tol)},
  };
  for (const auto& [key, value] : calibration_defaults) {
    apps["calibrate"]->get_option("--" + key)->default_str(value);
  }
  CLI::App* suite = apps["suite"];
  suite->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  suite->add_option("--only", only_text, "comma-separated invariant names");
  suite->add_flag("--list", cfg.list, "list invariant names and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  Session session{cfg, out, err};
  try {
    if (!config_path.empty()) {
      std::map<std::string, std::string> values;
      try {
        values = load_config(config_path);
      } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
      }
      apply_config(chosen, values);
    }
    if (cfg.command == "calibrate") {
      apply_config(chosen, calibration_defaults);
    }
    cfg.only = split(only_text, ",");
    try {
      cfg.quad.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    session.cfg = cfg;
    static const std::map<std::string, void (*)(Session&)> handlers = {
        {"calibrate", cmd_calibrate}, {"geometry", cmd_geometry},   {"averages", cmd_averages},
        {"representation", cmd_representation}, {"pizzetti", cmd_pizzetti}, {"suite", cmd_suite},
    };
    handlers.at(cfg.command)(session);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << chosen->help();
    return 2;
  } catch (const FailureExit& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  } catch (const QuadratureError& e) {
    err << "quadrature failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return session.quadrature_failed ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return dispatch(args, out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run(args, out, err);
}

}  // namespace lballs
