#include "lballs/invariant_suite.hpp"
#include "lballs/asymptotic.hpp"
#include "lballs/averages.hpp"
#include "lballs/lball.hpp"
#include "lballs/polar.hpp"
#include "lballs/potential.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lballs {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skip:
      return "SKIP";
  }
  return "?";
}

namespace {

struct Context {
  ModelPtr model;
  QuadratureSpec quad;
  std::mt19937_64 rng;

  const OperatorModel& m() const { return *model; }
  int n() const { return model->dim(); }
  int big_q() const { return model->homogeneous_dim(); }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  Point box_point(double half_width) {
    Point p(n());
    for (int i = 0; i < n(); ++i) {
      p(i) = uniform(-half_width, half_width);
    }
    return p;
  }

  /// Random point of the unit gauge sphere.
  Point direction() {
    std::normal_distribution<double> normal;
    Point p(n());
    for (int i = 0; i < n(); ++i) {
      p(i) = normal(rng);
    }
    return m().dilate(1.0 / m().gauge_norm(p), p);
  }

  /// Radius whose gauge radius is `s`.
  double radius_for_gauge(double s) const { return std::pow(s, big_q() - 2.0) / m().beta(); }

  struct Ball {
    Point x;
    double r;
  };
  Ball random_ball() {
    Ball b{box_point(0.5), radius_for_gauge(uniform(0.3, 1.0))};
    return b;
  }
};

struct Verdict {
  bool ok = true;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string note;

  /// Records `value <= tol`; `worst` keeps the largest value/tol ratio seen.
  void le(double value, double tol) {
    const bool pass = value <= tol && std::isfinite(value);
    ok = ok && pass;
    const double ratio = tol > 0.0 ? value / tol : (value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (!std::isfinite(value) || ratio >= worst_ratio) {
      worst_ratio = std::isfinite(value) ? ratio : std::numeric_limits<double>::infinity();
      worst = value;
      tolerance = tol;
    }
  }
  void require(bool condition, const std::string& why) {
    if (!condition) {
      ok = false;
      if (note.empty()) {
        note = why;
      }
    }
  }

  double worst_ratio = -1.0;
};

struct CheckResult {
  CheckStatus status;
  std::string detail;
};

CheckResult finish(const Verdict& v) {
  std::ostringstream out;
  out.precision(6);
  if (v.worst_ratio >= 0.0) {
    out << "worst " << v.worst << " vs tol " << v.tolerance;
  }
  if (!v.note.empty()) {
    out << (v.worst_ratio >= 0.0 ? "; " : "") << v.note;
  }
  return {v.ok ? CheckStatus::Pass : CheckStatus::Fail, out.str()};
}

CheckResult skip(const std::string& why) { return {CheckStatus::Skip, why}; }

bool is_laplacian(const Context& c) { return c.m().id().rfind("laplacian:", 0) == 0; }

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<std::string> smooth_fields(const Context& c) {
  std::vector<std::string> names = {"one", "coord:1", "sqnorm", "coordsq:1", "gauss"};
  if (!is_laplacian(c)) {
    names.push_back("heis:t");
  }
  return names;
}

// ---------------------------------------------------------------- models

CheckResult coeff_psd(Context& c) {
  Verdict v;
  for (int k = 0; k < 100; ++k) {
    const Point y = c.box_point(2.0);
    const Matrix a = c.m().coeff(y);
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(sym), Eigen::EigenvaluesOnly);
    v.le(-eig.eigenvalues().minCoeff(), 1e-12);
    v.le((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    v.require(a.trace() > 0.0, "non-positive trace");
  }
  return finish(v);
}

CheckResult gauge_homogeneity(Context& c) {
  Verdict v;
  for (int k = 0; k < 20; ++k) {
    const Point p = c.box_point(2.0);
    for (const double lambda : {0.5, 2.0, 5.0}) {
      v.le(rel_diff(c.m().gauge_norm(c.m().dilate(lambda, p)), lambda * c.m().gauge_norm(p)), 1e-12);
    }
    v.require(c.m().gauge_norm(p) > 0.0, "zero norm at p != 0");
  }
  v.le(c.m().gauge_norm(Point::Zero(c.n())), 0.0);
  return finish(v);
}

CheckResult group_axioms(Context& c) {
  Verdict v;
  const Point zero = Point::Zero(c.n());
  for (int k = 0; k < 20; ++k) {
    const Point a = c.box_point(2.0);
    const Point b = c.box_point(2.0);
    const Point d = c.box_point(2.0);
    v.le((c.m().group_law(zero, a) - a).norm(), 0.0);
    v.le((c.m().group_law(a, zero) - a).norm(), 0.0);
    v.le(c.m().group_law(a, c.m().inverse(a)).norm(), 1e-14);
    const Point left = c.m().group_law(c.m().group_law(a, b), d);
    const Point right = c.m().group_law(a, c.m().group_law(b, d));
    v.le((left - right).norm(), 1e-12);
  }
  return finish(v);
}

CheckResult dilation_composition(Context& c) {
  Verdict v;
  for (int k = 0; k < 20; ++k) {
    const Point p = c.box_point(2.0);
    const double lambda = c.uniform(0.2, 4.0);
    const double mu = c.uniform(0.2, 4.0);
    v.le((c.m().dilate(1.0, p) - p).norm(), 0.0);
    const Point twice = c.m().dilate(lambda, c.m().dilate(mu, p));
    const Point once = c.m().dilate(lambda * mu, p);
    v.le((twice - once).norm() / std::max(1.0, once.norm()), 1e-13);
  }
  return finish(v);
}

CheckResult gamma_symmetry(Context& c) {
  Verdict v;
  for (int k = 0; k < 100; ++k) {
    const Point x = c.box_point(1.0);
    const Point y = c.box_point(1.0);
    const double gxy = c.m().gamma(x, y);
    v.le(std::abs(gxy - c.m().gamma(y, x)), 1e-12 * std::max(1.0, gxy));
    v.require(gxy > 0.0, "non-positive Gamma");
  }
  return finish(v);
}

CheckResult gamma_homogeneity(Context& c) {
  Verdict v;
  const Point zero = Point::Zero(c.n());
  for (int k = 0; k < 20; ++k) {
    const Point y = c.box_point(1.0);
    for (const double lambda : {0.5, 2.0, 5.0}) {
      const double scaled = c.m().gamma(zero, c.m().dilate(lambda, y));
      v.le(rel_diff(scaled, std::pow(lambda, 2.0 - c.big_q()) * c.m().gamma(zero, y)), 1e-12);
    }
  }
  return finish(v);
}

CheckResult gamma_left_invariance(Context& c) {
  Verdict v;
  for (int k = 0; k < 50; ++k) {
    const Point x = c.box_point(1.0);
    const Point y = c.box_point(1.0);
    const Point z = c.box_point(1.0);
    const double moved = c.m().gamma(c.m().group_law(z, x), c.m().group_law(z, y));
    v.le(rel_diff(moved, c.m().gamma(x, y)), 1e-12);
  }
  return finish(v);
}

CheckResult gamma_decay(Context& c) {
  Verdict v;
  const Point dir = c.direction();
  std::vector<Point> compact;
  for (int k = 0; k < 50; ++k) {
    compact.push_back(c.box_point(1.0));
  }
  double previous = std::numeric_limits<double>::infinity();
  for (const double scale : {10.0, 100.0, 1000.0}) {
    const Point xm = (scale / dir.norm()) * dir;
    double sup = 0.0;
    for (const auto& y : compact) {
      sup = std::max(sup, c.m().gamma(xm, y));
    }
    v.require(sup < previous, "sup of Gamma not decreasing");
    previous = sup;
  }
  return finish(v);
}

CheckResult gamma_pole(Context& c) {
  Verdict v;
  for (int k = 0; k < 5; ++k) {
    const Point x = c.box_point(1.0);
    const double g = c.m().gamma(x, x);
    v.require(std::isinf(g) && g > 0.0, "Gamma(x, x) is not +inf");
    bool threw = false;
    try {
      c.m().grad_gamma_y(x, x);
    } catch (const SingularityError&) {
      threw = true;
    }
    v.require(threw, "grad_gamma_y at the pole did not signal");
  }
  return finish(v);
}

CheckResult grad_gamma_fd(Context& c) {
  Verdict v;
  for (int k = 0; k < 10; ++k) {
    const Point x = c.box_point(1.0);
    Point y = c.box_point(1.0);
    while (c.m().gauge_norm(c.m().group_law(c.m().inverse(x), y)) < 0.2) {
      y = c.box_point(1.0);
    }
    const Point g = c.m().grad_gamma_y(x, y);
    Point fd(c.n());
    const double h = 1e-5;
    for (int i = 0; i < c.n(); ++i) {
      Point plus = y;
      Point minus = y;
      plus(i) += h;
      minus(i) -= h;
      fd(i) = (c.m().gamma(x, plus) - c.m().gamma(x, minus)) / (2.0 * h);
    }
    v.le((g - fd).norm() / g.norm(), 1e-6);
  }
  return finish(v);
}

CheckResult gamma_l_harmonic(Context& c) {
  Verdict v;
  for (int k = 0; k < 20; ++k) {
    const Point x0 = c.box_point(1.0);
    const Point y = c.m().polar_point(x0, c.uniform(0.5, 1.5), c.direction());
    const double d = c.m().gauge_norm(c.m().group_law(c.m().inverse(x0), y));
    const double scale = c.m().gamma(x0, y) / (d * d);
    const double lg = apply_L_fd(c.m(), [&](const Point& p) { return c.m().gamma(x0, p); }, y);
    v.le(std::abs(lg) / scale, 1e-4);
  }
  return finish(v);
}

CheckResult calibration(Context& c) {
  Verdict v;
  const double b1 = calibrate(c.m(), c.quad).beta;
  const double b2 = calibrate(c.m(), c.quad.scaled(2)).beta;
  const double b3 = calibrate(c.m(), c.quad, 0.7).beta;
  v.le(rel_diff(b2, b1), 1e-4);
  v.le(rel_diff(b3, b1), 1e-4);
  v.le(rel_diff(b1, c.m().beta()), 1e-4);
  if (is_laplacian(c)) {
    v.le(std::abs(b1 - laplacian_constant(c.n())), 1e-5);
  }
  return finish(v);
}

// ------------------------------------------------------------- geometry

CheckResult gauge_radius_identity(Context& c) {
  Verdict v;
  double previous = 0.0;
  for (const double r : {1e-3, 0.1, 0.5, 1.0, 4.0, 100.0}) {
    const double s = gauge_radius(c.m(), r);
    v.le(rel_diff(std::pow(s, c.big_q() - 2.0), c.m().beta() * r), 1e-12);
    v.require(s > previous, "gauge radius not increasing");
    previous = s;
  }
  return finish(v);
}

CheckResult center_contained(Context& c) {
  Verdict v;
  for (int k = 0; k < 10; ++k) {
    const Point x = c.box_point(1.0);
    for (const double r : {1e-9, 1e-3, 1.0, 1e3}) {
      v.require(LBall(c.model, x, r).contains(x), "center not contained");
    }
    const LBall ball(c.model, x, 1.0);
    const Point edge = c.m().polar_point(x, ball.gauge_radius(), c.direction());
    const double gauge = c.m().gauge_norm(c.m().group_law(c.m().inverse(x), edge));
    if (gauge >= ball.gauge_radius()) {
      v.require(!ball.contains(edge), "boundary point reported inside");
    }
  }
  return finish(v);
}

CheckResult nesting(Context& c) {
  Verdict v;
  long violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const Point x = c.box_point(0.5);
    const double r = c.radius_for_gauge(c.uniform(0.1, 1.0));
    const double rho = r * c.uniform(0.01, 1.0);
    const LBall big(c.model, x, r);
    const LBall small(c.model, x, rho);
    const Point inside = c.m().polar_point(x, small.gauge_radius() * c.uniform(0.0, 1.0), c.direction());
    const Point box = x + c.box_point(big.euclidean_bound());
    for (const Point& y : {inside, box}) {
      if (small.contains(y) && !big.contains(y)) {
        ++violations;
      }
    }
  }
  v.le(static_cast<double>(violations), 0.0);
  return finish(v);
}

CheckResult euclidean_bound_containment(Context& c) {
  Verdict v;
  for (int k = 0; k < 10000; ++k) {
    const Point x = c.box_point(1.0);
    const LBall ball(c.model, x, c.radius_for_gauge(c.uniform(0.05, 2.0)));
    const double bound = ball.euclidean_bound();
    const Point y = (k % 2 == 0) ? Point(x + c.box_point(1.2 * bound))
                                 : c.m().polar_point(x, ball.gauge_radius() * c.uniform(0.99, 1.0), c.direction());
    if (ball.contains(y)) {
      v.le((y - x).norm(), bound * (1.0 + 1e-12));
    }
  }
  return finish(v);
}

CheckResult shrinkage(Context& c) {
  Verdict v;
  const Point x = c.box_point(0.5);
  std::vector<LBall> balls;
  for (int k = 0; k <= 10; ++k) {
    balls.emplace_back(c.model, x, std::ldexp(1.0, -k));
  }
  for (std::size_t k = 1; k < balls.size(); ++k) {
    v.require(balls[k].euclidean_bound() < balls[k - 1].euclidean_bound(), "euclidean bound not decreasing");
  }
  const double first = balls.front().euclidean_bound();
  const double last = balls.back().euclidean_bound();
  v.le(last / first, std::pow(0.5, 10.0 / (c.big_q() - 2.0)) * 1.5);
  // Points in every sampled ball must lie within the smallest bound.
  for (int k = 0; k < 2000; ++k) {
    const Point y = x + c.box_point(first);
    const bool in_all = std::all_of(balls.begin(), balls.end(), [&](const LBall& b) { return b.contains(y); });
    if (in_all) {
      v.le((y - x).norm(), last);
    }
  }
  return finish(v);
}

CheckResult vanishing_ratio(Context& c) {
  Verdict v;
  const Point x = c.box_point(0.5);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 10; ++k) {
    const double r = std::ldexp(1.0, -k);
    const double ratio = LBall(c.model, x, r).measure() / r;
    v.require(ratio < previous, "measure/r not strictly decreasing");
    previous = ratio;
  }
  return finish(v);
}

CheckResult measure_checks(Context& c) {
  Verdict v;
  const Point zero = Point::Zero(c.n());
  const double r = c.radius_for_gauge(0.8);
  const LBall base(c.model, zero, r);
  for (int k = 0; k < 5; ++k) {
    v.le(rel_diff(LBall(c.model, c.box_point(2.0), r).measure(), base.measure()), 1e-12);
  }
  const double lambda = 1.7;
  const LBall scaled(c.model, zero, std::pow(lambda, c.big_q() - 2.0) * r);
  v.le(rel_diff(scaled.measure(), std::pow(lambda, c.big_q()) * base.measure()), 1e-12);
  // Monte Carlo membership sampling in the bounding box.
  const double bound = base.euclidean_bound();
  const int samples = 200000;
  long hits = 0;
  for (int k = 0; k < samples; ++k) {
    hits += base.contains(c.box_point(bound)) ? 1 : 0;
  }
  const double box = std::pow(2.0 * bound, c.n());
  const double p = static_cast<double>(hits) / samples;
  const double estimate = box * p;
  const double sigma = box * std::sqrt(p * (1.0 - p) / samples);
  v.le(std::abs(estimate - base.measure()), 4.0 * sigma);
  return finish(v);
}

CheckResult laplacian_exactness(Context& c) {
  if (!is_laplacian(c)) {
    return skip("Laplacian only");
  }
  Verdict v;
  long mismatches = 0;
  for (int k = 0; k < 10000; ++k) {
    const Point x = c.box_point(1.0);
    const double r = c.radius_for_gauge(c.uniform(0.1, 1.5));
    const Point y = x + c.box_point(1.6);
    const double rho = std::pow(laplacian_constant(c.n()) * r, 1.0 / (c.n() - 2.0));
    if (LBall(c.model, x, r).contains(y) != ((y - x).norm() < rho)) {
      ++mismatches;
    }
  }
  v.le(static_cast<double>(mismatches), 0.0);
  return finish(v);
}

// ------------------------------------------------------------- averages

CheckResult kernel_checks(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const Point zero = Point::Zero(c.n());
  for (int k = 0; k < 100; ++k) {
    const Point x = c.box_point(1.0);
    const Point y = c.m().polar_point(x, c.uniform(0.1, 1.0), c.direction());
    v.require(kernel_K(c.m(), alpha, x, y) >= 0.0, "negative kernel");
  }
  const double exponent = (c.big_q() - 2.0) * alpha.value() - 2.0;
  for (int k = 0; k < 10; ++k) {
    const Point y = c.m().dilate(c.uniform(0.2, 1.0), c.direction());
    const double scaled = kernel_K(c.m(), alpha, zero, c.m().dilate(2.0, y));
    v.le(rel_diff(scaled, std::pow(2.0, exponent) * kernel_K(c.m(), alpha, zero, y)), 1e-11);
  }
  return finish(v);
}

CheckResult normalization(Context& c) {
  Verdict v;
  const ScalarField one = constant_field(1.0);
  for (const double a : {0.0, 1.0, 2.0 / (c.big_q() - 2.0)}) {
    for (int k = 0; k < 5; ++k) {
      const auto ball = c.random_ball();
      const AverageResult m = mean_M(c.m(), Alpha(a), one, ball.x, ball.r, c.quad);
      v.le(std::abs(m.value - 1.0), 3.0 * m.err_estimate);
    }
  }
  return finish(v);
}

CheckResult linearity(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const ScalarField u = catalog("gauss", c.model);
  const ScalarField w = catalog("coordsq:1", c.model);
  const double a = 2.0;
  const double b = -3.0;
  const ScalarField combo = linear_combination(a, u, b, w);
  for (int k = 0; k < 3; ++k) {
    const auto ball = c.random_ball();
    for (int op = 0; op < 2; ++op) {
      auto apply = [&](const ScalarField& f) {
        return op == 0 ? mean_M(c.m(), alpha, f, ball.x, ball.r, c.quad)
                       : mean_N(c.m(), alpha, f, ball.x, ball.r, c.quad);
      };
      const AverageResult mu = apply(u);
      const AverageResult mw = apply(w);
      const AverageResult mc = apply(combo);
      const double tol =
          3.0 * (std::abs(a) * mu.err_estimate + std::abs(b) * mw.err_estimate + mc.err_estimate) + 1e-14;
      v.le(std::abs(mc.value - (a * mu.value + b * mw.value)), tol);
    }
  }
  return finish(v);
}

CheckResult monotonicity(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const ScalarField lower = catalog("gauss", c.model);
  const ScalarField upper = linear_combination(1.0, lower, 0.5, catalog("sqnorm", c.model));
  for (int k = 0; k < 3; ++k) {
    const auto ball = c.random_ball();
    const AverageResult ml = mean_M(c.m(), alpha, lower, ball.x, ball.r, c.quad);
    const AverageResult mu = mean_M(c.m(), alpha, upper, ball.x, ball.r, c.quad);
    v.le(ml.value - mu.value, 3.0 * (ml.err_estimate + mu.err_estimate));
    const AverageResult nl = mean_N(c.m(), alpha, lower, ball.x, ball.r, c.quad);
    const AverageResult nu = mean_N(c.m(), alpha, upper, ball.x, ball.r, c.quad);
    v.le(nl.value - nu.value, 3.0 * (nl.err_estimate + nu.err_estimate));
  }
  return finish(v);
}

/// Solid average of u over the Euclidean ball B(x, rho).
double solid_average(const ScalarField& u, const Point& x, double rho, double shift = 0.0) {
  const int n = static_cast<int>(x.size());
  const LevelSum sum = integrate_euclidean_ball(n, rho, 24, 24, [&](const Point& y) { return u(x + y) - shift; });
  return sum.value / (unit_ball_volume(n) * std::pow(rho, n));
}

CheckResult gauss_equivalence(Context& c) {
  if (!is_laplacian(c)) {
    return skip("Laplacian only");
  }
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  for (const char* name : {"one", "coord:1", "sqnorm", "gauss"}) {
    const ScalarField u = catalog(name, c.model);
    for (int k = 0; k < 2; ++k) {
      const auto ball = c.random_ball();
      const double rho = gauge_radius(c.m(), ball.r);
      const AverageResult m = mean_M(c.m(), alpha, u, ball.x, ball.r, c.quad);
      v.le(std::abs(m.value - solid_average(u, ball.x, rho)), 1e-6);
    }
  }
  return finish(v);
}

CheckResult layer_cake(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  for (int k = 0; k < 5; ++k) {
    const auto ball = c.random_ball();
    const AverageResult d = q_r(c.m(), alpha, ball.x, ball.r, c.quad, QForm::Double);
    const AverageResult s = q_r(c.m(), alpha, ball.x, ball.r, c.quad, QForm::Simplified);
    v.le(std::abs(d.value - s.value), 3.0 * (d.err_estimate + s.err_estimate));
  }
  return finish(v);
}

CheckResult q_positive_monotone(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  for (int k = 0; k < 5; ++k) {
    const auto ball = c.random_ball();
    const double rho = ball.r * c.uniform(0.1, 0.9);
    const AverageResult big = q_r(c.m(), alpha, ball.x, ball.r, c.quad, QForm::Double);
    const AverageResult small = q_r(c.m(), alpha, ball.x, rho, c.quad, QForm::Double);
    v.require(big.value > 0.0 && small.value > 0.0, "non-positive Q_r");
    v.le(small.value - big.value, 3.0 * (big.err_estimate + small.err_estimate));
  }
  return finish(v);
}

/// c0 + c1 sin(w.y + p) + c2 |y - z|: continuous, not smooth at z.
ScalarField random_continuous(Context& c) {
  const double c0 = c.uniform(-1.0, 1.0);
  const double c1 = c.uniform(-1.0, 1.0);
  const double c2 = c.uniform(-1.0, 1.0);
  const double phase = c.uniform(0.0, 6.0);
  const Point w = c.box_point(3.0);
  const Point z = c.box_point(0.5);
  ScalarField g;
  g.eval = [=](const Point& y) { return c0 + c1 * std::sin(w.dot(y) + phase) + c2 * (y - z).norm(); };
  g.label = "random";
  return g;
}

CheckResult oscillation_bound(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  // The kink of g stalls refinement; two refinements bound the cost.
  QuadratureSpec quad = c.quad;
  quad.max_levels = std::min(quad.max_levels, 2);
  for (int j = 0; j < 10; ++j) {
    const ScalarField g = random_continuous(c);
    for (int k = 0; k < 5; ++k) {
      const auto ball = c.random_ball();
      const AverageResult nr = mean_N(c.m(), alpha, g, ball.x, ball.r, quad);
      const AverageResult q = q_r(c.m(), alpha, ball.x, ball.r, quad, QForm::Simplified);
      const double sup = sup_over_ball(c.m(), g.eval, ball.x, ball.r);
      v.le(std::abs(nr.value), sup * q.value + 3.0 * (nr.err_estimate + sup * q.err_estimate));
    }
  }
  return finish(v);
}

CheckResult representation(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const double tol = is_laplacian(c) ? 1e-5 : 1e-4;
  for (const auto& name : smooth_fields(c)) {
    const ScalarField u = catalog(name, c.model);
    for (int k = 0; k < 2; ++k) {
      const auto ball = c.random_ball();
      const AverageResult res = representation_residual(c.m(), alpha, u, ball.x, ball.r, c.quad);
      v.le(std::abs(res.value), std::max(tol, 3.0 * res.err_estimate));
    }
  }
  return finish(v);
}

// ------------------------------------------------------------ potential

CheckResult field_support(Context& c) {
  Verdict v;
  for (const char* name : {"hat", "bump", "bump:0.5"}) {
    const ScalarField f = catalog(name, c.model);
    const double radius = *f.support_radius;
    for (int k = 0; k < 100; ++k) {
      Point p = c.box_point(1.0);
      p *= radius * c.uniform(1.0 + 1e-9, 3.0) / p.norm();
      v.le(std::abs(f(p)), 1e-14);
    }
  }
  return finish(v);
}

CheckResult catalog_exact_l(Context& c) {
  Verdict v;
  std::vector<std::string> names = smooth_fields(c);
  names.push_back("bump");
  for (const auto& name : names) {
    const ScalarField f = catalog(name, c.model);
    for (int k = 0; k < 20; ++k) {
      const Point y = c.box_point(0.9);
      const double exact = f.exact_L(y);
      const double fd = apply_L_fd(c.m(), f.eval, y);
      v.le(std::abs(exact - fd), 1e-5 * std::max(1.0, std::abs(exact)));
    }
  }
  return finish(v);
}

CheckResult potential_values(Context& c) {
  Verdict v;
  const ScalarField hat = catalog("hat", c.model);
  const Point zero = Point::Zero(c.n());
  ScalarField nothing = constant_field(0.0);
  nothing.support_radius = 1.0;
  v.le(std::abs(newtonian_potential(c.m(), nothing, c.box_point(1.0), c.quad).value), 0.0);
  if (is_laplacian(c) && c.n() == 3) {
    v.le(std::abs(newtonian_potential(c.m(), hat, zero, c.quad).value - 1.0 / 6.0), 1e-5);
  }
  if (is_laplacian(c)) {
    for (const double a : {0.5, 2.0}) {
      Point p1 = zero;
      Point p2 = zero;
      p1(0) = a;
      p2(c.n() - 1) = a;
      v.le(std::abs(newtonian_potential(c.m(), hat, p1, c.quad).value -
                    newtonian_potential(c.m(), hat, p2, c.quad).value),
           2e-5);
    }
  }
  return finish(v);
}

CheckResult potential_decay(Context& c) {
  Verdict v;
  const ScalarField hat = catalog("hat", c.model);
  const Point dir = c.direction();
  double previous = std::numeric_limits<double>::infinity();
  for (const double distance : {2.0, 5.0, 10.0, 20.0}) {
    const double u = newtonian_potential(c.m(), hat, (distance / dir.norm()) * dir, c.quad).value;
    v.require(u < previous, "potential not decreasing");
    previous = u;
  }
  return finish(v);
}

CheckResult potential_positivity(Context& c) {
  Verdict v;
  const ScalarField hat = catalog("hat", c.model);
  for (int k = 0; k < 20; ++k) {
    const double u = newtonian_potential(c.m(), hat, c.box_point(2.0), c.quad).value;
    v.require(u >= 0.0, "negative potential of a non-negative density");
  }
  return finish(v);
}

CheckResult potential_continuity(Context& c) {
  Verdict v;
  const ScalarField hat = catalog("hat", c.model);
  for (int k = 0; k < 10; ++k) {
    const Point x = c.box_point(1.5);
    Point step = c.box_point(1.0);
    step *= c.uniform(1e-4, 1e-2) / step.norm();
    const double du = std::abs(newtonian_potential(c.m(), hat, x + step, c.quad).value -
                               newtonian_potential(c.m(), hat, x, c.quad).value);
    v.le(du, std::sqrt(step.norm()));
  }
  return finish(v);
}

CheckResult potential_two_resolution(Context& c) {
  Verdict v;
  for (const char* name : {"hat", "bump"}) {
    const ScalarField f = catalog(name, c.model);
    for (int k = 0; k < 4; ++k) {
      const Point x = c.box_point(1.2);
      const AverageResult base = newtonian_potential(c.m(), f, x, c.quad);
      const AverageResult fine = newtonian_potential(c.m(), f, x, c.quad.scaled(2));
      v.le(std::abs(fine.value - base.value), 3.0 * base.err_estimate);
    }
  }
  return finish(v);
}

// ----------------------------------------------------------- asymptotic

CheckResult schedule_decreasing(Context& c) {
  Verdict v;
  const RadiusSchedule schedule = gauge_schedule(c.m(), c.uniform(0.1, 1.0), c.uniform(0.1, 0.9), 8);
  const auto radii = schedule.radii();
  for (std::size_t k = 1; k < radii.size(); ++k) {
    v.require(radii[k] < radii[k - 1], "radii not strictly decreasing");
  }
  return finish(v);
}

CheckResult eq4_consistency(Context& c) {
  if (!is_laplacian(c)) {
    return skip("Laplacian only");
  }
  Verdict v;
  const int n = c.n();
  const Alpha alpha = default_alpha(c.m());
  const ScalarField u = catalog("gauss", c.model);
  const Point x = c.box_point(0.5);
  for (const double rho : {1.0, 0.5, 0.25}) {
    const double r = c.radius_for_gauge(rho);
    const QuotientResult q = quotient(c.m(), alpha, u, x, r, c.quad);
    const double deficit = solid_average(u, x, rho, u(x));
    v.le(std::abs(q.value - 2.0 * (n + 2) * deficit / (rho * rho)), 1e-6);
  }
  return finish(v);
}

RadiusSchedule smooth_schedule(const Context& c) { return gauge_schedule(c.m(), 0.5); }

CheckResult smooth_limit(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const Point x = c.box_point(0.5);
  for (const auto& name : smooth_fields(c)) {
    const ScalarField u = catalog(name, c.model);
    const ConvergenceReport report = estimate(c.m(), alpha, u, x, smooth_schedule(c), c.quad);
    v.le(std::abs(report.extrapolated - u.exact_L(x)), 1e-3);
  }
  return finish(v);
}

double report_uncertainty(const ConvergenceReport& report) {
  const auto& rec = report.records;
  const std::size_t n = rec.size();
  return std::abs(rec[n - 1].quotient - rec[n - 2].quotient) + 3.0 * rec[n - 1].quad_err;
}

CheckResult limit_linearity(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const Point x = c.box_point(0.5);
  const ScalarField u = catalog("gauss", c.model);
  const ScalarField w = catalog("coordsq:1", c.model);
  const double a = 1.5;
  const double b = -0.5;
  const auto schedule = smooth_schedule(c);
  const ConvergenceReport ru = estimate(c.m(), alpha, u, x, schedule, c.quad);
  const ConvergenceReport rw = estimate(c.m(), alpha, w, x, schedule, c.quad);
  const ConvergenceReport rc = estimate(c.m(), alpha, linear_combination(a, u, b, w), x, schedule, c.quad);
  const double tol =
      std::abs(a) * report_uncertainty(ru) + std::abs(b) * report_uncertainty(rw) + report_uncertainty(rc);
  v.le(std::abs(rc.extrapolated - (a * ru.extrapolated + b * rw.extrapolated)), tol);
  return finish(v);
}

CheckResult limit_stability(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const Point x = c.box_point(0.5);
  const ScalarField u = catalog("gauss", c.model);
  QuadratureSpec tight = c.quad;
  tight.rel_tol *= 0.5;
  const ConvergenceReport loose_report = estimate(c.m(), alpha, u, x, smooth_schedule(c), c.quad);
  const ConvergenceReport tight_report = estimate(c.m(), alpha, u, x, smooth_schedule(c), tight);
  v.le(std::abs(loose_report.extrapolated - tight_report.extrapolated), 1e-3);
  return finish(v);
}

CheckResult potential_limit(Context& c) {
  Verdict v;
  const Alpha alpha = default_alpha(c.m());
  const ScalarField f = catalog("bump", c.model);
  const ScalarField u = potential_field(c.model, f);
  for (const double offset : {0.0, 0.3}) {
    Point x = Point::Zero(c.n());
    x(0) = offset;
    const double fx = f(x);
    const ConvergenceReport report = estimate(c.m(), alpha, u, x, potential_schedule(c.m(), f, x), c.quad);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < report.records.size(); ++k) {
      const auto& rec = report.records[k];
      const double err = std::abs(rec.quotient + fx);
      if (k >= 1) {
        v.require(err < previous, "error not decreasing along the schedule");
      }
      previous = err;
      const double osc = sup_over_ball(c.m(), [&](const Point& y) { return f(y) - fx; }, x, rec.r);
      v.le(err, osc + 3.0 * rec.quad_err);
    }
  }
  return finish(v);
}

struct Check {
  const char* name;
  CheckResult (*run)(Context&);
};

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"model.coeff_psd", coeff_psd},
      {"model.gauge_homogeneity", gauge_homogeneity},
      {"model.group_axioms", group_axioms},
      {"model.dilation_composition", dilation_composition},
      {"gamma.symmetry", gamma_symmetry},
      {"gamma.homogeneity", gamma_homogeneity},
      {"gamma.left_invariance", gamma_left_invariance},
      {"gamma.decay", gamma_decay},
      {"gamma.pole", gamma_pole},
      {"gamma.gradient_fd", grad_gamma_fd},
      {"gamma.l_harmonic", gamma_l_harmonic},
      {"model.calibration", calibration},
      {"field.support", field_support},
      {"field.exact_l_vs_fd", catalog_exact_l},
      {"lball.gauge_radius", gauge_radius_identity},
      {"lball.center", center_contained},
      {"lball.nesting", nesting},
      {"lball.euclidean_bound", euclidean_bound_containment},
      {"lball.shrinkage", shrinkage},
      {"lball.vanishing_ratio", vanishing_ratio},
      {"lball.measure", measure_checks},
      {"lball.laplacian_exactness", laplacian_exactness},
      {"average.kernel", kernel_checks},
      {"average.normalization", normalization},
      {"average.linearity", linearity},
      {"average.monotonicity", monotonicity},
      {"average.gauss_equivalence", gauss_equivalence},
      {"average.layer_cake", layer_cake},
      {"average.q_positive_monotone", q_positive_monotone},
      {"average.oscillation_bound", oscillation_bound},
      {"average.representation", representation},
      {"potential.values", potential_values},
      {"potential.decay", potential_decay},
      {"potential.positivity", potential_positivity},
      {"potential.continuity", potential_continuity},
      {"potential.two_resolution", potential_two_resolution},
      {"asymptotic.schedule", schedule_decreasing},
      {"asymptotic.eq4_consistency", eq4_consistency},
      {"asymptotic.smooth_limit", smooth_limit},
      {"asymptotic.limit_linearity", limit_linearity},
      {"asymptotic.limit_stability", limit_stability},
      {"asymptotic.potential_limit", potential_limit},
  };
  return all;
}

}  // namespace

std::vector<std::string> invariant_names() {
  std::vector<std::string> names;
  for (const auto& check : checks()) {
    names.emplace_back(check.name);
  }
  return names;
}

std::vector<InvariantOutcome> run_suite(const ModelPtr& model, const SuiteOptions& options,
                                        const std::function<void(const InvariantOutcome&)>& on_result) {
  const std::set<std::string> wanted(options.only.begin(), options.only.end());
  const auto names = invariant_names();
  for (const auto& name : wanted) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw std::invalid_argument("suite: unknown invariant '" + name + "'");
    }
  }
  options.quad.validate();
  std::vector<InvariantOutcome> outcomes;
  std::uint64_t index = 0;
  for (const auto& check : checks()) {
    ++index;
    if (!wanted.empty() && !wanted.count(check.name)) {
      continue;
    }
    // Each check draws from its own stream so filtering does not change values.
    Context ctx{model, options.quad, std::mt19937_64(options.seed * 1000003ULL + index)};
    InvariantOutcome outcome;
    outcome.name = check.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const CheckResult result = check.run(ctx);
      outcome.status = result.status;
      outcome.detail = result.detail;
    } catch (const std::exception& e) {
      outcome.status = CheckStatus::Fail;
      outcome.detail = std::string("exception: ") + e.what();
    }
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) {
      on_result(outcome);
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

}  // namespace lballs
