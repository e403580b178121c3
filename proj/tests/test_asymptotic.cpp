#include "lballs/asymptotic.hpp"
#include "lballs/lball.hpp"
#include "lballs/potential.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lballs;
using oracle::pi;

namespace {

const double kBetaH = 1.0 / (8.0 * pi);

/// |y|^4 on R^3: its solid average over B(0, rho) is 3 rho^4 / 7, so the
/// quotient at 0 is (3 rho^4 / 7) / (rho^2 / 10) = 30 rho^2 / 7 exactly.
ScalarField fourth_power() {
  ScalarField f;
  f.eval = [](const Point& y) { return y.squaredNorm() * y.squaredNorm(); };
  f.exact_L = [](const Point& y) { return 20.0 * y.squaredNorm(); };
  f.label = "quartic";
  return f;
}

}  // namespace

TEST_SUITE("asymptotic_estimator") {

TEST_CASE("schedules") {
  RadiusSchedule s;
  s.r0 = 2.0;
  s.ratio = 0.5;
  s.count = 4;
  CHECK(s.radii() == std::vector<double>{2.0, 1.0, 0.5, 0.25});
  s.count = 2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.count = 4;
  s.ratio = 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.ratio = 0.5;
  s.r0 = 0.0;
  CHECK_THROWS_AS(s.radii(), std::invalid_argument);

  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  CHECK(gauge_radius(*lap, gauge_schedule(*lap, 0.5).r0) == doctest::Approx(0.5));
  CHECK(gauge_radius(*heis, gauge_schedule(*heis, 0.5).r0) == doctest::Approx(0.5));
  Point x = Point::Zero(3);
  x(0) = 0.3;
  const RadiusSchedule ps = potential_schedule(*heis, catalog("bump", heis), x);
  CHECK(gauge_radius(*heis, ps.r0) == doctest::Approx(0.35));
  CHECK(ps.count == 6);
  CHECK(ps.ratio == 0.5);
  x(0) = 1.5;
  CHECK_THROWS_AS(potential_schedule(*heis, catalog("bump", heis), x), std::invalid_argument);
  CHECK_THROWS_AS(potential_schedule(*heis, catalog("gauss", heis), Point::Zero(3)), std::invalid_argument);
}

TEST_CASE("quotient") {
  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  const Point origin = Point::Zero(3);
  const QuotientResult c = quotient(*heis, Alpha(1.0), constant_field(3.0), origin, 0.5, QuadratureSpec{});
  CHECK(std::abs(c.value) <= 1e-12 + 3.0 * c.quad_err);
  const QuotientResult sq = quotient(*lap, Alpha(2.0), catalog("sqnorm", lap), origin, 4.0 * pi, QuadratureSpec{});
  CHECK(sq.value == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(sq.M_value == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(sq.Q_value == doctest::Approx(0.1).epsilon(1e-6));
  for (double r : {4.0 * pi, 1.0, 0.01}) {
    const double rho = r / (4.0 * pi);
    const QuotientResult q = quotient(*lap, Alpha(2.0), fourth_power(), origin, r, QuadratureSpec{});
    CHECK(q.value == doctest::Approx(30.0 * rho * rho / 7.0).epsilon(1e-7));
  }
  const QuotientResult h = quotient(*heis, Alpha(1.0), catalog("coordsq:1", heis), origin, 0.01, QuadratureSpec{});
  CHECK(h.value == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("extrapolation recovers the limit and the order") {
  const ModelPtr lap = make_laplacian(3);
  RadiusSchedule s;
  s.r0 = 4.0 * pi;
  const ConvergenceReport report = estimate(*lap, Alpha(2.0), fourth_power(), Point::Zero(3), s, QuadratureSpec{});
  REQUIRE(report.records.size() == 6);
  for (std::size_t k = 1; k < report.records.size(); ++k) {
    CHECK(report.records[k].r < report.records[k - 1].r);
  }
  CHECK(std::abs(report.extrapolated) < 1e-8);
  CHECK(report.observed_order == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(report.converged == (std::abs(report.records[5].quotient - report.records[4].quotient) < 1e-3));
}

TEST_CASE("harmonic and smooth limits") {
  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  Point x(3);
  x << 0.4, -0.2, 0.6;
  const ConvergenceReport harmonic =
      estimate(*lap, Alpha(2.0), catalog("coord:1", lap), x, gauge_schedule(*lap, 0.5), QuadratureSpec{});
  CHECK(std::abs(harmonic.extrapolated) < 1e-6);
  CHECK(harmonic.converged);
  for (const ModelPtr& m : {lap, heis}) {
    for (const char* name : {"gauss", "coordsq:2"}) {
      const ScalarField u = catalog(name, m);
      const ConvergenceReport r =
          estimate(*m, default_alpha(*m), u, x, gauge_schedule(*m, 0.5), QuadratureSpec{});
      CHECK(r.extrapolated == doctest::Approx(u.exact_L(x)).epsilon(1e-3).scale(1.0));
    }
  }
  // Raw quotient differences shrink by ratio^{2/(Q-2)} per step: 1/4 on R^3,
  // 1/2 on H^1, where six radii leave the last difference above 1e-3.
  const ConvergenceReport lap_gauss =
      estimate(*lap, Alpha(2.0), catalog("gauss", lap), x, gauge_schedule(*lap, 0.5), QuadratureSpec{});
  CHECK(lap_gauss.converged);
  const ConvergenceReport short_run =
      estimate(*heis, Alpha(1.0), catalog("gauss", heis), x, gauge_schedule(*heis, 0.5), QuadratureSpec{});
  CHECK_FALSE(short_run.converged);
  const ConvergenceReport long_run =
      estimate(*heis, Alpha(1.0), catalog("gauss", heis), x, gauge_schedule(*heis, 0.5, 0.5, 8), QuadratureSpec{});
  CHECK(long_run.converged);
  CHECK(long_run.observed_order == doctest::Approx(2.0).epsilon(0.05));
  const ConvergenceReport t =
      estimate(*heis, Alpha(1.0), catalog("heis:t", heis), x, gauge_schedule(*heis, 0.5), QuadratureSpec{});
  CHECK(std::abs(t.extrapolated) < 1e-6);
}

TEST_CASE("extrapolation is linear in the field") {
  const ModelPtr heis = make_heisenberg(kBetaH);
  const Point x = Point::Constant(3, 0.2);
  const RadiusSchedule s = gauge_schedule(*heis, 0.5);
  const ScalarField u = catalog("gauss", heis);
  const ScalarField v = catalog("coordsq:1", heis);
  const double eu = estimate(*heis, Alpha(1.0), u, x, s, QuadratureSpec{}).extrapolated;
  const double ev = estimate(*heis, Alpha(1.0), v, x, s, QuadratureSpec{}).extrapolated;
  const double ec = estimate(*heis, Alpha(1.0), linear_combination(2.0, u, 0.5, v), x, s, QuadratureSpec{}).extrapolated;
  CHECK(ec == doctest::Approx(2.0 * eu + 0.5 * ev).epsilon(1e-3));
}

}  // TEST_SUITE
