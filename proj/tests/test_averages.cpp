#include "lballs/averages.hpp"
#include "lballs/lball.hpp"
#include "lballs/potential.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lballs;
using oracle::pi;

namespace {

const double kBetaH = 1.0 / (8.0 * pi);
const double kC3 = 1.0 / (4.0 * pi);

ScalarField field(FieldFn f, const char* label = "test") {
  ScalarField s;
  s.eval = std::move(f);
  s.label = label;
  return s;
}

Point random_point(std::mt19937_64& rng, int n, double half_width) {
  std::uniform_real_distribution<double> d(-half_width, half_width);
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = d(rng);
  return p;
}

// Laplacian on R^3 at x = 0: Gamma = c/s and K = c^{-alpha} s^{alpha-2}.
template <class G>
double lap_M_oracle(G u, double a, double r) {
  return (a + 1.0) / std::pow(r, a + 1.0) *
         oracle::radial3([&](double s) { return u(s) * std::pow(kC3, -a) * std::pow(s, a - 2.0); }, kC3 * r);
}

template <class G>
double lap_N_oracle(G w, double a, double r) {
  return (a + 1.0) / std::pow(r, a + 1.0) *
         oracle::radial3([&](double s) { return w(s) * oracle::n_weight(kC3 / s, r, a); }, kC3 * r);
}

// H^1 at x = 0 for F(|z|^2, t): Gamma = beta/kappa, K = 4 beta^{-alpha} w kappa^{alpha-2}.
template <class F>
double heis_M_oracle(F u, double a, double r) {
  const double sigma = std::sqrt(kBetaH * r);
  return (a + 1.0) / std::pow(r, a + 1.0) *
         oracle::heis_ball(
             [&](double w, double t) {
               const double kappa = std::hypot(w, t);
               return u(w, t) * 4.0 * std::pow(kBetaH, -a) * w * std::pow(kappa, a - 2.0);
             },
             sigma);
}

template <class F>
double heis_N_oracle(F u, double a, double r) {
  const double sigma = std::sqrt(kBetaH * r);
  return (a + 1.0) / std::pow(r, a + 1.0) *
         oracle::heis_ball(
             [&](double w, double t) { return u(w, t) * oracle::n_weight(kBetaH / std::hypot(w, t), r, a); }, sigma);
}

QuadratureSpec fine() {
  QuadratureSpec q;
  q.radial_nodes = 12;
  q.angular_nodes = 16;
  q.outer_nodes = 16;
  q.rel_tol = 1e-10;
  return q;
}

}  // namespace

TEST_SUITE("average_operators") {

TEST_CASE("alpha") {
  CHECK_THROWS_AS(Alpha(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Alpha(NAN), std::invalid_argument);
  CHECK(Alpha(-0.5).value() == -0.5);
  CHECK(default_alpha(*make_laplacian(3)).value() == 2.0);
  CHECK(default_alpha(*make_laplacian(4)).value() == 1.0);
  CHECK(default_alpha(*make_heisenberg(kBetaH)).value() == 1.0);
}

TEST_CASE("kernel") {
  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Point x = random_point(rng, 3, 2.0);
    const Point y = random_point(rng, 3, 2.0);
    CHECK(kernel_K(*lap, Alpha(2.0), x, y) == doctest::Approx(16.0 * pi * pi).epsilon(1e-12));
    CHECK(kernel_K(*heis, Alpha(1.0), x, y) >= 0.0);
  }
  for (double a : {0.0, 1.0, 2.5}) {
    Point y(3);
    y << 0.3, -0.4, 0.2;
    const double w = 0.25;
    const double kappa = std::hypot(w, 0.2);
    CHECK(kernel_K(*heis, Alpha(a), Point::Zero(3), y) ==
          doctest::Approx(4.0 * std::pow(kBetaH, -a) * w * std::pow(kappa, a - 2.0)).epsilon(1e-12));
    CHECK(kernel_K(*heis, Alpha(a), Point::Zero(3), heis->dilate(2.0, y)) ==
          doctest::Approx(std::pow(2.0, 2.0 * a - 2.0) * kernel_K(*heis, Alpha(a), Point::Zero(3), y)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(kernel_K(*lap, Alpha(2.0), Point::Zero(3), Point::Zero(3)), SingularityError);
}

TEST_CASE("M on R^3 against radial integrals") {
  const ModelPtr lap = make_laplacian(3);
  const Point origin = Point::Zero(3);
  const AverageResult sq = mean_M(*lap, Alpha(2.0), catalog("sqnorm", lap), origin, 4.0 * pi, QuadratureSpec{});
  CHECK(sq.value == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(sq.converged);
  for (double a : {-0.5, 0.0, 1.0, 2.0}) {
    for (double r : {4.0 * pi, 3.0}) {
      const auto g = [](double s) { return std::exp(-s * s); };
      const AverageResult m = mean_M(*lap, Alpha(a), catalog("gauss", lap), origin, r, fine());
      CHECK(m.value == doctest::Approx(lap_M_oracle(g, a, r)).epsilon(1e-8));
    }
  }
  const AverageResult odd = mean_M(*lap, Alpha(2.0), catalog("coord:1", lap), origin, 2.0, QuadratureSpec{});
  CHECK(std::abs(odd.value) <= 1e-12 + 3.0 * odd.err_estimate);
}

TEST_CASE("M on H^1 against the half-disc oracle") {
  const ModelPtr heis = make_heisenberg(kBetaH);
  const Point origin = Point::Zero(3);
  for (double a : {0.0, 1.0, 3.0}) {
    const double r = 1.3;
    // y1^2 has z-angular mean w/2.
    const AverageResult m = mean_M(*heis, Alpha(a), catalog("coordsq:1", heis), origin, r, fine());
    CHECK(m.value == doctest::Approx(heis_M_oracle([](double w, double) { return 0.5 * w; }, a, r)).epsilon(1e-8));
    const AverageResult one = mean_M(*heis, Alpha(a), catalog("one", heis), origin, r, fine());
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-10));
  }
  const AverageResult t = mean_M(*heis, Alpha(1.0), catalog("heis:t", heis), origin, 1.0, fine());
  CHECK(std::abs(t.value) < 1e-10);
}

TEST_CASE("M is left-invariant") {
  const ModelPtr heis = make_heisenberg(kBetaH);
  Point x(3);
  x << 0.4, -0.3, 0.7;
  const FieldFn u = [](const Point& y) { return std::sin(y(0)) + y(1) * y(2); };
  const AverageResult at_x = mean_M(*heis, Alpha(1.0), field(u), x, 0.8, fine());
  const AverageResult at_0 =
      mean_M(*heis, Alpha(1.0), field([&](const Point& y) { return u(heis->group_law(x, y)); }), Point::Zero(3), 0.8,
             fine());
  CHECK(at_x.value == doctest::Approx(at_0.value).epsilon(1e-10));
}

TEST_CASE("N against single-integral oracles") {
  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  const Point origin = Point::Zero(3);
  const AverageResult six = mean_N(*lap, Alpha(2.0), constant_field(6.0), origin, 4.0 * pi, QuadratureSpec{});
  CHECK(six.value == doctest::Approx(0.6).epsilon(1e-5));
  CHECK(mean_N(*lap, Alpha(2.0), constant_field(0.0), origin, 1.0, QuadratureSpec{}).value == 0.0);
  for (double a : {-0.5, 0.0, 2.0}) {
    const auto g = [](double s) { return std::exp(-s * s); };
    const AverageResult n = mean_N(*lap, Alpha(a), catalog("gauss", lap), origin, 5.0, fine());
    CHECK(n.value == doctest::Approx(lap_N_oracle(g, a, 5.0)).epsilon(1e-8));
  }
  for (double a : {0.0, 1.0}) {
    const AverageResult n = mean_N(*heis, Alpha(a), catalog("coordsq:1", heis), origin, 1.3, fine());
    CHECK(n.value == doctest::Approx(heis_N_oracle([](double w, double) { return 0.5 * w; }, a, 1.3)).epsilon(1e-8));
  }
}

TEST_CASE("Q in closed form") {
  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  const Point origin = Point::Zero(3);
  for (QForm form : {QForm::Double, QForm::Simplified}) {
    CHECK(q_r(*lap, Alpha(2.0), origin, 4.0 * pi, QuadratureSpec{}, form).value == doctest::Approx(0.1).epsilon(1e-6));
    // |Omega_rho| / rho^2 is constant on H^1: Q_r = (pi^2/2) beta^2 r (alpha+1)/(alpha+2).
    for (double a : {0.0, 1.0}) {
      const double expected = pi * pi / 2.0 * kBetaH * kBetaH * 2.0 * (a + 1.0) / (a + 2.0);
      CHECK(q_r(*heis, Alpha(a), origin, 2.0, fine(), form).value == doctest::Approx(expected).epsilon(1e-8));
    }
  }
  // (4 pi / 3) c^3 r^2 (1/2 - 1/(alpha + 3)) on R^3.
  for (double a : {-0.5, 1.0}) {
    const double expected = 4.0 * pi / 3.0 * std::pow(kC3, 3) * 9.0 * (0.5 - 1.0 / (a + 3.0));
    CHECK(q_r(*lap, Alpha(a), origin, 3.0, fine(), QForm::Simplified).value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(q_r(*lap, Alpha(a), origin, 3.0, fine(), QForm::Double).value == doctest::Approx(expected).epsilon(1e-8));
  }
  CHECK_THROWS_AS(q_r(*lap, Alpha(2.0), origin, 0.0, QuadratureSpec{}, QForm::Simplified), std::invalid_argument);
}

TEST_CASE("N of one equals Q at random balls") {
  std::mt19937_64 rng(6);
  for (const ModelPtr& m : {make_laplacian(3), make_heisenberg(kBetaH)}) {
    for (int k = 0; k < 3; ++k) {
      const Point x = random_point(rng, 3, 1.0);
      const double r = std::uniform_real_distribution<double>(0.2, 3.0)(rng);
      const AverageResult d = q_r(*m, default_alpha(*m), x, r, QuadratureSpec{}, QForm::Double);
      const AverageResult s = q_r(*m, default_alpha(*m), x, r, QuadratureSpec{}, QForm::Simplified);
      CHECK(d.value > 0.0);
      CHECK(std::abs(d.value - s.value) <= std::max(3.0 * (d.err_estimate + s.err_estimate), 1e-12 * s.value));
    }
  }
}

TEST_CASE("representation residual") {
  const ModelPtr lap = make_laplacian(3);
  const ModelPtr heis = make_heisenberg(kBetaH);
  const Point origin = Point::Zero(3);
  CHECK(std::abs(representation_residual(*lap, Alpha(2.0), catalog("sqnorm", lap), origin, 4.0 * pi,
                                         QuadratureSpec{})
                     .value) < 1e-5);
  CHECK(std::abs(representation_residual(*heis, Alpha(1.0), catalog("one", heis), origin, 1.0, QuadratureSpec{})
                     .value) < 1e-10);
  for (int factor : {1, 2}) {
    const AverageResult res = representation_residual(*heis, Alpha(1.0), catalog("coordsq:1", heis), origin, 1.0,
                                                      QuadratureSpec{}.scaled(factor));
    CHECK(std::abs(res.value) < 1e-4);
  }
  Point x(3);
  x << 0.5, 0.2, -0.4;
  CHECK(std::abs(representation_residual(*heis, Alpha(1.0), catalog("gauss", heis), x, 0.6, QuadratureSpec{})
                     .value) < 1e-4);
  CHECK_THROWS_AS(representation_residual(*lap, Alpha(2.0), catalog("hat", lap), origin, 1.0, QuadratureSpec{}),
                  std::invalid_argument);
}

TEST_CASE("linearity and monotonicity") {
  const ModelPtr heis = make_heisenberg(kBetaH);
  Point x(3);
  x << 0.1, 0.2, 0.3;
  const ScalarField u = catalog("gauss", heis);
  const ScalarField v = catalog("coordsq:1", heis);
  const AverageResult mu = mean_M(*heis, Alpha(1.0), u, x, 1.0, QuadratureSpec{});
  const AverageResult mv = mean_M(*heis, Alpha(1.0), v, x, 1.0, QuadratureSpec{});
  const AverageResult mc = mean_M(*heis, Alpha(1.0), linear_combination(2.0, u, -3.0, v), x, 1.0, QuadratureSpec{});
  CHECK(mc.value == doctest::Approx(2.0 * mu.value - 3.0 * mv.value).epsilon(1e-10));
  const AverageResult nu = mean_N(*heis, Alpha(1.0), u, x, 1.0, QuadratureSpec{});
  const AverageResult nv = mean_N(*heis, Alpha(1.0), v, x, 1.0, QuadratureSpec{});
  const AverageResult nc = mean_N(*heis, Alpha(1.0), linear_combination(2.0, u, -3.0, v), x, 1.0, QuadratureSpec{});
  CHECK(nc.value == doctest::Approx(2.0 * nu.value - 3.0 * nv.value).epsilon(1e-10));
  // gauss <= 1 pointwise.
  CHECK(mu.value <= 1.0 + 3.0 * mu.err_estimate);
  CHECK(nu.value <= q_r(*heis, Alpha(1.0), x, 1.0, QuadratureSpec{}, QForm::Simplified).value + 3.0 * nu.err_estimate);
}

TEST_CASE("sup over a ball") {
  const ModelPtr lap = make_laplacian(3);
  const FieldFn norm = [](const Point& y) { return y.norm(); };
  CHECK(sup_over_ball(*lap, norm, Point::Zero(3), 4.0 * pi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sup_over_ball(*lap, [](const Point&) { return -2.0; }, Point::Zero(3), 1.0) == 2.0);
}

}  // TEST_SUITE
