#pragma once

#include "lballs/operator_model.hpp"
#include "lballs/quadrature.hpp"

#include <functional>
#include <span>
#include <vector>

namespace lballs {

/// One refinement level of a quadrature: the weighted sum, the sum of
/// absolute weighted terms (used for relative stopping and the round-off
/// floor), and the number of integrand evaluations.
struct LevelSum {
  double value = 0.0;
  double mass = 0.0;
  long nodes = 0;
};

/// Evaluates level(1), level(2), level(4), ... until two consecutive levels
/// agree to rel_tol relative to max(|value|, mass). Without refinement only
/// the first two levels are run.
AverageResult refine_levels(const QuadratureSpec& quad, const std::function<LevelSum(int factor)>& level);

/// Integral over the gauge ball {N(x^{-1} o y) < s_max} of s^q h(y, s), with
/// the singular factor s^{Q-1+q} absorbed into a Gauss-Jacobi radial rule.
LevelSum integrate_gauge_ball(const OperatorModel& model, const Point& x, double s_max, double q,
                              int radial_nodes, int angular_nodes,
                              const std::function<double(const Point& y, double s)>& h);

/// Integral over the Euclidean ball |y| < radius in gauge-polar coordinates
/// centered at x. The callback returns G(y) s^{Q-1}; each polar curve is split
/// at its crossings of the sphere |y| = radius and integrated piecewise with
/// Gauss-Legendre.
LevelSum integrate_support_rays(const OperatorModel& model, const Point& x, double radius,
                                int radial_nodes, int angular_nodes,
                                const std::function<double(const Point& y, double s)>& phi);

/// Integral of G over the Euclidean ball |y| < radius in R^n using spherical
/// coordinates about the origin.
LevelSum integrate_euclidean_ball(int n, double radius, int radial_nodes, int angular_nodes,
                                  const std::function<double(const Point& y)>& g);

/// Hyperspherical chart of S^{n-1}: n-2 polar angles on [0, pi] and one
/// azimuth on [0, 2 pi).
std::vector<ChartAxis> hyperspherical_chart(int n);
Point hyperspherical_point(int n, std::span<const double> angles);
double hyperspherical_density(int n, std::span<const double> angles);
std::vector<AngularNode> build_angular_grid(const std::vector<ChartAxis>& axes, int nodes_per_axis,
                                            const std::function<Point(std::span<const double>)>& point,
                                            const std::function<double(std::span<const double>)>& density);

}  // namespace lballs
