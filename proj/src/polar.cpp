#include "lballs/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace lballs {

namespace {

constexpr double kRoundoffFactor = 100.0 * std::numeric_limits<double>::epsilon();
constexpr int kCrossingSamples = 16;

// Illinois variant of regula falsi on a bracketing interval.
template <class F>
double bracketed_root(F&& g, double a, double b, double ga, double gb) {
  int side = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const double c = (a * gb - b * ga) / (gb - ga);
    const double gc = g(c);
    if (gc == 0.0 || std::abs(b - a) < 1e-15 * std::max(1.0, std::abs(b))) {
      return c;
    }
    if ((gc < 0.0) == (gb < 0.0)) {
      b = c;
      gb = gc;
      if (side == -1) {
        ga *= 0.5;
      }
      side = -1;
    } else {
      a = c;
      ga = gc;
      if (side == 1) {
        gb *= 0.5;
      }
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

const std::vector<AngularNode>& euclidean_grid(int n, int m) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const std::vector<AngularNode>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, m}];
  if (!slot) {
    slot = std::make_unique<const std::vector<AngularNode>>(build_angular_grid(
        hyperspherical_chart(n), m, [n](std::span<const double> a) { return hyperspherical_point(n, a); },
        [n](std::span<const double> a) { return hyperspherical_density(n, a); }));
  }
  return *slot;
}

}  // namespace

AverageResult refine_levels(const QuadratureSpec& quad, const std::function<LevelSum(int factor)>& level) {
  quad.validate();
  auto checked = [&](int factor) {
    LevelSum sum = level(factor);
    if (!std::isfinite(sum.value) || !std::isfinite(sum.mass)) {
      throw QuadratureError("quadrature produced a non-finite value");
    }
    return sum;
  };
  LevelSum previous = checked(1);
  const int last_level = quad.refine ? quad.max_levels : 1;
  AverageResult result;
  for (int l = 1; l <= last_level; ++l) {
    const LevelSum current = checked(1 << l);
    const double delta = std::abs(current.value - previous.value);
    result.value = current.value;
    result.err_estimate = delta + kRoundoffFactor * current.mass;
    result.nodes_used = current.nodes;
    result.converged = true;
    if (!quad.refine) {
      return result;
    }
    if (delta <= quad.rel_tol * std::max(std::abs(current.value), current.mass)) {
      return result;
    }
    previous = current;
  }
  result.converged = false;
  return result;
}

LevelSum integrate_gauge_ball(const OperatorModel& model, const Point& x, double s_max, double q,
                              int radial_nodes, int angular_nodes,
                              const std::function<double(const Point& y, double s)>& h) {
  const double p = model.homogeneous_dim() - 1.0 + q;
  const auto radial = gauss_jacobi_unit(radial_nodes, p);
  const auto& angular = model.angular_grid(angular_nodes);
  LevelSum sum;
  for (const auto& node : angular) {
    double inner = 0.0;
    double inner_mass = 0.0;
    for (std::size_t k = 0; k < radial->size(); ++k) {
      const double s = s_max * radial->nodes[k];
      const double value = h(model.polar_point(x, s, node.direction), s);
      inner += radial->weights[k] * value;
      inner_mass += radial->weights[k] * std::abs(value);
    }
    sum.value += node.weight * inner;
    sum.mass += node.weight * inner_mass;
  }
  const double scale = std::pow(s_max, p + 1.0);
  sum.value *= scale;
  sum.mass *= scale;
  sum.nodes = static_cast<long>(angular.size() * radial->size());
  return sum;
}

LevelSum integrate_support_rays(const OperatorModel& model, const Point& x, double radius, int radial_nodes,
                                int angular_nodes, const std::function<double(const Point& y, double s)>& phi) {
  const auto radial = gauss_legendre(radial_nodes);
  const auto& angular = model.angular_grid(angular_nodes);
  const double s_end = model.gauge_extent(x, radius) * (1.0 + 1e-12);
  const double r2 = radius * radius;
  LevelSum sum;
  std::vector<double> cuts;
  for (const auto& node : angular) {
    auto excess = [&](double s) { return model.polar_point(x, s, node.direction).squaredNorm() - r2; };
    cuts.clear();
    double s_prev = 0.0;
    double g_prev = excess(0.0);
    const bool starts_inside = g_prev < 0.0;
    for (int k = 1; k <= kCrossingSamples; ++k) {
      const double s_k = s_end * k / kCrossingSamples;
      const double g_k = excess(s_k);
      if ((g_prev < 0.0) != (g_k < 0.0)) {
        cuts.push_back(bracketed_root(excess, s_prev, s_k, g_prev, g_k));
      }
      s_prev = s_k;
      g_prev = g_k;
    }
    // Pair up [start, end) pieces that lie inside the ball.
    std::vector<std::pair<double, double>> pieces;
    std::size_t idx = 0;
    if (starts_inside) {
      pieces.emplace_back(0.0, cuts.empty() ? s_end : cuts[0]);
      idx = 1;
    }
    for (; idx + 1 < cuts.size(); idx += 2) {
      pieces.emplace_back(cuts[idx], cuts[idx + 1]);
    }
    double inner = 0.0;
    double inner_mass = 0.0;
    for (const auto& [a, b] : pieces) {
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (std::size_t k = 0; k < radial->size(); ++k) {
        const double s = mid + half * radial->nodes[k];
        const double value = phi(model.polar_point(x, s, node.direction), s);
        inner += half * radial->weights[k] * value;
        inner_mass += half * radial->weights[k] * std::abs(value);
      }
      sum.nodes += static_cast<long>(radial->size());
    }
    sum.value += node.weight * inner;
    sum.mass += node.weight * inner_mass;
  }
  sum.nodes = std::max<long>(sum.nodes, 1);
  return sum;
}

LevelSum integrate_euclidean_ball(int n, double radius, int radial_nodes, int angular_nodes,
                                  const std::function<double(const Point& y)>& g) {
  const auto radial = gauss_jacobi_unit(radial_nodes, n - 1.0);
  const auto& angular = euclidean_grid(n, angular_nodes);
  LevelSum sum;
  for (const auto& node : angular) {
    double inner = 0.0;
    double inner_mass = 0.0;
    for (std::size_t k = 0; k < radial->size(); ++k) {
      const double value = g((radius * radial->nodes[k]) * node.direction);
      inner += radial->weights[k] * value;
      inner_mass += radial->weights[k] * std::abs(value);
    }
    sum.value += node.weight * inner;
    sum.mass += node.weight * inner_mass;
  }
  const double scale = std::pow(radius, n);
  sum.value *= scale;
  sum.mass *= scale;
  sum.nodes = static_cast<long>(angular.size() * radial->size());
  return sum;
}

std::vector<ChartAxis> hyperspherical_chart(int n) {
  std::vector<ChartAxis> axes(n - 2, ChartAxis{0.0, std::numbers::pi, false});
  axes.push_back({0.0, 2.0 * std::numbers::pi, true});
  return axes;
}

Point hyperspherical_point(int n, std::span<const double> angles) {
  Point p(n);
  double sines = 1.0;
  for (int k = 0; k < n - 1; ++k) {
    p(k) = sines * std::cos(angles[k]);
    sines *= std::sin(angles[k]);
  }
  p(n - 1) = sines;
  return p;
}

double hyperspherical_density(int n, std::span<const double> angles) {
  double density = 1.0;
  for (int k = 0; k < n - 2; ++k) {
    density *= std::pow(std::sin(angles[k]), n - 2 - k);
  }
  return density;
}

std::vector<AngularNode> build_angular_grid(const std::vector<ChartAxis>& axes, int nodes_per_axis,
                                            const std::function<Point(std::span<const double>)>& point,
                                            const std::function<double(std::span<const double>)>& density) {
  std::vector<Rule1D> rules;
  rules.reserve(axes.size());
  for (const auto& axis : axes) {
    if (axis.periodic) {
      Rule1D rule = periodic_trapezoid(2 * nodes_per_axis, axis.hi - axis.lo);
      for (auto& node : rule.nodes) {
        node += axis.lo;
      }
      rules.push_back(std::move(rule));
    } else {
      rules.push_back(legendre_on(nodes_per_axis, axis.lo, axis.hi));
    }
  }
  std::vector<AngularNode> grid;
  std::vector<std::size_t> index(axes.size(), 0);
  std::vector<double> angles(axes.size());
  while (true) {
    double weight = 1.0;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      angles[d] = rules[d].nodes[index[d]];
      weight *= rules[d].weights[index[d]];
    }
    weight *= density(angles);
    grid.push_back({point(angles), weight});
    std::size_t d = 0;
    while (d < axes.size() && ++index[d] == rules[d].size()) {
      index[d] = 0;
      ++d;
    }
    if (d == axes.size()) {
      break;
    }
  }
  return grid;
}

}  // namespace lballs
