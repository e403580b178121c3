#include "lballs/quadrature.hpp"
#include "lballs/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lballs {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // n == 1 leaves p1 = x, p0 = 1
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

// Golub-Welsch for the Jacobi weight (1+x)^p on [-1,1], mapped to s^p on [0,1].
Rule1D compute_gauss_jacobi_unit(int n, double p) {
  const double a = 0.0;
  const double b = p;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  diag(0) = (b - a) / (a + b + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
    const double beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw QuadratureError("gauss_jacobi: eigen solve failed");
  }
  const double mu0 = std::pow(2.0, p + 1.0) / (p + 1.0);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double scale = std::pow(2.0, -p - 1.0);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[i] = 0.5 * (1.0 + solver.eigenvalues()(i));
    rule.weights[i] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

}  // namespace

std::shared_ptr<const Rule1D> gauss_legendre(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: n must be positive");
  }
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Rule1D>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_shared<const Rule1D>(compute_gauss_legendre(n));
  }
  return slot;
}

std::shared_ptr<const Rule1D> gauss_jacobi_unit(int n, double p) {
  if (n < 1) {
    throw std::invalid_argument("gauss_jacobi_unit: n must be positive");
  }
  if (!(p > -1.0)) {
    throw std::invalid_argument("gauss_jacobi_unit: exponent must exceed -1");
  }
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const Rule1D>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, p}];
  if (!slot) {
    slot = std::make_shared<const Rule1D>(compute_gauss_jacobi_unit(n, p));
  }
  return slot;
}

Rule1D periodic_trapezoid(int n, double period) {
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, period / n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = period * i / n;
  }
  return rule;
}

Rule1D legendre_on(int n, double a, double b) {
  const auto base = gauss_legendre(n);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * base->nodes[i];
    rule.weights[i] = half * base->weights[i];
  }
  return rule;
}

void QuadratureSpec::validate() const {
  if (radial_nodes < 2 || angular_nodes < 2 || outer_nodes < 2) {
    throw std::invalid_argument("QuadratureSpec: node counts must be >= 2");
  }
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("QuadratureSpec: rel_tol must lie in (0, 1)");
  }
  if (max_levels < 1) {
    throw std::invalid_argument("QuadratureSpec: max_levels must be >= 1");
  }
}

QuadratureSpec QuadratureSpec::scaled(int factor) const {
  QuadratureSpec out = *this;
  out.radial_nodes *= factor;
  out.angular_nodes *= factor;
  out.outer_nodes *= factor;
  return out;
}

Point parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_point: bad coordinate '" + item + "'");
    }
    if (used != item.size()) {
      throw std::invalid_argument("parse_point: bad coordinate '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty() || values.size() > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("parse_point: expected 1.." + std::to_string(kMaxDim) + " coordinates");
  }
  Point p(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = values[i];
  }
  return p;
}

}  // namespace lballs
