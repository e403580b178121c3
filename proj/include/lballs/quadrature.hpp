#pragma once

#include <memory>
#include <vector>

namespace lballs {

/// One-dimensional rule: nodes and weights on a fixed reference interval.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n nodes on [-1, 1]. Cached, thread-safe.
std::shared_ptr<const Rule1D> gauss_legendre(int n);

/// Gauss-Jacobi rule for the weight s^p on [0, 1] (p > -1), n nodes.
/// Integrates s^p q(s) exactly for polynomials q of degree <= 2n-1.
std::shared_ptr<const Rule1D> gauss_jacobi_unit(int n, double p);

/// Composite trapezoidal rule for a periodic integrand on [0, period).
Rule1D periodic_trapezoid(int n, double period);

/// Maps a [-1,1] Gauss-Legendre rule to [a,b].
Rule1D legendre_on(int n, double a, double b);

/// Value of an average operator or potential together with its quadrature
/// diagnostics.
struct AverageResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long nodes_used = 0;
  /// False when refinement was exhausted above rel_tol; value is the best one.
  bool converged = true;
};

/// Controls for every average/potential quadrature in the library.
///
/// Counts are the level-0 resolution; each refinement level doubles every
/// count. The reported error is the difference between the last two levels
/// plus a round-off floor.
struct QuadratureSpec {
  int radial_nodes = 6;
  int angular_nodes = 12;
  int outer_nodes = 12;
  bool refine = true;
  double rel_tol = 1e-7;
  int max_levels = 3;

  /// Throws std::invalid_argument unless counts >= 2 and rel_tol in (0,1).
  void validate() const;
  QuadratureSpec scaled(int factor) const;
};

}  // namespace lballs
