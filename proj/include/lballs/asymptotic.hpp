#pragma once

#include "lballs/averages.hpp"

#include <vector>

namespace lballs {

/// Geometric radii r_k = r0 * ratio^k, k = 0..count-1.
struct RadiusSchedule {
  double r0 = 1.0;
  double ratio = 0.5;
  int count = 6;

  void validate() const;
  std::vector<double> radii() const;
};

struct QuotientResult {
  double value = 0.0;
  /// M_r(u)(x).
  double M_value = 0.0;
  double Q_value = 0.0;
  /// Propagated quadrature error of the quotient.
  double quad_err = 0.0;
  bool converged = true;
};

/// (M_r(u)(x) - u(x)) / Q_r(x). The numerator is evaluated as M_r(u - u(x))
/// (M_r reproduces constants), so its relative accuracy does not degrade as
/// r -> 0.
QuotientResult quotient(const OperatorModel& model, Alpha alpha, const ScalarField& u, const Point& x, double r,
                        const QuadratureSpec& quad);

struct ConvergenceRecord {
  double r = 0.0;
  double M_value = 0.0;
  double Q_value = 0.0;
  double quotient = 0.0;
  double quad_err = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;
  double extrapolated = 0.0;
  /// Fitted exponent p of quotient(r) = L + C s(r)^p, s the gauge radius;
  /// NaN when the fit fell back to the last value.
  double observed_order = 0.0;
  bool converged = false;
};

/// Quotients along the schedule plus a three-point extrapolation of the
/// r -> 0 limit in the gauge radius.
ConvergenceReport estimate(const OperatorModel& model, Alpha alpha, const ScalarField& u, const Point& x,
                           const RadiusSchedule& schedule, const QuadratureSpec& quad, double tolerance = 1e-3);

/// Schedule whose first ball has gauge radius `gauge_radius0`.
RadiusSchedule gauge_schedule(const OperatorModel& model, double gauge_radius0, double ratio = 0.5, int count = 6);

/// Schedule for a potential of f about x: gauge_radius(r0) is half the
/// Euclidean distance from x to the boundary of supp f, ratio 1/2, 6 radii.
RadiusSchedule potential_schedule(const OperatorModel& model, const ScalarField& f, const Point& x);

}  // namespace lballs
