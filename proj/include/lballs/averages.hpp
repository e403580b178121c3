#pragma once

#include "lballs/operator_model.hpp"
#include "lballs/quadrature.hpp"
#include "lballs/scalar_field.hpp"

namespace lballs {

/// Exponent alpha > -1 of the weighted averages.
class Alpha {
public:
  explicit Alpha(double value);
  double value() const { return value_; }

private:
  double value_;
};

/// 2/(Q-2): makes the Laplacian kernel constant (Gauss average), and is
/// alpha = 1 on H^1.
Alpha default_alpha(const OperatorModel& model);

/// K(x,y) = <A(y) grad_y Gamma, grad_y Gamma> / Gamma^{alpha+2}. Throws
/// SingularityError at y == x.
double kernel_K(const OperatorModel& model, Alpha alpha, const Point& x, const Point& y);

/// M_r(u)(x) = (alpha+1)/r^{alpha+1} * integral over Omega_r(x) of u K.
AverageResult mean_M(const OperatorModel& model, Alpha alpha, const ScalarField& u, const Point& x, double r,
                     const QuadratureSpec& quad);

/// N_r(w)(x) = (alpha+1)/r^{alpha+1} * int_0^r rho^alpha
///             int_{Omega_rho(x)} (Gamma(x,y) - 1/rho) w(y) dy drho.
///
/// The outer variable is the gauge radius sigma of Omega_rho, integrated with
/// a Gauss-Jacobi rule carrying the sigma^{(Q-2)(alpha+1)+1} behaviour of the
/// integrand; the inner integral runs over Omega_rho in gauge-polar form.
AverageResult mean_N(const OperatorModel& model, Alpha alpha, const ScalarField& w, const Point& x, double r,
                     const QuadratureSpec& quad);

enum class QForm {
  /// N_r(1) through the double integral.
  Double,
  /// int_0^r |Omega_rho| / rho^2 (1 - (rho/r)^{alpha+1}) drho.
  Simplified,
};

AverageResult q_r(const OperatorModel& model, Alpha alpha, const Point& x, double r, const QuadratureSpec& quad,
                  QForm form);

/// u(x) - M_r(u)(x) + N_r(Lu)(x); vanishes for C^2 u. Requires u.exact_L.
AverageResult representation_residual(const OperatorModel& model, Alpha alpha, const ScalarField& u,
                                      const Point& x, double r, const QuadratureSpec& quad);

/// Sampled sup of |g| over the closure of Omega_r(x): a polar grid with
/// `samples_per_axis` nodes per chart axis and radial levels, including the
/// boundary shell.
double sup_over_ball(const OperatorModel& model, const FieldFn& g, const Point& x, double r,
                     int samples_per_axis = 24);

}  // namespace lballs
