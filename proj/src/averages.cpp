#include "lballs/averages.hpp"
#include "lballs/lball.hpp"
#include "lballs/polar.hpp"

#include <cmath>
#include <stdexcept>

namespace lballs {

Alpha::Alpha(double value) : value_(value) {
  if (!(value > -1.0) || !std::isfinite(value)) {
    throw std::invalid_argument("alpha must be a finite number > -1");
  }
}

Alpha default_alpha(const OperatorModel& model) { return Alpha(2.0 / (model.homogeneous_dim() - 2.0)); }

double kernel_K(const OperatorModel& model, Alpha alpha, const Point& x, const Point& y) {
  const Point grad = model.grad_gamma_y(x, y);
  const double form = grad.dot(model.coeff(y) * grad);
  return form / std::pow(model.gamma(x, y), alpha.value() + 2.0);
}

AverageResult mean_M(const OperatorModel& model, Alpha alpha, const ScalarField& u, const Point& x, double r,
                     const QuadratureSpec& quad) {
  require_dim(x, model.dim(), "mean_M");
  const double s_max = gauge_radius(model, r);
  const double a = alpha.value();
  const int big_q = model.homogeneous_dim();
  // K(x, x o delta_s theta) is homogeneous of degree (Q-2) alpha - 2 in s.
  const double q = (big_q - 2.0) * a - 2.0;
  const double prefactor = (a + 1.0) / std::pow(r, a + 1.0);
  AverageResult result = refine_levels(quad, [&](int factor) {
    LevelSum sum = integrate_gauge_ball(model, x, s_max, q, quad.radial_nodes * factor, quad.angular_nodes * factor,
                                        [&](const Point& y, double s) {
                                          return u(y) * kernel_K(model, alpha, x, y) / std::pow(s, q);
                                        });
    sum.value *= prefactor;
    sum.mass *= prefactor;
    return sum;
  });
  return result;
}

AverageResult mean_N(const OperatorModel& model, Alpha alpha, const ScalarField& w, const Point& x, double r,
                     const QuadratureSpec& quad) {
  require_dim(x, model.dim(), "mean_N");
  const double sigma_r = gauge_radius(model, r);
  const double a = alpha.value();
  const int big_q = model.homogeneous_dim();
  const double beta = model.beta();
  const double outer_power = (big_q - 2.0) * (a + 1.0) + 1.0;
  const double prefactor = (a + 1.0) / std::pow(r, a + 1.0);

  return refine_levels(quad, [&](int factor) {
    const auto outer = gauss_jacobi_unit(quad.outer_nodes * factor, outer_power);
    const auto inner = gauss_legendre(quad.radial_nodes * factor);
    const auto& angular = model.angular_grid(quad.angular_nodes * factor);
    LevelSum sum;
    for (std::size_t k = 0; k < outer->size(); ++k) {
      const double sigma = sigma_r * outer->nodes[k];
      const double rho = std::pow(sigma, big_q - 2.0) / beta;
      const double drho = (big_q - 2.0) * std::pow(sigma, big_q - 3.0) / beta;
      // Integral over Omega_rho(x) of (Gamma - 1/rho) w, in s in (0, sigma).
      double ball = 0.0;
      double ball_mass = 0.0;
      for (const auto& node : angular) {
        double ray = 0.0;
        double ray_mass = 0.0;
        for (std::size_t j = 0; j < inner->size(); ++j) {
          const double s = 0.5 * sigma * (1.0 + inner->nodes[j]);
          const Point y = model.polar_point(x, s, node.direction);
          const double weight = (model.gamma(x, y) - 1.0 / rho) * std::pow(s, big_q - 1.0);
          const double value = weight * w(y);
          ray += inner->weights[j] * value;
          ray_mass += inner->weights[j] * std::abs(value);
        }
        ball += node.weight * ray;
        ball_mass += node.weight * ray_mass;
      }
      const double jac = 0.5 * sigma * std::pow(rho, a) * drho / std::pow(sigma, outer_power);
      sum.value += outer->weights[k] * jac * ball;
      sum.mass += outer->weights[k] * std::abs(jac) * ball_mass;
    }
    const double scale = prefactor * std::pow(sigma_r, outer_power + 1.0);
    sum.value *= scale;
    sum.mass *= scale;
    sum.nodes = static_cast<long>(outer->size() * inner->size() * angular.size());
    return sum;
  });
}

AverageResult q_r(const OperatorModel& model, Alpha alpha, const Point& x, double r, const QuadratureSpec& quad,
                  QForm form) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("q_r: r must be positive");
  }
  if (form == QForm::Double) {
    return mean_N(model, alpha, constant_field(1.0), x, r, quad);
  }
  require_dim(x, model.dim(), "q_r");
  const int big_q = model.homogeneous_dim();
  // |Omega_rho| / rho^2 ~ rho^{Q/(Q-2) - 2}.
  const double p = big_q / (big_q - 2.0) - 2.0;
  const double a = alpha.value();
  const double unit_measure = model.unit_ball_measure();
  return refine_levels(quad, [&](int factor) {
    const auto rule = gauss_jacobi_unit(quad.outer_nodes * factor, p);
    LevelSum sum;
    for (std::size_t k = 0; k < rule->size(); ++k) {
      const double u = rule->nodes[k];
      const double rho = r * u;
      const double measure = unit_measure * std::pow(gauge_radius(model, rho), big_q);
      const double value = measure / (rho * rho) * (1.0 - std::pow(u, a + 1.0)) * r / std::pow(u, p);
      sum.value += rule->weights[k] * value;
      sum.mass += rule->weights[k] * std::abs(value);
    }
    sum.nodes = static_cast<long>(rule->size());
    return sum;
  });
}

AverageResult representation_residual(const OperatorModel& model, Alpha alpha, const ScalarField& u,
                                      const Point& x, double r, const QuadratureSpec& quad) {
  if (!u.has_exact_L()) {
    throw std::invalid_argument("representation_residual: field '" + u.label + "' has no exact L-image");
  }
  ScalarField lu;
  lu.eval = u.exact_L;
  lu.label = "L(" + u.label + ")";
  const AverageResult m = mean_M(model, alpha, u, x, r, quad);
  const AverageResult n = mean_N(model, alpha, lu, x, r, quad);
  AverageResult out;
  out.value = u(x) - m.value + n.value;
  out.err_estimate = m.err_estimate + n.err_estimate;
  out.nodes_used = m.nodes_used + n.nodes_used;
  out.converged = m.converged && n.converged;
  return out;
}

double sup_over_ball(const OperatorModel& model, const FieldFn& g, const Point& x, double r, int samples_per_axis) {
  const double s_max = gauge_radius(model, r);
  const auto& angular = model.angular_grid(samples_per_axis);
  double sup = std::abs(g(x));
  for (const auto& node : angular) {
    for (int k = 1; k <= samples_per_axis; ++k) {
      const double s = s_max * k / samples_per_axis;
      sup = std::max(sup, std::abs(g(model.polar_point(x, s, node.direction))));
    }
  }
  return sup;
}

}  // namespace lballs
