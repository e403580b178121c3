#include "lballs/asymptotic.hpp"
#include "lballs/lball.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lballs {

void RadiusSchedule::validate() const {
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("RadiusSchedule: r0 must be positive");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("RadiusSchedule: ratio must lie in (0, 1)");
  }
  if (count < 3) {
    throw std::invalid_argument("RadiusSchedule: count must be >= 3");
  }
}

std::vector<double> RadiusSchedule::radii() const {
  validate();
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    out[k] = r0 * std::pow(ratio, k);
  }
  return out;
}

QuotientResult quotient(const OperatorModel& model, Alpha alpha, const ScalarField& u, const Point& x, double r,
                        const QuadratureSpec& quad) {
  const double center = u(x);
  const AverageResult deficit = mean_M(model, alpha, shifted(u, center), x, r, quad);
  const AverageResult q = q_r(model, alpha, x, r, quad, QForm::Simplified);
  QuotientResult out;
  out.value = deficit.value / q.value;
  out.M_value = deficit.value + center;
  out.Q_value = q.value;
  out.quad_err = (deficit.err_estimate + std::abs(out.value) * q.err_estimate) / q.value;
  out.converged = deficit.converged && q.converged;
  return out;
}

ConvergenceReport estimate(const OperatorModel& model, Alpha alpha, const ScalarField& u, const Point& x,
                           const RadiusSchedule& schedule, const QuadratureSpec& quad, double tolerance) {
  const std::vector<double> radii = schedule.radii();
  ConvergenceReport report;
  for (const double r : radii) {
    const QuotientResult q = quotient(model, alpha, u, x, r, quad);
    report.records.push_back({r, q.M_value, q.Q_value, q.value, q.quad_err});
  }
  const auto& rec = report.records;
  const std::size_t n = rec.size();
  const double q1 = rec[n - 3].quotient;
  const double q2 = rec[n - 2].quotient;
  const double q3 = rec[n - 1].quotient;
  const double d_prev = q2 - q1;
  const double d_last = q3 - q2;
  const double noise = 3.0 * (rec[n - 1].quad_err + rec[n - 2].quad_err);
  const double noise_prev = 3.0 * (rec[n - 2].quad_err + rec[n - 3].quad_err);

  // Successive gauge radii shrink by ratio^{1/(Q-2)}.
  const double gauge_ratio = std::pow(schedule.ratio, 1.0 / (model.homogeneous_dim() - 2.0));
  report.extrapolated = q3;
  report.observed_order = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(d_last) > noise && std::abs(d_prev) > noise_prev) {
    const double contraction = d_last / d_prev;
    if (contraction > 0.0 && contraction < 1.0) {
      const double p = std::log(contraction) / std::log(gauge_ratio);
      if (std::isfinite(p) && p > 0.0) {
        report.observed_order = p;
        report.extrapolated = q3 + d_last * contraction / (1.0 - contraction);
      }
    }
  }
  const bool decreasing = std::abs(d_last) < std::abs(d_prev) || std::abs(d_last) <= noise;
  report.converged = decreasing && std::abs(d_last) < tolerance;
  return report;
}

RadiusSchedule gauge_schedule(const OperatorModel& model, double gauge_radius0, double ratio, int count) {
  if (!(gauge_radius0 > 0.0)) {
    throw std::invalid_argument("gauge_schedule: gauge radius must be positive");
  }
  RadiusSchedule schedule;
  schedule.r0 = std::pow(gauge_radius0, model.homogeneous_dim() - 2.0) / model.beta();
  schedule.ratio = ratio;
  schedule.count = count;
  schedule.validate();
  return schedule;
}

RadiusSchedule potential_schedule(const OperatorModel& model, const ScalarField& f, const Point& x) {
  if (!f.support_radius) {
    throw std::invalid_argument("potential_schedule: field has no support radius");
  }
  const double distance = *f.support_radius - x.norm();
  if (!(distance > 0.0)) {
    throw std::invalid_argument("potential_schedule: point lies outside the support");
  }
  return gauge_schedule(model, 0.5 * distance);
}

}  // namespace lballs
