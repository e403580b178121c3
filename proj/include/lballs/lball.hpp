#pragma once

#include "lballs/operator_model.hpp"

namespace lballs {

/// (beta r)^{1/(Q-2)}: the gauge radius of the superlevel set {Gamma > 1/r}.
double gauge_radius(const OperatorModel& model, double r);

/// The L-ball Omega_r(x) = {y : Gamma(x, y) > 1/r}, an exact gauge ball
/// about x for the homogeneous models.
class LBall {
public:
  LBall(ModelPtr model, Point center, double radius);

  const OperatorModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  double gauge_radius() const { return gauge_radius_; }

  /// Strict superlevel test Gamma(center, y) > 1/radius.
  bool contains(const Point& y) const;
  /// Lebesgue measure |Omega_r(x)| = |{N < 1}| * gauge_radius^Q.
  double measure() const;
  /// R with Omega_r(x) inside the Euclidean ball B(center, R).
  double euclidean_bound() const;

private:
  ModelPtr model_;
  Point center_;
  double radius_;
  double gauge_radius_;
};

}  // namespace lballs
