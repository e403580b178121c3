#include "lballs/lball.hpp"

#include <cmath>
#include <stdexcept>

namespace lballs {

double gauge_radius(const OperatorModel& model, double r) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("gauge_radius: r must be positive");
  }
  return std::pow(model.beta() * r, 1.0 / (model.homogeneous_dim() - 2.0));
}

LBall::LBall(ModelPtr model, Point center, double radius)
    : model_(std::move(model)), center_(std::move(center)), radius_(radius) {
  require_dim(center_, model_->dim(), "LBall");
  gauge_radius_ = lballs::gauge_radius(*model_, radius_);
}

bool LBall::contains(const Point& y) const {
  return model_->gamma(center_, y) > 1.0 / radius_;
}

double LBall::measure() const {
  return model_->unit_ball_measure() * std::pow(gauge_radius_, model_->homogeneous_dim());
}

double LBall::euclidean_bound() const { return model_->euclidean_bound(center_, gauge_radius_); }

}  // namespace lballs
