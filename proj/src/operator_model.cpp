#include "lballs/operator_model.hpp"
#include "lballs/polar.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lballs {

OperatorModel::OperatorModel(std::string id, int dim, int homogeneous_dim, std::vector<int> sigma, double beta)
    : id_(std::move(id)), dim_(dim), homogeneous_dim_(homogeneous_dim), sigma_(std::move(sigma)), beta_(beta) {
  if (dim_ < 1 || dim_ > kMaxDim) {
    throw std::invalid_argument("OperatorModel: unsupported dimension");
  }
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
    throw std::invalid_argument("OperatorModel: beta must be positive and finite");
  }
}

Point OperatorModel::dilate(double lambda, const Point& p) const {
  require_dim(p, dim_, "dilate");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("dilate: lambda must be positive");
  }
  Point out(dim_);
  for (int i = 0; i < dim_; ++i) {
    out(i) = std::pow(lambda, sigma_[i]) * p(i);
  }
  return out;
}

double OperatorModel::gamma_unnormalized(const Point& x, const Point& y) const {
  require_dim(x, dim_, "gamma");
  require_dim(y, dim_, "gamma");
  const double norm = gauge_norm(group_law(inverse(x), y));
  if (norm == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(norm, 2.0 - homogeneous_dim_);
}

double OperatorModel::gamma(const Point& x, const Point& y) const {
  return beta_ * gamma_unnormalized(x, y);
}

Point OperatorModel::polar_point(const Point& x, double s, const Point& theta) const {
  Point scaled(dim_);
  double power = 1.0;
  int last = 0;
  for (int i = 0; i < dim_; ++i) {
    for (; last < sigma_[i]; ++last) {
      power *= s;
    }
    scaled(i) = power * theta(i);
  }
  return group_law(x, scaled);
}

const std::vector<AngularNode>& OperatorModel::angular_grid(int nodes_per_axis) const {
  std::lock_guard lock(grid_mutex_);
  auto& slot = grid_cache_[nodes_per_axis];
  if (!slot) {
    slot = std::make_unique<const std::vector<AngularNode>>(build_angular_grid(
        chart(), nodes_per_axis, [this](std::span<const double> a) { return sphere_point(a); },
        [this](std::span<const double> a) { return sphere_density(a); }));
  }
  return *slot;
}

double OperatorModel::unit_ball_measure_by_quadrature() const {
  const auto grid = build_angular_grid(
      chart(), 64, [this](std::span<const double> a) { return sphere_point(a); },
      [this](std::span<const double> a) { return sphere_density(a); });
  double total = 0.0;
  for (const auto& node : grid) {
    total += node.weight;
  }
  return total / homogeneous_dim_;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double laplacian_constant(int n) {
  return 1.0 / (n * (n - 2.0) * unit_ball_volume(n));
}

namespace {

class LaplacianModel final : public OperatorModel {
public:
  LaplacianModel(int n, double beta)
      : OperatorModel("laplacian:" + std::to_string(n), n, n, std::vector<int>(n, 1), beta) {}

  double gauge_norm(const Point& p) const override {
    require_dim(p, dim(), "gauge_norm");
    return p.norm();
  }

  Point group_law(const Point& a, const Point& p) const override {
    require_dim(a, dim(), "group_translate");
    require_dim(p, dim(), "group_translate");
    return a + p;
  }

  Point inverse(const Point& a) const override {
    require_dim(a, dim(), "inverse");
    return -a;
  }

  Point grad_gamma_y(const Point& x, const Point& y) const override {
    require_dim(x, dim(), "grad_gamma_y");
    require_dim(y, dim(), "grad_gamma_y");
    const Point w = y - x;
    const double r = w.norm();
    if (r == 0.0) {
      throw SingularityError("grad_gamma_y: evaluation at the pole");
    }
    const int n = dim();
    return (beta() * (2.0 - n) * std::pow(r, -n)) * w;
  }

  Matrix coeff(const Point& y) const override {
    require_dim(y, dim(), "coeff_matrix");
    return Matrix::Identity(dim(), dim());
  }

  Point coeff_divergence(const Point& y) const override {
    require_dim(y, dim(), "coeff_divergence");
    return Point::Zero(dim());
  }

  std::vector<ChartAxis> chart() const override { return hyperspherical_chart(dim()); }
  Point sphere_point(std::span<const double> angles) const override {
    return hyperspherical_point(dim(), angles);
  }
  double sphere_density(std::span<const double> angles) const override {
    return hyperspherical_density(dim(), angles);
  }

  double euclidean_bound(const Point& x, double s) const override {
    require_dim(x, dim(), "euclidean_bound");
    return s;
  }

  double gauge_extent(const Point& x, double radius) const override {
    require_dim(x, dim(), "gauge_extent");
    return x.norm() + radius;
  }

  double unit_ball_measure() const override { return unit_ball_volume(dim()); }

  ModelPtr with_beta(double beta) const override { return std::make_shared<LaplacianModel>(dim(), beta); }
};

class HeisenbergModel final : public OperatorModel {
public:
  explicit HeisenbergModel(double beta) : OperatorModel("heisenberg1", 3, 4, {1, 1, 2}, beta) {
    unit_measure_ = unit_ball_measure_by_quadrature();
  }

  double gauge_norm(const Point& p) const override {
    require_dim(p, 3, "gauge_norm");
    const double z2 = p(0) * p(0) + p(1) * p(1);
    return std::pow(z2 * z2 + p(2) * p(2), 0.25);
  }

  Point group_law(const Point& a, const Point& p) const override {
    require_dim(a, 3, "group_translate");
    require_dim(p, 3, "group_translate");
    Point out(3);
    out(0) = a(0) + p(0);
    out(1) = a(1) + p(1);
    out(2) = a(2) + p(2) + 2.0 * (a(1) * p(0) - a(0) * p(1));
    return out;
  }

  Point inverse(const Point& a) const override {
    require_dim(a, 3, "inverse");
    return -a;
  }

  Point grad_gamma_y(const Point& x, const Point& y) const override {
    require_dim(x, 3, "grad_gamma_y");
    require_dim(y, 3, "grad_gamma_y");
    const Point w = group_law(inverse(x), y);
    const double z2 = w(0) * w(0) + w(1) * w(1);
    const double n4 = z2 * z2 + w(2) * w(2);
    if (n4 == 0.0) {
      throw SingularityError("grad_gamma_y: evaluation at the pole");
    }
    // F(w) = n4^{-1/2}; dw3/dy1 = -2 x2, dw3/dy2 = 2 x1.
    const double f3 = std::pow(n4, -1.5);
    const double dw1 = -2.0 * f3 * z2 * w(0);
    const double dw2 = -2.0 * f3 * z2 * w(1);
    const double dw3 = -f3 * w(2);
    Point g(3);
    g(0) = beta() * (dw1 - 2.0 * x(1) * dw3);
    g(1) = beta() * (dw2 + 2.0 * x(0) * dw3);
    g(2) = beta() * dw3;
    return g;
  }

  Matrix coeff(const Point& y) const override {
    require_dim(y, 3, "coeff_matrix");
    // A = S S^T with columns X1 = (1, 0, 2 y2), X2 = (0, 1, -2 y1).
    Matrix s(3, 2);
    s << 1.0, 0.0, 0.0, 1.0, 2.0 * y(1), -2.0 * y(0);
    return s * s.transpose();
  }

  // Both vector fields have divergence-free coefficients.
  Point coeff_divergence(const Point& y) const override {
    require_dim(y, 3, "coeff_divergence");
    return Point::Zero(3);
  }

  // Axis 0: v in [-1,1] with psi = (pi/4)(3v - v^3), so sqrt(cos psi) is
  // analytic in v at the poles. Axis 1: azimuth.
  std::vector<ChartAxis> chart() const override {
    return {{-1.0, 1.0, false}, {0.0, 2.0 * std::numbers::pi, true}};
  }

  Point sphere_point(std::span<const double> angles) const override {
    const double v = angles[0];
    const double phi = angles[1];
    const double psi = 0.25 * std::numbers::pi * (3.0 * v - v * v * v);
    const double radial = std::sqrt(std::max(0.0, std::cos(psi)));
    Point p(3);
    p << radial * std::cos(phi), radial * std::sin(phi), std::sin(psi);
    return p;
  }

  // dy = s^3 ds dphi dpsi for y = delta_s(sqrt(cos psi) e^{i phi}, sin psi).
  double sphere_density(std::span<const double> angles) const override {
    const double v = angles[0];
    return 0.75 * std::numbers::pi * (1.0 - v * v);
  }

  double euclidean_bound(const Point& x, double s) const override {
    require_dim(x, 3, "euclidean_bound");
    // y - x = (w_z, w_t + 2 (x2 w1 - x1 w2)) with |w_z| <= s, |w_t| <= s^2.
    const double xz = std::hypot(x(0), x(1));
    const double vertical = s * s + 2.0 * xz * s;
    return std::sqrt(s * s + vertical * vertical);
  }

  double gauge_extent(const Point& x, double radius) const override {
    require_dim(x, 3, "gauge_extent");
    const double xz = std::hypot(x(0), x(1));
    const double horizontal = radius + xz;
    const double vertical = radius + std::abs(x(2)) + 2.0 * xz * radius;
    return std::pow(std::pow(horizontal, 4) + vertical * vertical, 0.25);
  }

  double unit_ball_measure() const override { return unit_measure_; }

  ModelPtr with_beta(double beta) const override { return std::make_shared<HeisenbergModel>(beta); }

private:
  double unit_measure_ = 0.0;
};

}  // namespace

ModelPtr make_laplacian(int n) {
  if (n < 3 || n > kMaxDim) {
    throw std::invalid_argument("laplacian: dimension must lie in [3, " + std::to_string(kMaxDim) + "]");
  }
  return std::make_shared<LaplacianModel>(n, laplacian_constant(n));
}

ModelPtr make_heisenberg(double beta) { return std::make_shared<HeisenbergModel>(beta); }

double heisenberg_reference_beta() { return 1.0 / (8.0 * std::numbers::pi); }

double apply_L_fd(const OperatorModel& model, const std::function<double(const Point&)>& u, const Point& x,
                  double h) {
  require_dim(x, model.dim(), "apply_L_fd");
  if (!(h > 0.0)) {
    throw std::invalid_argument("apply_L_fd: h must be positive");
  }
  const int n = model.dim();
  auto flux = [&](const Point& z, int i, double step) {
    const Matrix a = model.coeff(z);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      if (a(i, j) == 0.0) {
        continue;
      }
      Point plus = z;
      Point minus = z;
      plus(j) += 0.5 * step;
      minus(j) -= 0.5 * step;
      total += a(i, j) * (u(plus) - u(minus)) / step;
    }
    return total;
  };
  auto level = [&](double step) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      Point plus = x;
      Point minus = x;
      plus(i) += 0.5 * step;
      minus(i) -= 0.5 * step;
      total += (flux(plus, i, step) - flux(minus, i, step)) / step;
    }
    return total;
  };
  return (4.0 * level(0.5 * h) - level(h)) / 3.0;
}

}  // namespace lballs
