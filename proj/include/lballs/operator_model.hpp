#pragma once

#include "lballs/quadrature.hpp"
#include "lballs/types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lballs {

/// One coordinate of the unit gauge sphere chart.
struct ChartAxis {
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;
};

/// A node of the product rule on the unit gauge sphere {N = 1}.
/// `weight` already includes the polar density J(theta).
struct AngularNode {
  Point direction;
  double weight = 0.0;
};

/// A divergence-form operator L = sum_ij d_i (a_ij d_j) whose fundamental
/// solution is Gamma(x,y) = beta * N(x^{-1} o y)^{2-Q} for a homogeneous
/// gauge N. Immutable after construction; safe to share across threads.
///
/// Gauge-polar coordinates y = x o delta_s(theta) give
/// dy = s^{Q-1} J(theta) ds dtheta, with J supplied by the sphere chart.
class OperatorModel {
public:
  virtual ~OperatorModel() = default;

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  int homogeneous_dim() const { return homogeneous_dim_; }
  const std::vector<int>& sigma() const { return sigma_; }
  double beta() const { return beta_; }

  virtual double gauge_norm(const Point& p) const = 0;
  virtual Point group_law(const Point& a, const Point& p) const = 0;
  virtual Point inverse(const Point& a) const = 0;
  Point dilate(double lambda, const Point& p) const;

  /// beta * N(x^{-1} o y)^{2-Q}; +infinity when x == y.
  double gamma(const Point& x, const Point& y) const;
  /// Gamma without the normalization constant (beta = 1).
  double gamma_unnormalized(const Point& x, const Point& y) const;
  /// Euclidean gradient of Gamma(x, .) at y. Throws SingularityError at y == x.
  virtual Point grad_gamma_y(const Point& x, const Point& y) const = 0;
  /// Symmetric PSD coefficient matrix A(y).
  virtual Matrix coeff(const Point& y) const = 0;
  /// Column divergence (sum_i d_i a_ij)_j, so that Lu = tr(A D^2 u) + <div A, grad u>.
  virtual Point coeff_divergence(const Point& y) const = 0;

  /// Chart of the unit gauge sphere used by every polar quadrature.
  virtual std::vector<ChartAxis> chart() const = 0;
  virtual Point sphere_point(std::span<const double> angles) const = 0;
  virtual double sphere_density(std::span<const double> angles) const = 0;
  /// Product rule on the chart: Gauss-Legendre with `nodes_per_axis` on
  /// bounded axes, trapezoid with twice that on periodic ones. Cached.
  const std::vector<AngularNode>& angular_grid(int nodes_per_axis) const;

  /// x o delta_s(theta).
  Point polar_point(const Point& x, double s, const Point& theta) const;

  /// R with {y : N(x^{-1} o y) < s} contained in the Euclidean ball B(x, R).
  virtual double euclidean_bound(const Point& x, double s) const = 0;
  /// An upper bound of N(x^{-1} o y) over the Euclidean ball |y| <= radius.
  virtual double gauge_extent(const Point& x, double radius) const = 0;

  /// Lebesgue measure of the unit gauge ball {N < 1}.
  virtual double unit_ball_measure() const = 0;

  /// Same operator with a different fundamental-solution constant.
  virtual std::shared_ptr<const OperatorModel> with_beta(double beta) const = 0;

protected:
  OperatorModel(std::string id, int dim, int homogeneous_dim, std::vector<int> sigma, double beta);

  /// (1/Q) * integral of J over the chart, evaluated with a fine product rule.
  double unit_ball_measure_by_quadrature() const;

private:
  std::string id_;
  int dim_;
  int homogeneous_dim_;
  std::vector<int> sigma_;
  double beta_;

  mutable std::mutex grid_mutex_;
  mutable std::map<int, std::unique_ptr<const std::vector<AngularNode>>> grid_cache_;
};

using ModelPtr = std::shared_ptr<const OperatorModel>;

/// Volume of the Euclidean unit ball in R^n.
double unit_ball_volume(int n);
/// c_n = 1 / (n (n-2) omega_n).
double laplacian_constant(int n);

/// Delta on R^n, n >= 3.
ModelPtr make_laplacian(int n);

/// Sub-Laplacian X1^2 + X2^2 on the first Heisenberg group, with
/// X1 = d1 + 2 x2 dt, X2 = d2 - 2 x1 dt,
/// (a o p)_t = a_t + p_t + 2 (a2 p1 - a1 p2),
/// N(z, t) = (|z|^4 + t^2)^{1/4}.
ModelPtr make_heisenberg(double beta);

/// beta for which M_r(1) = 1 holds on H^1 in closed form.
double heisenberg_reference_beta();

/// Persisted calibration results, one line per model:
/// model_id<TAB>beta<TAB>nodes<TAB>iso8601
class CalibrationCache {
public:
  struct Entry {
    double beta = 0.0;
    long nodes = 0;
    std::string timestamp;
  };

  static CalibrationCache load(const std::string& path);
  void save(const std::string& path) const;

  std::optional<Entry> find(const std::string& model_id) const;
  void put(const std::string& model_id, Entry entry);
  const std::map<std::string, Entry>& entries() const { return entries_; }

private:
  std::map<std::string, Entry> entries_;
};

/// Resolves "laplacian:<n>" or "heisenberg1". The Heisenberg constant comes
/// from `cache` when it holds an entry, otherwise it is calibrated.
ModelPtr model_from_id(const std::string& model_id, const CalibrationCache* cache = nullptr);

/// Numerical (Lu)(x) as sum_i D_i (a_ij D_j u) with centered half-step
/// differences, Richardson-combined over steps h and h/2.
double apply_L_fd(const OperatorModel& model, const std::function<double(const Point&)>& u,
                  const Point& x, double h = 1e-3);

struct CalibrationResult {
  double beta = 0.0;
  double err_estimate = 0.0;
  long nodes_used = 0;
};

/// Resolution used when beta is calibrated on demand: radial and angular 16,
/// rel_tol 1e-10. Coarser rules leave beta visibly off 1/(8 pi) on H^1, which
/// breaks M_r(1) = 1.
QuadratureSpec calibration_quadrature();

/// Solves beta * integral N^{2-Q}(y) (L phi)(y) dy = -phi(0) for the smooth
/// bump phi of the given Euclidean support radius (phi(0) = 1).
CalibrationResult calibrate(const OperatorModel& model, const QuadratureSpec& quad, double bump_radius = 1.0);

}  // namespace lballs
