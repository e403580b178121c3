#include "lballs/potential.hpp"
#include "lballs/polar.hpp"

#include <cmath>
#include <stdexcept>

namespace lballs {

ScalarField linear_combination(double a, const ScalarField& u, double b, const ScalarField& v) {
  ScalarField out;
  out.eval = [a, b, fu = u.eval, fv = v.eval](const Point& p) { return a * fu(p) + b * fv(p); };
  if (u.has_exact_L() && v.has_exact_L()) {
    out.exact_L = [a, b, lu = u.exact_L, lv = v.exact_L](const Point& p) { return a * lu(p) + b * lv(p); };
  }
  if (u.support_radius && v.support_radius) {
    out.support_radius = std::max(*u.support_radius, *v.support_radius);
  }
  out.label = "(" + std::to_string(a) + "*" + u.label + "+" + std::to_string(b) + "*" + v.label + ")";
  return out;
}

ScalarField shifted(const ScalarField& u, double c) {
  ScalarField out;
  out.eval = [c, fu = u.eval](const Point& p) { return fu(p) - c; };
  out.exact_L = u.exact_L;
  out.label = u.label + "-const";
  return out;
}

ScalarField constant_field(double c) {
  ScalarField out;
  out.eval = [c](const Point&) { return c; };
  out.exact_L = [](const Point&) { return 0.0; };
  out.label = "const";
  return out;
}

namespace {

using GradFn = std::function<Point(const Point&)>;
using HessFn = std::function<Matrix(const Point&)>;

// Lu = tr(A D^2 u) + <div A, grad u>.
FieldFn make_exact_L(const ModelPtr& model, GradFn grad, HessFn hess) {
  return [m = model, grad = std::move(grad), hess = std::move(hess)](const Point& y) {
    const Matrix a = m->coeff(y);
    const Matrix h = hess(y);
    return (a.cwiseProduct(h)).sum() + m->coeff_divergence(y).dot(grad(y));
  };
}

// G(y) = g(|y|^2) with derivatives g', g'' supplied in q = |y|^2.
struct RadialProfile {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> ddg;
};

ScalarField radial_field(const ModelPtr& model, const RadialProfile& prof, std::string label) {
  ScalarField f;
  f.eval = [g = prof.g](const Point& y) { return g(y.squaredNorm()); };
  GradFn grad = [dg = prof.dg](const Point& y) -> Point { return (2.0 * dg(y.squaredNorm())) * y; };
  HessFn hess = [dg = prof.dg, ddg = prof.ddg](const Point& y) -> Matrix {
    const double q = y.squaredNorm();
    Matrix h = (4.0 * ddg(q)) * (y * y.transpose());
    h += (2.0 * dg(q)) * Matrix::Identity(y.size(), y.size());
    return h;
  };
  f.exact_L = make_exact_L(model, grad, hess);
  f.label = std::move(label);
  return f;
}

// exp(1 + 1/(q/R^2 - 1)) inside |y| < R, so the value at the origin is 1.
RadialProfile bump_profile(double radius) {
  const double inv_r2 = 1.0 / (radius * radius);
  auto inside = [inv_r2](double q) { return q * inv_r2 < 1.0; };
  RadialProfile prof;
  prof.g = [=](double q) {
    if (!inside(q)) {
      return 0.0;
    }
    return std::exp(1.0 + 1.0 / (q * inv_r2 - 1.0));
  };
  prof.dg = [=](double q) {
    if (!inside(q)) {
      return 0.0;
    }
    const double d = q * inv_r2 - 1.0;
    const double h = std::exp(1.0 + 1.0 / d);
    return -h / (d * d) * inv_r2;
  };
  prof.ddg = [=](double q) {
    if (!inside(q)) {
      return 0.0;
    }
    const double d = q * inv_r2 - 1.0;
    const double h = std::exp(1.0 + 1.0 / d);
    return h * (1.0 / (d * d * d * d) + 2.0 / (d * d * d)) * inv_r2 * inv_r2;
  };
  return prof;
}

int parse_index(const std::string& name, const std::string& prefix, int n) {
  const std::string digits = name.substr(prefix.size());
  std::size_t used = 0;
  int index = 0;
  try {
    index = std::stoi(digits, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("catalog: bad index in '" + name + "'");
  }
  if (used != digits.size() || index < 1 || index > n) {
    throw std::invalid_argument("catalog: index out of range in '" + name + "'");
  }
  return index - 1;
}

ScalarField coordinate_field(const ModelPtr& model, int i, std::string label) {
  ScalarField f;
  f.eval = [i](const Point& y) { return y(i); };
  const int n = model->dim();
  f.exact_L = make_exact_L(
      model, [i, n](const Point&) -> Point { return Point::Unit(n, i); },
      [n](const Point&) -> Matrix { return Matrix::Zero(n, n); });
  f.label = std::move(label);
  return f;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"one", "coord:i", "sqnorm", "coordsq:i", "gauss", "hat", "bump", "bump:<radius>", "heis:t"};
}

ScalarField catalog(const std::string& name, const ModelPtr& model) {
  const int n = model->dim();
  if (name == "one") {
    ScalarField f = constant_field(1.0);
    f.label = name;
    return f;
  }
  if (name.rfind("coord:", 0) == 0) {
    return coordinate_field(model, parse_index(name, "coord:", n), name);
  }
  if (name == "heis:t") {
    if (n < 3) {
      throw std::invalid_argument("catalog: heis:t needs dimension >= 3");
    }
    return coordinate_field(model, 2, name);
  }
  if (name.rfind("coordsq:", 0) == 0) {
    const int i = parse_index(name, "coordsq:", n);
    ScalarField f;
    f.eval = [i](const Point& y) { return y(i) * y(i); };
    f.exact_L = make_exact_L(
        model, [i, n](const Point& y) -> Point { return (2.0 * y(i)) * Point::Unit(n, i); },
        [i, n](const Point&) -> Matrix {
          Matrix h = Matrix::Zero(n, n);
          h(i, i) = 2.0;
          return h;
        });
    f.label = name;
    return f;
  }
  if (name == "sqnorm") {
    return radial_field(
        model, {[](double q) { return q; }, [](double) { return 1.0; }, [](double) { return 0.0; }}, name);
  }
  if (name == "gauss") {
    return radial_field(model,
                        {[](double q) { return std::exp(-q); }, [](double q) { return -std::exp(-q); },
                         [](double q) { return std::exp(-q); }},
                        name);
  }
  if (name == "hat") {
    ScalarField f;
    f.eval = [](const Point& y) { return std::max(0.0, 1.0 - y.norm()); };
    f.support_radius = 1.0;
    f.label = name;
    return f;
  }
  if (name == "bump" || name.rfind("bump:", 0) == 0) {
    double radius = 1.0;
    if (name != "bump") {
      const std::string text = name.substr(5);
      std::size_t used = 0;
      try {
        radius = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != text.size() || !(radius > 0.0)) {
        throw std::invalid_argument("catalog: bad bump radius in '" + name + "'");
      }
    }
    ScalarField f = radial_field(model, bump_profile(radius), name);
    f.support_radius = radius;
    return f;
  }
  throw std::invalid_argument("catalog: unknown field '" + name + "'");
}

namespace {

LevelSum potential_level(const OperatorModel& model, const ScalarField& f, const Point& x, int radial,
                         int angular) {
  const double radius = *f.support_radius;
  if (x.norm() > 1.5 * radius) {
    return integrate_euclidean_ball(model.dim(), radius, radial, angular,
                                    [&](const Point& y) { return model.gamma(x, y) * f(y); });
  }
  // Gamma(x, x o delta_s theta) s^{Q-1} = beta s on the unit gauge sphere.
  const double beta = model.beta();
  return integrate_support_rays(model, x, radius, radial, angular,
                                [&](const Point& y, double s) { return beta * s * f(y); });
}

}  // namespace

AverageResult newtonian_potential(const OperatorModel& model, const ScalarField& f, const Point& x,
                                  const QuadratureSpec& quad) {
  require_dim(x, model.dim(), "newtonian_potential");
  if (!f.support_radius) {
    throw std::invalid_argument("newtonian_potential: field '" + f.label + "' has no support radius");
  }
  return refine_levels(quad, [&](int factor) {
    return potential_level(model, f, x, quad.radial_nodes * factor, quad.angular_nodes * factor);
  });
}

double newtonian_potential_fixed(const OperatorModel& model, const ScalarField& f, const Point& x,
                                 int radial_nodes, int angular_nodes) {
  require_dim(x, model.dim(), "newtonian_potential");
  if (!f.support_radius) {
    throw std::invalid_argument("newtonian_potential: field '" + f.label + "' has no support radius");
  }
  return potential_level(model, f, x, radial_nodes, angular_nodes).value;
}

ScalarField potential_field(ModelPtr model, const ScalarField& f, int radial_nodes, int angular_nodes) {
  if (!f.support_radius) {
    throw std::invalid_argument("potential_field: field '" + f.label + "' has no support radius");
  }
  ScalarField u;
  u.eval = [model, f, radial_nodes, angular_nodes](const Point& x) {
    return newtonian_potential_fixed(*model, f, x, radial_nodes, angular_nodes);
  };
  u.exact_L = [g = f.eval](const Point& y) { return -g(y); };
  u.label = "potential(" + f.label + ")";
  return u;
}

}  // namespace lballs
