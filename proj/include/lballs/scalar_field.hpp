#pragma once

#include "lballs/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lballs {

using FieldFn = std::function<double(const Point&)>;

/// An evaluatable function R^n -> R with optional closed-form L-image and
/// Euclidean support radius (eval vanishes for |p| > support_radius).
struct ScalarField {
  FieldFn eval;
  FieldFn exact_L;
  std::optional<double> support_radius;
  std::string label;

  double operator()(const Point& p) const { return eval(p); }
  bool has_exact_L() const { return static_cast<bool>(exact_L); }
};

/// a*u + b*v; exact_L and support are combined when both operands carry them.
ScalarField linear_combination(double a, const ScalarField& u, double b, const ScalarField& v);

/// u - c.
ScalarField shifted(const ScalarField& u, double c);

/// Constant field c with exact_L = 0.
ScalarField constant_field(double c);

}  // namespace lballs
