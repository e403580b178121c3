#pragma once

#include "lballs/operator_model.hpp"
#include "lballs/quadrature.hpp"
#include "lballs/scalar_field.hpp"

#include <string>
#include <vector>

namespace lballs {

/// Names accepted by catalog(): one, coord:i, sqnorm, coordsq:i, gauss, hat,
/// bump, bump:<radius>, heis:t. Indices are 1-based.
std::vector<std::string> catalog_names();

/// Looks up a test field with its closed-form L-image for `model` (when the
/// field is C^2) and its support radius (when compactly supported).
/// Throws std::invalid_argument on unknown names or out-of-range indices.
ScalarField catalog(const std::string& name, const ModelPtr& model);

/// u_f(x) = integral Gamma(x,y) f(y) dy with refinement per `quad`.
///
/// Points within 1.5 support radii of the origin use gauge-polar coordinates
/// centered at x (the s^{Q-1} Jacobian cancels the pole), with each polar
/// curve cut exactly at the support sphere. Farther points integrate over the
/// support in Euclidean polar coordinates, where Gamma(x, .) is smooth.
AverageResult newtonian_potential(const OperatorModel& model, const ScalarField& f, const Point& x,
                                  const QuadratureSpec& quad);

/// Single-resolution evaluation used inside nested averages; the result is a
/// smooth function of x because no adaptive switching takes place.
double newtonian_potential_fixed(const OperatorModel& model, const ScalarField& f, const Point& x,
                                 int radial_nodes, int angular_nodes);

/// u_f as a ScalarField (eval at fixed resolution, exact_L = -f).
ScalarField potential_field(ModelPtr model, const ScalarField& f, int radial_nodes = 16, int angular_nodes = 16);

}  // namespace lballs
