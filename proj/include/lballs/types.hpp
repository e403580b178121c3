#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lballs {

/// Largest ambient dimension supported by the fixed-capacity point type.
inline constexpr int kMaxDim = 8;

/// A point of R^n. Heap-free for n <= kMaxDim.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Raised when an evaluation is requested at the pole of the fundamental solution.
class SingularityError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when a quadrature produces a non-finite value.
class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require_dim(const Point& p, int n, const char* what) {
  if (p.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " + std::to_string(n) +
                                ", got " + std::to_string(p.size()));
  }
}

/// Parses "a,b,c" into a point.
Point parse_point(const std::string& text);

}  // namespace lballs
