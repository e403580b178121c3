#pragma once

#include "lballs/asymptotic.hpp"
#include "lballs/quadrature.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lballs {

/// Everything a CLI invocation depends on, after merging flags, config file
/// and defaults (in that order of precedence).
struct RunConfig {
  std::string command;
  std::string model_id = "laplacian:3";
  std::optional<double> alpha;
  QuadratureSpec quad;
  std::optional<double> r0;
  double ratio = 0.5;
  int count = 6;
  std::vector<std::string> points;
  std::vector<double> radii;
  std::string field_name = "sqnorm";
  /// "potential" averages u_f for f = field; "direct" averages the field itself.
  std::string mode;
  int potential_radial = 16;
  int potential_angular = 16;
  std::string output_dir;
  std::string format = "csv";
  std::string beta_cache = "lballs_beta.tsv";
  std::uint64_t seed = 20240611;
  std::vector<std::string> only;
  bool list = false;
};

/// Exit status: 0 success, 1 suite violation or quadrature failure,
/// 2 bad arguments. Tables go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lballs
