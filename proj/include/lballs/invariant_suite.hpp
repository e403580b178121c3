#pragma once

#include "lballs/operator_model.hpp"
#include "lballs/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lballs {

enum class CheckStatus { Pass, Fail, Skip };

const char* to_string(CheckStatus status);

struct InvariantOutcome {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  /// Worst observed quantity against its tolerance, or the skip reason.
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  QuadratureSpec quad;
  /// Restrict to these names; empty runs everything.
  std::vector<std::string> only;
};

/// Every invariant the suite knows, in execution order.
std::vector<std::string> invariant_names();

/// Runs the battery on `model`. `on_result` is called after each check.
/// Throws std::invalid_argument for names in `only` that do not exist.
std::vector<InvariantOutcome> run_suite(const ModelPtr& model, const SuiteOptions& options,
                                        const std::function<void(const InvariantOutcome&)>& on_result = {});

}  // namespace lballs
