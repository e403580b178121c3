#include "lballs/operator_model.hpp"
#include "lballs/polar.hpp"
#include "lballs/potential.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace lballs {

CalibrationResult calibrate(const OperatorModel& model, const QuadratureSpec& quad, double bump_radius) {
  const ModelPtr unit = model.with_beta(1.0);
  std::ostringstream name;
  name << std::setprecision(17) << "bump:" << bump_radius;
  const ScalarField phi = catalog(name.str(), unit);
  const Point origin = Point::Zero(model.dim());
  // N^{2-Q} s^{Q-1} = s along y = delta_s(theta).
  const AverageResult integral = refine_levels(quad, [&](int factor) {
    return integrate_support_rays(*unit, origin, bump_radius, quad.radial_nodes * factor,
                                  quad.angular_nodes * factor,
                                  [&](const Point& y, double s) { return s * phi.exact_L(y); });
  });
  if (!std::isfinite(integral.value) || integral.value == 0.0) {
    throw QuadratureError("calibrate: degenerate calibration integral");
  }
  CalibrationResult result;
  result.beta = -phi(origin) / integral.value;
  result.err_estimate = std::abs(result.beta) * integral.err_estimate / std::abs(integral.value);
  result.nodes_used = integral.nodes_used;
  if (!(result.beta > 0.0)) {
    throw QuadratureError("calibrate: non-positive constant");
  }
  return result;
}

CalibrationCache CalibrationCache::load(const std::string& path) {
  CalibrationCache cache;
  std::ifstream in(path);
  if (!in) {
    return cache;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::string id;
    std::string beta_text;
    std::string nodes_text;
    Entry entry;
    if (!std::getline(fields, id, '\t') || !std::getline(fields, beta_text, '\t') ||
        !std::getline(fields, nodes_text, '\t') || !std::getline(fields, entry.timestamp)) {
      throw std::runtime_error("calibration cache: malformed line '" + line + "'");
    }
    entry.beta = std::stod(beta_text);
    entry.nodes = std::stol(nodes_text);
    cache.entries_[id] = entry;
  }
  return cache;
}

void CalibrationCache::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("calibration cache: cannot write '" + path + "'");
  }
  out << std::setprecision(17);
  for (const auto& [id, entry] : entries_) {
    out << id << '\t' << entry.beta << '\t' << entry.nodes << '\t' << entry.timestamp << '\n';
  }
}

std::optional<CalibrationCache::Entry> CalibrationCache::find(const std::string& model_id) const {
  const auto it = entries_.find(model_id);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void CalibrationCache::put(const std::string& model_id, Entry entry) { entries_[model_id] = std::move(entry); }

QuadratureSpec calibration_quadrature() {
  QuadratureSpec quad;
  quad.radial_nodes = 16;
  quad.angular_nodes = 16;
  quad.rel_tol = 1e-10;
  return quad;
}

ModelPtr model_from_id(const std::string& model_id, const CalibrationCache* cache) {
  const std::string prefix = "laplacian:";
  if (model_id.rfind(prefix, 0) == 0) {
    const std::string digits = model_id.substr(prefix.size());
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) {
      throw std::invalid_argument("model: bad dimension in '" + model_id + "'");
    }
    return make_laplacian(n);
  }
  if (model_id == "heisenberg1") {
    if (cache) {
      if (const auto entry = cache->find(model_id)) {
        return make_heisenberg(entry->beta);
      }
    }
    return make_heisenberg(calibrate(*make_heisenberg(1.0), calibration_quadrature()).beta);
  }
  throw std::invalid_argument("model: unknown id '" + model_id + "' (expected laplacian:<n> or heisenberg1)");
}

}  // namespace lballs
