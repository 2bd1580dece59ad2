#include "suregp/shrinkage.hpp"

#include "suregp/error.hpp"

#include <cmath>

namespace suregp {

double ThresholdSpec::level_at(const CovarianceModel& model, double t) const {
  if (lambda < 0.0 || std::isnan(lambda)) throw DomainError("threshold level must be >= 0");
  return lambda * std::sqrt(model.variance(t));
}

double eta_soft(double y) {
  const double excess = std::abs(y) - 1.0;
  if (excess <= 0.0) return 0.0;
  return std::copysign(excess, y);
}

double eta_hard(double y) { return std::abs(y) > 1.0 ? y : 0.0; }

double shrink(ThresholdKind kind, double x, double centre, double band) {
  if (band == 0.0) return x;
  const double d = x - centre;
  if (kind == ThresholdKind::Hard) return std::abs(d) < band ? centre : x;
  // Written as α + sign(d)(|d| − band)⁺ so the output never crosses the centre.
  const double excess = std::abs(d) - band;
  if (excess <= 0.0) return centre;
  return centre + std::copysign(excess, d);
}

double soft_correction_derivative(double x, double centre, double band) {
  return std::abs(x - centre) <= band ? -1.0 : 0.0;
}

SamplePath apply_estimator(const SamplePath& path, const ThresholdSpec& spec, const CovarianceModel& model) {
  validate_path(path);
  SamplePath out = path;
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    const double t = path.grid[i];
    out.values[i] = shrink(spec.kind, path.values[i], spec.alpha(t), spec.level_at(model, t));
  }
  return out;
}

}  // namespace suregp
