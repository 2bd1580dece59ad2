#include "suregp/sure.hpp"

#include "suregp/error.hpp"

#include <algorithm>
#include <cmath>

namespace suregp {

namespace {

SureReport finish(SureReport r) {
  r.value = r.baseline + r.quadratic + r.correction;
  if (!std::isfinite(r.value)) throw NumericError("SURE evaluation produced a non-finite value");
  return r;
}

// Path value at a node time; exact at grid points.
double value_at(const SamplePath& path, double t) { return interpolate(path, t); }

void check_lambda(double lam) {
  if (lam < 0.0 || std::isnan(lam)) throw DomainError("threshold level must be >= 0");
}

}  // namespace

SureReport sure_generic(const SamplePath& path, const CorrectionFn& xi, const CorrectionFn& dxi,
                        const CovarianceModel& model, const RiskMeasure& mu) {
  validate_path(path);
  SureReport r;
  r.alpha_id = "generic";
  r.measure_id = mu.id();
  for (const auto& node : quadrature_nodes(mu, path.grid)) {
    const double x = value_at(path, node.time);
    const double g = model.variance(node.time);
    const double e = xi(node.time, x);
    const double de = dxi(node.time, x);
    if (!std::isfinite(e) || !std::isfinite(de))
      throw NumericError("correction or its derivative is not finite on the path");
    r.baseline += node.weight * g;
    r.quadratic += node.weight * e * e;
    r.correction += 2.0 * node.weight * g * de;
  }
  return finish(r);
}

SureReport sure_soft(const SamplePath& path, const DriftFunction& alpha, double lam,
                     const CovarianceModel& model, const RiskMeasure& mu) {
  validate_path(path);
  check_lambda(lam);
  SureReport r;
  r.kind = ThresholdKind::Soft;
  r.alpha_id = alpha.id();
  r.lambda = lam;
  r.measure_id = mu.id();
  for (const auto& node : quadrature_nodes(mu, path.grid)) {
    const double x = value_at(path, node.time);
    const double g = model.variance(node.time);
    const double band = lam * std::sqrt(g);
    const double d = x - alpha(node.time);
    r.baseline += node.weight * g;
    r.quadratic += node.weight * std::min(d * d, band * band);
    if (std::abs(d) <= band) r.correction -= 2.0 * node.weight * g;
  }
  return finish(r);
}

SureReport sure_soft_occupation(const StandardizedPath& z, double lam) {
  check_lambda(lam);
  SureReport r;
  r.kind = ThresholdKind::Soft;
  r.lambda = lam;
  r.measure_id = "canonical";
  r.baseline = z.duration();
  r.quadratic = clipped_square_integral(z, lam);
  r.correction = -2.0 * occupation_time(z, lam);
  return finish(r);
}

SureReport sure_soft_occupation(const SamplePath& path, const DriftFunction& alpha, double lam,
                                const CovarianceModel& model) {
  auto r = sure_soft_occupation(standardize(path, alpha, model), lam);
  r.alpha_id = alpha.id();
  return r;
}

SureReport sure_hard(const StandardizedPath& z, double lam, std::optional<double> bandwidth) {
  check_lambda(lam);
  const double eps = bandwidth.value_or(default_bandwidth(z));
  const auto lt = local_time(z, lam, eps);
  SureReport r;
  r.kind = ThresholdKind::Hard;
  r.lambda = lam;
  r.measure_id = "canonical";
  r.bandwidth = eps;
  r.bandwidth_warning = lt.bandwidth_warning;
  r.baseline = z.duration();
  r.quadratic = band_square_integral(z, lam);
  r.correction = 2.0 * lam * lt.local_time - 2.0 * lt.occupation;
  return finish(r);
}

SureReport sure_hard(const SamplePath& path, const DriftFunction& alpha, double lam,
                     const CovarianceModel& model, std::optional<double> bandwidth) {
  auto r = sure_hard(standardize(path, alpha, model), lam, bandwidth);
  r.alpha_id = alpha.id();
  return r;
}

double sure_grad_lambda(const StandardizedPath& z, double lam, double bandwidth) {
  check_lambda(lam);
  const auto lt = local_time(z, lam, bandwidth);
  return 2.0 * lam * (z.duration() - lt.occupation) - 2.0 * lt.local_time;
}

double sure_grad_lambda(const SamplePath& path, const DriftFunction& alpha, double lam,
                        const CovarianceModel& model, double bandwidth) {
  return sure_grad_lambda(standardize(path, alpha, model), lam, bandwidth);
}

DriftFunction make_alpha(AlphaVariant variant, double alpha) {
  return variant == AlphaVariant::Level ? DriftFunction::constant(alpha) : DriftFunction::linear(alpha);
}

double sure_grad_alpha(const SamplePath& path, double alpha, double lam, const CovarianceModel& model,
                       AlphaVariant variant, double bandwidth) {
  check_lambda(lam);
  validate_path(path);
  const bool slope = variant == AlphaVariant::Slope;
  if (slope && !(path.grid.front() > 0.0))
    throw DomainError("slope parametrization needs a grid with t > 0 everywhere");

  const auto z = standardize(path, make_alpha(variant, alpha), model);
  std::vector<double> weight(z.grid.size());
  for (std::size_t i = 0; i < weight.size(); ++i) weight[i] = (slope ? z.grid[i] : 1.0) / z.scale[i];
  const double band_term = -2.0 * band_weighted_integral(z, lam, weight);

  auto divisor = [slope](double t) { return slope ? t : 1.0; };
  auto offset = [&model, lam](double sign) {
    return [&model, lam, sign](double t) { return sign * lam * std::sqrt(model.variance(t)); };
  };
  const double up = signed_local_time(path, alpha, offset(+1.0), divisor, bandwidth);
  const double down = signed_local_time(path, alpha, offset(-1.0), divisor, bandwidth);
  return band_term + 2.0 * up - 2.0 * down;
}

RiskMeasure mu_n_discretize(const RiskMeasure& mu, std::span<const double> grid) {
  if (mu.kind() != RiskMeasure::Kind::Density) throw TypeError("mu_n_discretize needs a density measure");
  validate_grid(grid);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double w = mu.density_at(grid[i]) * (grid[i + 1] - grid[i]);
    if (w > 0.0) atoms.push_back({grid[i], w});
  }
  if (atoms.empty()) throw DomainError("grid does not meet the support of the measure");
  return RiskMeasure::atomic(std::move(atoms));
}

double squared_error(const SamplePath& estimate, std::span<const double> truth, const RiskMeasure& mu) {
  if (truth.size() != estimate.grid.size()) throw ValidationError("truth must be given on the estimate grid");
  SamplePath diff = estimate;
  for (std::size_t i = 0; i < truth.size(); ++i) diff.values[i] = estimate.values[i] - truth[i];
  double total = 0.0;
  for (const auto& node : quadrature_nodes(mu, diff.grid)) {
    const double e = value_at(diff, node.time);
    total += node.weight * e * e;
  }
  return total;
}

}  // namespace suregp
