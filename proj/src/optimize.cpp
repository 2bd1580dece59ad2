#include "suregp/optimize.hpp"

#include "suregp/error.hpp"
#include "suregp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace suregp {

namespace {

constexpr int kJointSweeps = 4;

TracePoint make_point(double alpha, double lambda, const SureReport& r) {
  return {alpha, lambda, r.value, r.baseline, r.quadratic, r.correction};
}

bool better(const TracePoint& a, const TracePoint& b) {
  if (a.sure != b.sure) return a.sure < b.sure;
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  return a.alpha < b.alpha;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw DomainError("search grid is empty");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = lo + static_cast<double>(i) * step;
  out.back() = hi;
  return out;
}

// Golden-section search on [lo, hi]; equal values keep the left part, so flat minima
// resolve to their left edge. Every evaluation is appended to `log`.
void golden_section(double lo, double hi, double tol, const std::function<TracePoint(double)>& eval,
                    std::vector<TracePoint>& log) {
  if (!(hi > lo)) return;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  TracePoint fc = eval(c);
  TracePoint fd = eval(d);
  log.push_back(fc);
  log.push_back(fd);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    if (fc.sure <= fd.sure) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = eval(c);
      log.push_back(fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = eval(d);
      log.push_back(fd);
    }
  }
}

// Interior local minima of `values` (not the global index) within tolerance of the minimum.
std::vector<std::size_t> local_minima(const std::vector<double>& values, std::size_t global, double tolerance) {
  std::vector<std::size_t> out;
  const double best = values[global];
  const double slack = tolerance * std::abs(best);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (i == global) continue;
    const bool is_min = values[i] <= values[i - 1] && values[i] <= values[i + 1] &&
                        (values[i] < values[i - 1] || values[i] < values[i + 1]);
    if (is_min && values[i] - best <= slack) out.push_back(i);
  }
  return out;
}

std::pair<double, double> cell(const std::vector<double>& grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  const auto i = static_cast<std::size_t>(it - grid.begin());
  const double lo = i > 0 ? grid[i - 1] : grid.front();
  const double hi = i + 1 < grid.size() ? grid[i + 1] : grid.back();
  return {lo, hi};
}

double step_of(const std::vector<double>& grid) {
  return grid.size() > 1 ? grid[1] - grid[0] : 1e-3;
}

}  // namespace

LevelBound c_of_t(double horizon, double r, double floor) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  LevelBound out;
  out.warning = !(r > 1.0);
  if (horizon <= 1.0) {
    out.value = floor;
    return out;
  }
  if (!(r > 0.0)) throw DomainError("exponent r must be > 0");
  out.value = std::sqrt(2.0 * r * std::log(horizon));
  return out;
}

SearchSpace SearchSpace::for_horizon(double horizon, double r, double floor) {
  SearchSpace s;
  s.lambda_max = c_of_t(horizon, r, floor).value;
  return s;
}

std::vector<double> SearchSpace::lambda_grid(std::size_t n) const {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw DomainError("lambda range must be (0, finite]");
  return linspace(0.0, lambda_max, n);
}

std::vector<double> SearchSpace::alpha_grid() const {
  if (!(alpha_max >= alpha_min)) throw DomainError("alpha range is empty");
  return linspace(alpha_min, alpha_max, n_alpha);
}

TracePoint best_point(std::span<const TracePoint> points) {
  if (points.empty()) throw DomainError("no evaluated points");
  TracePoint best = points.front();
  for (const auto& p : points)
    if (better(p, best)) best = p;
  return best;
}

OptimResult minimize_lambda(const SamplePath& path, const DriftFunction& alpha, const SearchSpace& space,
                            const CovarianceModel& model) {
  const auto z = standardize(path, alpha, model);
  const auto lambdas = space.lambda_grid(space.n_lambda);
  const double alpha_value = alpha.kind() == DriftFunction::Kind::Constant ? alpha.parameter() : 0.0;

  OptimResult result;
  result.trace.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t j) {
    result.trace[j] = make_point(alpha_value, lambdas[j], sure_soft_occupation(z, lambdas[j]));
  });
  TracePoint best = best_point(result.trace);

  if (space.refine) {
    const auto [lo, hi] = cell(lambdas, best.lambda);
    auto eval = [&](double lam) { return make_point(alpha_value, lam, sure_soft_occupation(z, lam)); };
    golden_section(lo, hi, 1e-10 * std::max(1.0, space.lambda_max), eval, result.refinement);
    for (const auto& p : result.refinement)
      if (better(p, best)) best = p;
  }
  result.alpha_star = best.alpha;
  result.lambda_star = best.lambda;
  result.sure_min = best.sure;
  result.gradient_at_min = {0.0, sure_grad_lambda(z, best.lambda, step_of(lambdas))};

  std::vector<double> curve(result.trace.size());
  std::size_t global = 0;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    curve[j] = result.trace[j].sure;
    if (better(result.trace[j], result.trace[global])) global = j;
  }
  for (std::size_t j : local_minima(curve, global, space.alternate_tolerance)) result.alternates.push_back(result.trace[j]);
  return result;
}

OptimResult minimize_joint(const SamplePath& path, AlphaVariant variant, const SearchSpace& space,
                           const CovarianceModel& model) {
  validate_path(path);
  if (variant == AlphaVariant::Slope && !(path.grid.front() > 0.0))
    throw DomainError("slope parametrization needs a grid with t > 0 everywhere");
  const auto alphas = space.alpha_grid();
  const auto lambdas = space.lambda_grid(space.n_lambda_joint);
  const std::size_t n_lambda = lambdas.size();

  OptimResult result;
  result.trace.resize(alphas.size() * n_lambda);
  parallel_for(alphas.size(), [&](std::size_t i) {
    const auto z = standardize(path, make_alpha(variant, alphas[i]), model);
    for (std::size_t j = 0; j < n_lambda; ++j)
      result.trace[i * n_lambda + j] = make_point(alphas[i], lambdas[j], sure_soft_occupation(z, lambdas[j]));
  });
  TracePoint best = best_point(result.trace);

  if (space.refine) {
    const auto [alo, ahi] = cell(alphas, best.alpha);
    const auto [llo, lhi] = cell(lambdas, best.lambda);
    auto eval = [&](double a, double lam) {
      return make_point(a, lam, sure_soft_occupation(standardize(path, make_alpha(variant, a), model), lam));
    };
    TracePoint current = best;
    for (int sweep = 0; sweep < kJointSweeps; ++sweep) {
      std::vector<TracePoint> log;
      golden_section(alo, ahi, 1e-9 * std::max(1.0, ahi - alo),
                     [&](double a) { return eval(a, current.lambda); }, log);
      for (const auto& p : log)
        if (better(p, current)) current = p;
      result.refinement.insert(result.refinement.end(), log.begin(), log.end());
      log.clear();
      golden_section(llo, lhi, 1e-9 * std::max(1.0, lhi - llo),
                     [&](double lam) { return eval(current.alpha, lam); }, log);
      for (const auto& p : log)
        if (better(p, current)) current = p;
      result.refinement.insert(result.refinement.end(), log.begin(), log.end());
    }
    if (better(current, best)) best = current;
  }
  result.alpha_star = best.alpha;
  result.lambda_star = best.lambda;
  result.sure_min = best.sure;
  {
    const auto z = standardize(path, make_alpha(variant, best.alpha), model);
    const double d_lambda = sure_grad_lambda(z, best.lambda, step_of(lambdas));
    const double d_alpha = sure_grad_alpha(path, best.alpha, best.lambda, model, variant, 0.5 * step_of(alphas));
    result.gradient_at_min = {d_alpha, d_lambda};
  }

  // α-profile: best λ for every α on the grid.
  std::vector<double> profile(alphas.size(), std::numeric_limits<double>::infinity());
  std::vector<TracePoint> profile_point(alphas.size());
  std::size_t global = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    profile_point[i] = best_point(std::span(result.trace).subspan(i * n_lambda, n_lambda));
    profile[i] = profile_point[i].sure;
    if (better(profile_point[i], profile_point[global])) global = i;
  }
  for (std::size_t i : local_minima(profile, global, space.alternate_tolerance)) result.alternates.push_back(profile_point[i]);
  return result;
}

}  // namespace suregp
