#include "suregp/pathstats.hpp"

#include "suregp/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace suregp {

namespace {

// Splits the linear segment z(s) = z0 + s(z1 − z0), s ∈ [0,1], at the crossings of ±λ and
// reports each piece with its end values and whether it lies inside the band |z| ≤ λ.
template <class F>
void for_each_piece(double z0, double z1, double lam, F&& visit) {
  if (std::abs(z0) <= lam && std::abs(z1) <= lam) {
    visit(0.0, 1.0, z0, z1, true);
    return;
  }
  if ((z0 > lam && z1 > lam) || (z0 < -lam && z1 < -lam)) {
    visit(0.0, 1.0, z0, z1, false);
    return;
  }
  const double dz = z1 - z0;
  std::array<double, 4> cut{};
  std::array<double, 4> value{};
  std::size_t n = 0;
  cut[n] = 0.0;
  value[n++] = z0;
  std::array<double, 2> levels{-lam, lam};
  if (dz < 0) std::swap(levels[0], levels[1]);
  for (double c : levels) {
    const double s = (c - z0) / dz;
    if (s > 0.0 && s < 1.0 && s > cut[n - 1]) {
      cut[n] = s;
      value[n++] = c;
    }
  }
  cut[n] = 1.0;
  value[n++] = z1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double mid = z0 + 0.5 * (cut[k] + cut[k + 1]) * dz;
    visit(cut[k], cut[k + 1], value[k], value[k + 1], std::abs(mid) <= lam);
  }
}

template <class F>
double integrate_pieces(const StandardizedPath& path, double lam, F&& piece_integral) {
  if (lam < 0.0 || std::isnan(lam)) throw DomainError("level must be >= 0");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.grid.size(); ++i) {
    const double dt = path.grid[i + 1] - path.grid[i];
    for_each_piece(path.z[i], path.z[i + 1], lam,
                   [&](double sa, double sb, double za, double zb, bool inside) {
                     total += piece_integral(i, dt * (sb - sa), sa, sb, za, zb, inside);
                   });
  }
  return total;
}

void check_standardized(const StandardizedPath& path) {
  if (path.grid.empty() || path.grid.size() != path.z.size())
    throw ValidationError("standardized path needs matching non-empty grid and values");
}

}  // namespace

StandardizedPath StandardizedPath::from_values(std::vector<double> grid, std::vector<double> z) {
  validate_grid(grid);
  if (grid.size() != z.size()) throw ValidationError("grid and z differ in length");
  for (double v : z)
    if (!std::isfinite(v)) throw ValidationError("standardized values must be finite");
  StandardizedPath out;
  out.scale.assign(grid.size(), 1.0);
  out.grid = std::move(grid);
  out.z = std::move(z);
  return out;
}

StandardizedPath standardize(const SamplePath& path, const DriftFunction& alpha,
                             const CovarianceModel& model) {
  validate_path(path);
  StandardizedPath out;
  out.grid = path.grid;
  out.z.resize(path.grid.size());
  out.scale.resize(path.grid.size());
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    const double t = path.grid[i];
    const double var = model.variance(t);
    if (!(var > 0.0)) throw DomainError("covariance vanishes on the path grid; cannot standardize");
    out.scale[i] = std::sqrt(var);
    out.z[i] = (path.values[i] - alpha(t)) / out.scale[i];
  }
  return out;
}

double occupation_time(const StandardizedPath& path, double lam) {
  check_standardized(path);
  return integrate_pieces(path, lam, [](std::size_t, double len, double, double, double, double, bool inside) {
    return inside ? len : 0.0;
  });
}

double clipped_square_integral(const StandardizedPath& path, double lam) {
  check_standardized(path);
  const double lam2 = lam * lam;
  return integrate_pieces(path, lam,
                          [lam2](std::size_t, double len, double, double, double za, double zb, bool inside) {
                            return inside ? len * (za * za + za * zb + zb * zb) / 3.0 : len * lam2;
                          });
}

double band_square_integral(const StandardizedPath& path, double lam) {
  check_standardized(path);
  return integrate_pieces(path, lam,
                          [](std::size_t, double len, double, double, double za, double zb, bool inside) {
                            return inside ? len * (za * za + za * zb + zb * zb) / 3.0 : 0.0;
                          });
}

double band_weighted_integral(const StandardizedPath& path, double lam, std::span<const double> weight) {
  check_standardized(path);
  if (weight.size() != path.grid.size()) throw ValidationError("weight length must match the path grid");
  return integrate_pieces(path, lam,
                          [&](std::size_t i, double len, double sa, double sb, double za, double zb, bool inside) {
                            if (!inside) return 0.0;
                            const double dw = weight[i + 1] - weight[i];
                            const double wa = weight[i] + sa * dw;
                            const double wb = weight[i] + sb * dw;
                            return len * (2.0 * za * wa + za * wb + zb * wa + 2.0 * zb * wb) / 6.0;
                          });
}

double default_bandwidth(const StandardizedPath& path) {
  check_standardized(path);
  const auto n = static_cast<double>(path.z.size());
  const double mean = std::accumulate(path.z.begin(), path.z.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : path.z) ss += (v - mean) * (v - mean);
  const double sd = path.z.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (!(sd > 0.0)) return 1e-3;
  return 2.0 * sd * std::pow(n, -0.2);
}

LocalTimeEstimate local_time(const StandardizedPath& path, double lam, double bandwidth) {
  check_standardized(path);
  if (lam < 0.0 || std::isnan(lam)) throw DomainError("level must be >= 0");
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be > 0");
  const double hi = lam + bandwidth;
  const double lo = std::max(0.0, lam - bandwidth);

  LocalTimeEstimate est;
  est.level = lam;
  est.bandwidth = bandwidth;
  est.occupation = occupation_time(path, lam);
  est.local_time = std::max(0.0, (occupation_time(path, hi) - occupation_time(path, lo)) / (hi - lo));

  auto [mn, mx] = std::minmax_element(path.z.begin(), path.z.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
  est.bandwidth_warning = bandwidth > std::abs(*mx) - std::abs(*mn);
  return est;
}

std::vector<LocalTimeEstimate> level_sweep(const StandardizedPath& path, std::span<const double> levels,
                                           double bandwidth) {
  std::vector<LocalTimeEstimate> out;
  out.reserve(levels.size());
  for (double lam : levels) out.push_back(local_time(path, lam, bandwidth));
  return out;
}

double lower_occupation(std::span<const double> grid, std::span<const double> y, double c) {
  if (grid.size() != y.size()) throw ValidationError("grid and values differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dt = grid[i + 1] - grid[i];
    const bool below0 = y[i] <= c;
    const bool below1 = y[i + 1] <= c;
    if (below0 && below1) {
      total += dt;
    } else if (below0 != below1) {
      const double s = (c - y[i]) / (y[i + 1] - y[i]);
      total += dt * (below0 ? s : 1.0 - s);
    }
  }
  return total;
}

double signed_local_time(const SamplePath& path, double level, const std::function<double(double)>& offset,
                         const std::function<double(double)>& divisor, double bandwidth) {
  validate_path(path);
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be > 0");
  std::vector<double> y(path.grid.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = path.grid[i];
    const double d = divisor ? divisor(t) : 1.0;
    if (d == 0.0 || !std::isfinite(d)) throw DomainError("level process divisor vanishes on the grid");
    const double shift = offset ? offset(t) : 0.0;
    y[i] = (path.values[i] + shift) / d;
    if (!std::isfinite(y[i])) throw DomainError("level process is not finite on the grid");
  }
  const double up = lower_occupation(path.grid, y, level + bandwidth);
  const double down = lower_occupation(path.grid, y, level - bandwidth);
  return (up - down) / (2.0 * bandwidth);
}

double increment_variance(const CovarianceModel& model, double s, double t) {
  return 2.0 - 2.0 * model(s, t) / std::sqrt(model.variance(s) * model.variance(t));
}

BermanReport check_berman(const CovarianceModel& model, const BermanOptions& options) {
  // Gauss-Legendre nodes on [-1, 1], 8 points.
  static constexpr std::array<double, 8> kNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                               0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> kWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837938302408, 0.3626837938302408, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};
  const double a = model.start();
  const double b = model.horizon();
  const double length = b - a;
  const double p = options.exponent;
  const int m = std::max(options.inner_points, 3);

  // ∫_a^{b-u} Δ(s, s+u)^{-p} ds by the trapezoid rule; +inf once Δ vanishes.
  auto inner = [&](double u) {
    const double span = length - u;
    if (span <= 0.0) return 0.0;
    const double h = span / (m - 1);
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
      const double s = a + k * h;
      const double delta = increment_variance(model, s, std::min(s + u, b));
      if (!(delta > 0.0)) return std::numeric_limits<double>::infinity();
      const double w = (k == 0 || k == m - 1) ? 0.5 : 1.0;
      sum += w * std::pow(delta, -p);
    }
    return sum * h;
  };
  // 2 ∫_{lo}^{hi} inner(u) du, Gauss-Legendre in log u.
  auto band = [&](double lo, double hi) {
    const double l0 = std::log(lo);
    const double l1 = std::log(hi);
    double sum = 0.0;
    for (std::size_t k = 0; k < kNodes.size(); ++k) {
      const double u = std::exp(0.5 * (l1 + l0) + 0.5 * (l1 - l0) * kNodes[k]);
      sum += kWeights[k] * inner(u) * u;
    }
    return 2.0 * 0.5 * (l1 - l0) * sum;
  };

  BermanReport report;
  report.exponent = p;
  double delta = 0.25 * length;
  double integral = band(delta, length);
  report.deltas.push_back(delta);
  report.integrals.push_back(integral);
  std::vector<double> increments;
  for (int k = 0; k < options.halvings; ++k) {
    const double next = 0.5 * delta;
    const double inc = band(next, delta);
    integral += inc;
    increments.push_back(inc);
    delta = next;
    report.deltas.push_back(delta);
    report.integrals.push_back(integral);
  }
  if (!std::isfinite(integral)) {
    report.growth_ratio = std::numeric_limits<double>::infinity();
    report.likely_finite = false;
    return report;
  }
  const std::size_t tail = std::min<std::size_t>(4, increments.size() - 1);
  double ratio = 0.0;
  for (std::size_t k = increments.size() - tail; k < increments.size(); ++k)
    ratio += increments[k] / increments[k - 1];
  report.growth_ratio = ratio / static_cast<double>(tail);
  report.likely_finite = report.growth_ratio < 0.9;
  return report;
}

OccupationDensityCheck occupation_density_check(const StandardizedPath& path,
                                                const std::function<double(double)>& f,
                                                std::span<const double> level_grid, double bandwidth) {
  check_standardized(path);
  if (level_grid.size() < 2) throw DomainError("level grid needs at least two levels");
  if (level_grid.front() != 0.0) throw DomainError("level grid must start at 0");
  const double top = std::abs(*std::max_element(path.z.begin(), path.z.end(),
                                                [](double x, double y) { return std::abs(x) < std::abs(y); }));
  if (level_grid.back() < top + bandwidth) throw DomainError("level grid must reach max|Z| + bandwidth");

  OccupationDensityCheck out;
  for (std::size_t i = 0; i + 1 < path.grid.size(); ++i) {
    const double dt = path.grid[i + 1] - path.grid[i];
    out.time_side += 0.5 * dt * (f(std::abs(path.z[i])) + f(std::abs(path.z[i + 1])));
  }
  std::vector<double> integrand(level_grid.size());
  for (std::size_t k = 0; k < level_grid.size(); ++k) {
    const double fa = f(level_grid[k]);
    integrand[k] = fa == 0.0 ? 0.0 : fa * local_time(path, level_grid[k], bandwidth).local_time;
  }
  for (std::size_t k = 0; k + 1 < level_grid.size(); ++k)
    out.level_side += 0.5 * (level_grid[k + 1] - level_grid[k]) * (integrand[k] + integrand[k + 1]);
  out.residual = std::abs(out.time_side - out.level_side);
  return out;
}

}  // namespace suregp
