#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"
#include "suregp/simulate.hpp"

#include <functional>
#include <span>
#include <vector>

namespace suregp {

/// Z_t = (X_t − α(t)) / √γ(t,t) on the path grid, read as a piecewise-linear path.
///
/// All integrals below are exact for that piecewise-linear interpolation: level crossings
/// inside a grid cell are located by linear interpolation rather than counted per cell.
struct StandardizedPath {
  std::vector<double> grid;
  std::vector<double> z;
  /// √γ(t_i,t_i) per grid point; all ones for paths built directly from z values.
  std::vector<double> scale;

  double duration() const { return grid.back() - grid.front(); }

  /// Wraps raw z values (scale ≡ 1).
  static StandardizedPath from_values(std::vector<double> grid, std::vector<double> z);
};

StandardizedPath standardize(const SamplePath& path, const DriftFunction& alpha,
                             const CovarianceModel& model);

/// L̄^λ = ∫ 1{|Z_t| ≤ λ} dt.
double occupation_time(const StandardizedPath& path, double lam);

/// ∫ (|Z_t| ∧ λ)² dt.
double clipped_square_integral(const StandardizedPath& path, double lam);

/// ∫ Z_t² 1{|Z_t| ≤ λ} dt.
double band_square_integral(const StandardizedPath& path, double lam);

/// ∫ Z_t · w_t · 1{|Z_t| ≤ λ} dt, with w given per grid point and interpolated linearly.
double band_weighted_integral(const StandardizedPath& path, double lam, std::span<const double> weight);

struct LocalTimeEstimate {
  double level = 0.0;
  double occupation = 0.0;
  double local_time = 0.0;
  double bandwidth = 0.0;
  /// Set when the bandwidth exceeds the range of |Z| on the path.
  bool bandwidth_warning = false;
};

/// 2·std(z)·n^{-1/5}; falls back to 1e-3 for constant paths.
double default_bandwidth(const StandardizedPath& path);

/// ℓ̄^λ ≈ (L̄^{λ+ε} − L̄^{max(0,λ−ε)}) / (λ + ε − max(0, λ−ε)).
LocalTimeEstimate local_time(const StandardizedPath& path, double lam, double bandwidth);

std::vector<LocalTimeEstimate> level_sweep(const StandardizedPath& path, std::span<const double> levels,
                                           double bandwidth);

/// ∫ 1{Y_t ≤ c} dt for the piecewise-linear path Y on `grid`.
double lower_occupation(std::span<const double> grid, std::span<const double> y, double c);

/// Local time at `level` of Y_t = (X_t + offset(t)) / divisor(t), by a centered difference of
/// lower_occupation with half-width ε. Throws DomainError if the divisor vanishes on the grid.
double signed_local_time(const SamplePath& path, double level, const std::function<double(double)>& offset,
                         const std::function<double(double)>& divisor, double bandwidth);

/// Δ(s,t) = 2 − 2γ(s,t)/√(γ(s,s)γ(t,t)), the increment variance of the standardized process.
double increment_variance(const CovarianceModel& model, double s, double t);

struct BermanOptions {
  /// Power applied to Δ in the integrand Δ^{-p}. 0.5 integrates the inverse L² distance
  /// ‖Z_t − Z_s‖⁻¹; 1.0 integrates the inverse variance.
  double exponent = 0.5;
  int halvings = 12;
  int inner_points = 65;
};

struct BermanReport {
  double exponent = 0.5;
  /// Excluded band half-widths δ_k, decreasing.
  std::vector<double> deltas;
  /// ∫∫_{|s−t| ≥ δ_k} Δ^{-p} ds dt.
  std::vector<double> integrals;
  /// Mean ratio of successive increments over the last halvings (→ 2^{p−1} for |t−s|^{-p} growth).
  double growth_ratio = 0.0;
  bool likely_finite = false;
};

BermanReport check_berman(const CovarianceModel& model, const BermanOptions& options = {});

struct OccupationDensityCheck {
  double time_side = 0.0;
  double level_side = 0.0;
  double residual = 0.0;
};

/// Compares ∫₀ᵀ f(|Z_t|) dt with ∫₀^∞ f(a) ℓ̄^a da (trapezoid over `level_grid`).
/// The level grid must start at 0 and reach max|Z| + ε.
OccupationDensityCheck occupation_density_check(const StandardizedPath& path,
                                                const std::function<double(double)>& f,
                                                std::span<const double> level_grid, double bandwidth);

}  // namespace suregp
