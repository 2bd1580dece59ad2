#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"
#include "suregp/simulate.hpp"
#include "suregp/sure.hpp"

#include <array>
#include <span>
#include <vector>

namespace suregp {

struct LevelBound {
  double value = 0.0;
  /// Set when r ≤ 1, where the coverage limit is not guaranteed.
  bool warning = false;
};

/// C(T) = √(2 r log T) for T > 1; `floor` for T ≤ 1 where the asymptotic bound says nothing.
LevelBound c_of_t(double horizon, double r, double floor = 3.0);

/// Admissible parameter ranges: λ ∈ [0, lambda_max], α ∈ [alpha_min, alpha_max].
struct SearchSpace {
  double lambda_max = 3.0;
  std::size_t n_lambda = 200;
  double alpha_min = 0.0;
  double alpha_max = 0.6;
  std::size_t n_alpha = 60;
  std::size_t n_lambda_joint = 60;
  bool refine = true;
  /// Local minima whose SURE exceeds the minimum by at most this fraction of |minimum| become alternates.
  double alternate_tolerance = 0.05;

  /// λ range [0, C(T)] with the default grid sizes.
  static SearchSpace for_horizon(double horizon, double r = 1.01, double floor = 3.0);

  std::vector<double> lambda_grid(std::size_t n) const;
  std::vector<double> alpha_grid() const;
};

struct TracePoint {
  double alpha = 0.0;
  double lambda = 0.0;
  double sure = 0.0;
  double baseline = 0.0;
  double quadratic = 0.0;
  double correction = 0.0;
};

struct OptimResult {
  double alpha_star = 0.0;
  double lambda_star = 0.0;
  double sure_min = 0.0;
  /// Coarse grid evaluations, α-major then λ ascending.
  std::vector<TracePoint> trace;
  /// Points evaluated during refinement (empty when refinement is off).
  std::vector<TracePoint> refinement;
  /// (∂/∂α, ∂/∂λ) at the returned point; ∂/∂α is 0 when α was held fixed.
  std::array<double, 2> gradient_at_min{0.0, 0.0};
  /// Other local minima of the α-profile (or of the λ-curve) within `alternate_tolerance` of the global minimum.
  std::vector<TracePoint> alternates;
};

/// Smallest SURE; ties go to the smallest λ, then the smallest α.
TracePoint best_point(std::span<const TracePoint> points);

/// Grid scan of the occupation-form soft SURE over λ, then golden-section refinement inside
/// the cell around the best grid point.
OptimResult minimize_lambda(const SamplePath& path, const DriftFunction& alpha, const SearchSpace& space,
                            const CovarianceModel& model);

/// Grid scan over (α, λ) with α(t) = α or α·t, then alternating golden-section refinement
/// confined to the best grid cell.
OptimResult minimize_joint(const SamplePath& path, AlphaVariant variant, const SearchSpace& space,
                           const CovarianceModel& model);

}  // namespace suregp
