#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"
#include "suregp/simulate.hpp"

namespace suregp {

enum class ThresholdKind { Soft, Hard };

/// Shrinkage family X + ξ^{α,λ}(X): values are pulled toward α(t) inside a band of
/// half-width λ(t) = λ·√γ(t,t).
struct ThresholdSpec {
  ThresholdKind kind = ThresholdKind::Soft;
  DriftFunction alpha;
  double lambda = 0.0;

  double level_at(const CovarianceModel& model, double t) const;
};

/// sign(y)·(|y| − 1)⁺
double eta_soft(double y);
/// y·1{|y| > 1}
double eta_hard(double y);

/// Shrunk value at one point with band half-width `band` around `centre`.
///
/// Soft: x − sign(x − α)·min(band, |x − α|), which is x itself when band = 0.
/// Hard: α when |x − α| < band, else x.
double shrink(ThresholdKind kind, double x, double centre, double band);

/// ∂/∂x of the soft correction ξ(x) = shrink(x) − x, i.e. −1{|x − α| ≤ band}.
double soft_correction_derivative(double x, double centre, double band);

/// Pointwise X_t + ξ_t(X_t) on the path grid.
SamplePath apply_estimator(const SamplePath& path, const ThresholdSpec& spec, const CovarianceModel& model);

}  // namespace suregp
