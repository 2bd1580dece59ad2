#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"
#include "suregp/pathstats.hpp"
#include "suregp/shrinkage.hpp"
#include "suregp/simulate.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace suregp {

/// A SURE evaluation split as value = baseline + quadratic + correction.
///
/// baseline is R(γ,μ,û); quadratic is ‖ξ‖²_μ (or its hard-threshold analogue); correction
/// is the derivative term, which for the occupation forms is written through L̄ and ℓ̄.
struct SureReport {
  double value = 0.0;
  double baseline = 0.0;
  double quadratic = 0.0;
  double correction = 0.0;

  ThresholdKind kind = ThresholdKind::Soft;
  std::string alpha_id;
  double lambda = 0.0;
  std::string measure_id;
  /// Local-time bandwidth, for the hard form only.
  std::optional<double> bandwidth;
  bool bandwidth_warning = false;
};

/// ξ_t(x) and its x-derivative, both as functions of (t, x).
using CorrectionFn = std::function<double(double t, double x)>;

/// R(γ,μ,û) + ∫ξ_t(X_t)²μ(dt) + 2∫γ(t,t)ξ'_t(X_t)μ(dt), with μ discretized on the path grid
/// (trapezoid nodes for densities, atoms read off the interpolated path).
SureReport sure_generic(const SamplePath& path, const CorrectionFn& xi, const CorrectionFn& dxi,
                        const CovarianceModel& model, const RiskMeasure& mu);

/// Soft-threshold SURE for a general μ on the same nodes as sure_generic:
/// R + ∫|X−α|² ∧ λ(t)² μ(dt) − 2∫1{|X−α| ≤ λ(t)} γ(t,t) μ(dt).
SureReport sure_soft(const SamplePath& path, const DriftFunction& alpha, double lam,
                     const CovarianceModel& model, const RiskMeasure& mu);

/// Soft-threshold SURE for μ = γ⁻¹dt through occupation time of the piecewise-linear Z:
/// T + ∫(|Z| ∧ λ)² dt − 2L̄^λ.
SureReport sure_soft_occupation(const StandardizedPath& z, double lam);
SureReport sure_soft_occupation(const SamplePath& path, const DriftFunction& alpha, double lam,
                                const CovarianceModel& model);

/// Hard-threshold SURE for μ = γ⁻¹dt: T + ∫Z²1{|Z| ≤ λ}dt + 2λℓ̄^λ − 2L̄^λ.
/// Without a bandwidth the pathstats default is used; the report records it.
SureReport sure_hard(const StandardizedPath& z, double lam, std::optional<double> bandwidth = {});
SureReport sure_hard(const SamplePath& path, const DriftFunction& alpha, double lam,
                     const CovarianceModel& model, std::optional<double> bandwidth = {});

/// ∂/∂λ of the occupation-form soft SURE: 2λ(T − L̄^λ) − 2ℓ̄^λ.
double sure_grad_lambda(const StandardizedPath& z, double lam, double bandwidth);
double sure_grad_lambda(const SamplePath& path, const DriftFunction& alpha, double lam,
                        const CovarianceModel& model, double bandwidth);

/// Parametrization of the centre: α(t) = α (Level) or α(t) = α·t (Slope).
enum class AlphaVariant { Level, Slope };

DriftFunction make_alpha(AlphaVariant variant, double alpha);

/// ∂/∂α of the occupation-form soft SURE with λ fixed:
/// −2∫(X−α(t))/γ·w_t·1{|X−α(t)| ≤ λ√γ}dt + 2ℓ^{α,λ} − 2ℓ^{α,−λ}, where w ≡ 1 (Level) or
/// w_t = t (Slope) and ℓ^{α,±λ} is the local time at α of (X ± λ√γ)/w.
double sure_grad_alpha(const SamplePath& path, double alpha, double lam, const CovarianceModel& model,
                       AlphaVariant variant, double bandwidth);

/// μₙ = Σᵢ f(tᵢ)(tᵢ₊₁ − tᵢ) δ_{tᵢ}; grid points where f vanishes carry no atom.
RiskMeasure mu_n_discretize(const RiskMeasure& mu, std::span<const double> grid);

/// ‖estimate − truth‖²_μ on the nodes of μ over the estimate's grid; `truth` is given on that grid.
double squared_error(const SamplePath& estimate, std::span<const double> truth, const RiskMeasure& mu);

}  // namespace suregp
