#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"
#include "suregp/optimize.hpp"
#include "suregp/shrinkage.hpp"
#include "suregp/simulate.hpp"
#include "suregp/sure.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace suregp {

/// Model, true drift, observation grid and risk measure of a replication study.
struct McScenario {
  CovarianceModel model;
  DriftFunction drift;
  std::vector<double> grid;
  RiskMeasure measure;

  /// OU noise (a = 0.5, σ = 0.05, T = 1) around one of the experiment drifts, canonical μ.
  static McScenario experiment(Scenario s, std::size_t n_points = 1000);
};

enum McStatistics : unsigned {
  kUnbiasedness = 1u << 0,
  kRiskBound = 1u << 1,
  kCoverage = 1u << 2,
  kBaselineEfficiency = 1u << 3,
  kAllStatistics = 0xFu,
};

struct McConfig {
  std::size_t n_reps = 400;
  std::uint64_t seed_base = 1;
  McScenario scenario;
  unsigned statistics = kAllStatistics;

  /// Replicate i uses seed_base + i.
  std::uint64_t seed(std::size_t replicate) const { return seed_base + replicate; }
};

/// One checked quantity. `rule` states the pass criterion in words; `bound` is the number the
/// mean is compared against (meaning depends on the rule).
struct McStatistic {
  std::string name;
  std::string rule;
  double mean = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::size_t n_reps = 0;
};

struct McReport {
  std::vector<McStatistic> statistics;

  bool all_passed() const;
  const McStatistic& find(const std::string& name) const;
  void append(const McReport& other);

  std::string to_text() const;
  /// Columns: name,mean,std_error,bound,passed,n_reps,rule
  std::string to_csv() const;
};

struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and sample-std/√n, accumulated in index order.
SampleSummary summarize(std::span<const double> values);

/// Draws replicate paths: the exact recursion for OU models, a cached Cholesky factor otherwise.
class PathSource {
 public:
  explicit PathSource(const McScenario& scenario);
  SamplePath draw(std::uint64_t seed) const;

 private:
  const McScenario* scenario_;
  std::optional<CholeskySampler> sampler_;
};

/// Paired (SURE, ‖X + ξ − u‖²_μ) per replicate; passes iff |mean difference| ≤ 3·SE.
/// Soft specs with the canonical measure use the occupation form, other measures the node form;
/// hard specs need the canonical measure and use `bandwidth` (default: pathstats default).
McReport run_unbiasedness(const McConfig& cfg, const ThresholdSpec& spec,
                          std::optional<double> bandwidth = {});

/// Same pairing for an arbitrary correction ξ with caller-supplied x-derivative.
McReport run_unbiasedness_generic(const McConfig& cfg, const CorrectionFn& xi, const CorrectionFn& dxi,
                                  const std::string& label);

/// Soft-threshold risk against (1+λ²)(T ∧ ∫|u−α|²μ) + T(1+λ)e^{−λ²/2}; passes iff
/// mean ≤ bound + 3·SE. Needs the canonical measure.
McReport run_risk_bound(const McConfig& cfg, const DriftFunction& alpha, std::span<const double> lambdas);

struct CoverageOptions {
  double r = 1.5;
  std::vector<double> horizons{10.0, 100.0, 1000.0};
  double time_step = 0.05;
  DriftFunction alpha;
};

/// Empirical P(sup|Z| ≤ √(2 r log T)) per horizon on OU paths sharing the scenario's a, σ.
/// Each horizon passes iff it does not fall below the previous one; the last also needs ≥ 0.95.
McReport run_coverage(const McConfig& cfg, const CoverageOptions& options);

/// Mean risk of û = X against ∫γ(t,t)μ(dt); passes iff |difference| ≤ 3·SE.
McReport run_baseline_efficiency(const McConfig& cfg);

/// Ratio of mean risk of the SURE-optimal soft estimator (λ* from minimize_lambda around
/// `alpha`) to the mean risk of û; passes iff the ratio is below 1.
McReport run_sure_efficiency(const McConfig& cfg, const DriftFunction& alpha, const SearchSpace& space);

}  // namespace suregp
