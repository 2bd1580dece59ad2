#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace suregp {

struct PathMeta {
  std::string model_id;
  std::uint64_t seed = 0;
  /// True drift on the grid, when the path was simulated.
  std::optional<std::vector<double>> drift;
};

/// Discretized trajectory X_t on a strictly increasing grid.
struct SamplePath {
  std::vector<double> grid;
  std::vector<double> values;
  PathMeta meta;

  double duration() const { return grid.back() - grid.front(); }
};

/// Checks the grid/value invariants; throws DomainError or ValidationError.
void validate_path(const SamplePath& path);
void validate_grid(std::span<const double> grid);

/// n equally spaced points from `start` to `end` inclusive; the last point is exactly `end`.
std::vector<double> uniform_grid(double start, double end, std::size_t n);

/// Linear interpolation of the path at time t (exact at grid points).
double interpolate(const SamplePath& path, double t);

/// 64-bit Mersenne twister seeded through splitmix64 so nearby seeds give unrelated streams.
std::mt19937_64 make_rng(std::uint64_t seed);

/// Exact stationary OU sampling: X⁰ ~ N(0, σ²/2a), then the AR(1) recursion with
/// autocorrelation e^{-aΔ} and innovation variance σ²/2a·(1 − e^{-2aΔ}).
SamplePath simulate_ou(const CovarianceModel& model, const DriftFunction& drift,
                       std::span<const double> grid, std::uint64_t seed);

/// Factors the Gram matrix once and draws drift + L·z for any number of seeds.
class CholeskySampler {
 public:
  CholeskySampler(const CovarianceModel& model, std::vector<double> grid);

  SamplePath sample(const DriftFunction& drift, std::uint64_t seed) const;
  const Eigen::MatrixXd& factor() const { return lower_; }

 private:
  std::string model_id_;
  std::vector<double> grid_;
  Eigen::MatrixXd lower_;
};

SamplePath simulate_cholesky(const CovarianceModel& model, const DriftFunction& drift,
                             std::span<const double> grid, std::uint64_t seed);

/// Nyström discretization of the covariance operator under Lebesgue measure on the grid.
///
/// With trapezoid weights W, the symmetric matrix W^{1/2} K W^{1/2} is diagonalized; the
/// eigenfunctions on the grid are h_k = W^{-1/2} v_k and the expansion X = Σ h_k ξ_k uses
/// independent ξ_k ~ N(0, λ_k). Keeping every term reproduces K exactly; truncation drops
/// the variance Σ_{k ≥ n} λ_k h_k(t)².
class KarhunenLoeveBasis {
 public:
  KarhunenLoeveBasis(const CovarianceModel& model, std::vector<double> grid);

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  /// Operator eigenvalues, descending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Columns are eigenfunctions evaluated on the grid, in eigenvalue order.
  const Eigen::MatrixXd& eigenfunctions() const { return functions_; }

  /// Covariance of the expansion truncated to the leading n_terms.
  Eigen::MatrixXd covariance(std::size_t n_terms) const;
  /// Fraction of Σλ_k captured by the leading n_terms.
  double captured_fraction(std::size_t n_terms) const;

  SamplePath sample(const DriftFunction& drift, std::size_t n_terms, std::uint64_t seed) const;

 private:
  std::string model_id_;
  std::vector<double> grid_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd functions_;
};

SamplePath simulate_kl(const CovarianceModel& model, const DriftFunction& drift,
                       std::span<const double> grid, std::size_t n_terms, std::uint64_t seed);

/// Dispatches to the exact OU recursion for OU models and to Cholesky otherwise.
SamplePath simulate(const CovarianceModel& model, const DriftFunction& drift,
                    std::span<const double> grid, std::uint64_t seed);

}  // namespace suregp
