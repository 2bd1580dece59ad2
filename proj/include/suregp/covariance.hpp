#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace suregp {

struct OrnsteinUhlenbeckParams {
  double rate = 0.5;
  double sigma = 0.05;
};

/// Brownian motion observed from `start_offset` on, where γ(t,t) = σ²t is bounded away from zero.
struct BrownianParams {
  double sigma = 1.0;
  double start_offset = 0.0;
};

struct TabulatedParams {
  std::vector<double> grid;
  Eigen::MatrixXd values;
};

/// Covariance function γ(s,t) of the centered noise process on [start, horizon].
///
/// Immutable once built; copies share the tabulated storage.
class CovarianceModel {
 public:
  enum class Kind { OrnsteinUhlenbeck, BrownianMotion, Tabulated };

  /// γ(s,t) = σ²/(2a)·exp(-a|t-s|). σ = 0 is accepted as the noiseless limit.
  static CovarianceModel ornstein_uhlenbeck(double rate, double sigma, double horizon);

  /// γ(s,t) = σ²·min(s,t). A negative offset selects the default horizon/1000.
  static CovarianceModel brownian(double sigma, double horizon, double start_offset = -1.0);

  /// Symmetric PSD matrix on a strictly increasing grid, interpolated bilinearly.
  static CovarianceModel tabulated(std::vector<double> grid, Eigen::MatrixXd values);

  Kind kind() const;
  double horizon() const { return horizon_; }

  /// First time at which γ(t,t) > 0 is guaranteed (0 for OU, t₀ for Brownian, grid start for tables).
  double start() const;

  /// γ(s,t); throws DomainError outside the model's time range.
  double operator()(double s, double t) const;
  double variance(double t) const;

  /// True for an OU model with σ = 0, which has no noise at all.
  bool degenerate() const;

  Eigen::MatrixXd gram(std::span<const double> grid) const;

  const OrnsteinUhlenbeckParams& ou() const;
  const BrownianParams& brownian() const;
  const TabulatedParams& table() const;

  /// Short human-readable identifier, e.g. `ou(a=0.5,sigma=0.05,T=1)`.
  std::string id() const;

 private:
  using Params = std::variant<OrnsteinUhlenbeckParams, BrownianParams,
                              std::shared_ptr<const TabulatedParams>>;
  CovarianceModel(Params params, double horizon) : params_(std::move(params)), horizon_(horizon) {}

  void check_time(double t) const;

  Params params_;
  double horizon_;
};

double eval_gamma(const CovarianceModel& model, double s, double t);

struct Atom {
  double time;
  double weight;
};

/// Measure μ on [0,T] weighting the L² risk: either f(t)dt on an interval or Σ aᵢ δ_{tᵢ}.
class RiskMeasure {
 public:
  enum class Kind { Density, Atomic };

  static RiskMeasure density(std::function<double(double)> f, double lower, double upper,
                             std::string id);
  static RiskMeasure lebesgue(double lower, double upper);
  /// μ(dt) = γ(t,t)⁻¹dt on [model.start(), model.horizon()].
  static RiskMeasure canonical(const CovarianceModel& model);
  static RiskMeasure atomic(std::vector<Atom> atoms);

  Kind kind() const { return kind_; }
  bool is_canonical() const { return canonical_; }
  const std::string& id() const { return id_; }

  double lower() const { return lower_; }
  double upper() const { return upper_; }

  /// f(t) inside the support, 0 outside. Throws ValidationError on a negative or non-finite value.
  double density_at(double t) const;
  std::span<const Atom> atoms() const& { return atoms_; }
  std::vector<Atom> atoms() && { return std::move(atoms_); }

 private:
  RiskMeasure() = default;

  Kind kind_ = Kind::Density;
  bool canonical_ = false;
  std::string id_;
  std::function<double(double)> f_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::vector<Atom> atoms_;
};

/// A point of a measure discretized against a path grid.
struct QuadratureNode {
  double time;
  double weight;
};

/// Density measures become trapezoid weights × f on the grid points inside the support;
/// atomic measures are passed through unchanged.
std::vector<QuadratureNode> quadrature_nodes(const RiskMeasure& mu, std::span<const double> grid);

/// R(γ,μ,û) = ∫γ(t,t)μ(dt): exact sum for atoms, Richardson-extrapolated trapezoid for densities.
double baseline_risk(const CovarianceModel& model, const RiskMeasure& mu);

}  // namespace suregp
