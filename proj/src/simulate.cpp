#include "suregp/simulate.hpp"

#include "suregp/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace suregp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_grid_in_model(const CovarianceModel& model, std::span<const double> grid) {
  validate_grid(grid);
  // Evaluating the diagonal at both ends raises DomainError for out-of-range grids.
  (void)model.variance(grid.front());
  (void)model.variance(grid.back());
}

SamplePath assemble(std::span<const double> grid, const DriftFunction& drift, std::vector<double> noise,
                    std::string model_id, std::uint64_t seed) {
  SamplePath path;
  path.grid.assign(grid.begin(), grid.end());
  auto u = drift.on_grid(grid);
  path.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) path.values[i] = noise[i] + u[i];
  path.meta.model_id = std::move(model_id);
  path.meta.seed = seed;
  path.meta.drift = std::move(u);
  return path;
}

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
  std::vector<double> w(grid.size(), 1.0);
  if (grid.size() == 1) return w;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double left = i > 0 ? grid[i] - grid[i - 1] : 0.0;
    const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
    w[i] = 0.5 * (left + right);
  }
  return w;
}

}  // namespace

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("time grid is empty");
  if (!(grid.front() >= 0.0)) throw DomainError("time grid must start at t >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("time grid must be strictly increasing");
}

void validate_path(const SamplePath& path) {
  validate_grid(path.grid);
  if (path.values.size() != path.grid.size()) throw ValidationError("path values and grid differ in length");
  for (double v : path.values)
    if (!std::isfinite(v)) throw ValidationError("path contains non-finite values");
}

std::vector<double> uniform_grid(double start, double end, std::size_t n) {
  if (n == 0) throw DomainError("grid needs at least one point");
  if (n == 1) return {end};
  if (!(end > start)) throw DomainError("grid end must exceed its start");
  std::vector<double> grid(n);
  const double step = (end - start) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) grid[i] = start + static_cast<double>(i) * step;
  grid.back() = end;
  return grid;
}

double interpolate(const SamplePath& path, double t) {
  const auto& g = path.grid;
  if (t < g.front() || t > g.back()) {
    std::ostringstream msg;
    msg << "time " << t << " outside the path grid [" << g.front() << ", " << g.back() << "]";
    throw DomainError(msg.str());
  }
  auto it = std::lower_bound(g.begin(), g.end(), t);
  const auto i = static_cast<std::size_t>(it - g.begin());
  if (g[i] == t) return path.values[i];
  const double w = (t - g[i - 1]) / (g[i] - g[i - 1]);
  return (1.0 - w) * path.values[i - 1] + w * path.values[i];
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(splitmix64(seed)); }

SamplePath simulate_ou(const CovarianceModel& model, const DriftFunction& drift,
                       std::span<const double> grid, std::uint64_t seed) {
  const auto& p = model.ou();
  check_grid_in_model(model, grid);
  const double stationary_var = p.sigma * p.sigma / (2.0 * p.rate);

  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(grid.size());
  noise[0] = std::sqrt(stationary_var) * normal(rng);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dt = grid[i] - grid[i - 1];
    const double rho = std::exp(-p.rate * dt);
    const double innovation_sd = std::sqrt(stationary_var * -std::expm1(-2.0 * p.rate * dt));
    noise[i] = rho * noise[i - 1] + innovation_sd * normal(rng);
  }
  return assemble(grid, drift, std::move(noise), model.id(), seed);
}

CholeskySampler::CholeskySampler(const CovarianceModel& model, std::vector<double> grid)
    : model_id_(model.id()), grid_(std::move(grid)) {
  check_grid_in_model(model, grid_);
  Eigen::MatrixXd k = model.gram(grid_);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * std::max(1.0, k.diagonal().maxCoeff());
    k.diagonal().array() += jitter;
    llt.compute(k);
    if (llt.info() != Eigen::Success)
      throw NumericError("Cholesky factorization failed: Gram matrix not PSD within jitter 1e-10");
  }
  lower_ = llt.matrixL();
}

SamplePath CholeskySampler::sample(const DriftFunction& drift, std::uint64_t seed) const {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(grid_.size());
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  Eigen::VectorXd x = lower_.triangularView<Eigen::Lower>() * z;
  return assemble(grid_, drift, std::vector<double>(x.data(), x.data() + n), model_id_, seed);
}

SamplePath simulate_cholesky(const CovarianceModel& model, const DriftFunction& drift,
                             std::span<const double> grid, std::uint64_t seed) {
  return CholeskySampler(model, std::vector<double>(grid.begin(), grid.end())).sample(drift, seed);
}

KarhunenLoeveBasis::KarhunenLoeveBasis(const CovarianceModel& model, std::vector<double> grid)
    : model_id_(model.id()), grid_(std::move(grid)) {
  check_grid_in_model(model, grid_);
  const auto n = static_cast<Eigen::Index>(grid_.size());
  const auto w = trapezoid_weights(grid_);
  Eigen::VectorXd sqrt_w(n);
  for (Eigen::Index i = 0; i < n; ++i) sqrt_w(i) = std::sqrt(w[static_cast<std::size_t>(i)]);

  const Eigen::MatrixXd b = sqrt_w.asDiagonal() * model.gram(grid_) * sqrt_w.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw NumericError("Karhunen-Loeve eigendecomposition failed");

  // Eigen returns ascending order; the expansion wants the dominant modes first.
  eigenvalues_ = eig.eigenvalues().reverse();
  functions_ = sqrt_w.cwiseInverse().asDiagonal() * eig.eigenvectors().rowwise().reverse();
}

Eigen::MatrixXd KarhunenLoeveBasis::covariance(std::size_t n_terms) const {
  const auto k = static_cast<Eigen::Index>(std::min(n_terms, size()));
  const auto h = functions_.leftCols(k);
  return h * eigenvalues_.head(k).asDiagonal() * h.transpose();
}

double KarhunenLoeveBasis::captured_fraction(std::size_t n_terms) const {
  const auto k = static_cast<Eigen::Index>(std::min(n_terms, size()));
  const Eigen::VectorXd positive = eigenvalues_.cwiseMax(0.0);
  return positive.head(k).sum() / positive.sum();
}

SamplePath KarhunenLoeveBasis::sample(const DriftFunction& drift, std::size_t n_terms,
                                      std::uint64_t seed) const {
  if (n_terms == 0) throw DomainError("Karhunen-Loeve expansion needs n_terms >= 1");
  const auto k = static_cast<Eigen::Index>(std::min(n_terms, size()));
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd xi(k);
  for (Eigen::Index j = 0; j < k; ++j) xi(j) = std::sqrt(std::max(eigenvalues_(j), 0.0)) * normal(rng);
  Eigen::VectorXd x = functions_.leftCols(k) * xi;
  return assemble(grid_, drift, std::vector<double>(x.data(), x.data() + x.size()), model_id_, seed);
}

SamplePath simulate_kl(const CovarianceModel& model, const DriftFunction& drift,
                       std::span<const double> grid, std::size_t n_terms, std::uint64_t seed) {
  if (n_terms == 0) throw DomainError("Karhunen-Loeve expansion needs n_terms >= 1");
  return KarhunenLoeveBasis(model, std::vector<double>(grid.begin(), grid.end()))
      .sample(drift, n_terms, seed);
}

SamplePath simulate(const CovarianceModel& model, const DriftFunction& drift,
                    std::span<const double> grid, std::uint64_t seed) {
  if (model.kind() == CovarianceModel::Kind::OrnsteinUhlenbeck) return simulate_ou(model, drift, grid, seed);
  return simulate_cholesky(model, drift, grid, seed);
}

}  // namespace suregp
