#include "suregp/covariance.hpp"

#include "suregp/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace suregp {

namespace {

constexpr double kPsdTolerance = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Index i with grid[i] <= t <= grid[i+1] and the fractional position inside the cell.
std::pair<std::size_t, double> locate(const std::vector<double>& grid, double t) {
  if (grid.size() == 1) return {0, 0.0};
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  i = std::min(i, grid.size() - 2);
  const double frac = (t - grid[i]) / (grid[i + 1] - grid[i]);
  return {i, std::clamp(frac, 0.0, 1.0)};
}

}  // namespace

CovarianceModel CovarianceModel::ornstein_uhlenbeck(double rate, double sigma, double horizon) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ValidationError("OU rate must be > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("OU sigma must be >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon must be > 0");
  return CovarianceModel(OrnsteinUhlenbeckParams{rate, sigma}, horizon);
}

CovarianceModel CovarianceModel::brownian(double sigma, double horizon, double start_offset) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("Brownian sigma must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon must be > 0");
  if (start_offset < 0.0) start_offset = horizon / 1000.0;
  if (!(start_offset > 0.0) || start_offset >= horizon)
    throw ValidationError("Brownian start offset must lie in (0, horizon)");
  return CovarianceModel(BrownianParams{sigma, start_offset}, horizon);
}

CovarianceModel CovarianceModel::tabulated(std::vector<double> grid, Eigen::MatrixXd values) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (grid.empty()) throw ValidationError("tabulated covariance needs a non-empty grid");
  if (values.rows() != n || values.cols() != n)
    throw ValidationError("tabulated covariance matrix must be grid.size() x grid.size()");
  if (grid.front() < 0.0) throw ValidationError("tabulated grid must start at t >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("tabulated grid must be strictly increasing");
  if (!values.allFinite()) throw ValidationError("tabulated covariance has non-finite entries");

  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if ((values - values.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("tabulated covariance is not symmetric");
  Eigen::MatrixXd sym = 0.5 * (values + values.transpose());
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(sym(i, i) > 0.0)) throw ValidationError("tabulated covariance has a vanishing diagonal");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw ValidationError("eigenvalue check failed on tabulated covariance");
  if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
    std::ostringstream msg;
    msg << "tabulated covariance is not PSD (min eigenvalue " << eig.eigenvalues().minCoeff() << ")";
    throw ValidationError(msg.str());
  }
  const double horizon = grid.back();
  auto table = std::make_shared<const TabulatedParams>(TabulatedParams{std::move(grid), std::move(sym)});
  return CovarianceModel(std::move(table), horizon);
}

CovarianceModel::Kind CovarianceModel::kind() const {
  return std::visit(Overloaded{
                        [](const OrnsteinUhlenbeckParams&) { return Kind::OrnsteinUhlenbeck; },
                        [](const BrownianParams&) { return Kind::BrownianMotion; },
                        [](const std::shared_ptr<const TabulatedParams>&) { return Kind::Tabulated; },
                    },
                    params_);
}

double CovarianceModel::start() const {
  return std::visit(Overloaded{
                        [](const OrnsteinUhlenbeckParams&) { return 0.0; },
                        [](const BrownianParams& p) { return p.start_offset; },
                        [](const std::shared_ptr<const TabulatedParams>& p) { return p->grid.front(); },
                    },
                    params_);
}

bool CovarianceModel::degenerate() const {
  const auto* p = std::get_if<OrnsteinUhlenbeckParams>(&params_);
  return p != nullptr && p->sigma == 0.0;
}

void CovarianceModel::check_time(double t) const {
  const double lo = kind() == Kind::Tabulated ? start() : 0.0;
  // Grids built by accumulation may overshoot the horizon by a few ulps.
  const double slack = 1e-12 * std::max(1.0, horizon_);
  if (!(t >= lo - slack && t <= horizon_ + slack)) {
    std::ostringstream msg;
    msg << "time " << t << " outside [" << lo << ", " << horizon_ << "]";
    throw DomainError(msg.str());
  }
}

double CovarianceModel::operator()(double s, double t) const {
  check_time(s);
  check_time(t);
  return std::visit(
      Overloaded{
          [&](const OrnsteinUhlenbeckParams& p) {
            return p.sigma * p.sigma / (2.0 * p.rate) * std::exp(-p.rate * std::abs(t - s));
          },
          [&](const BrownianParams& p) { return p.sigma * p.sigma * std::min(s, t); },
          [&](const std::shared_ptr<const TabulatedParams>& p) {
            // Ordering the arguments makes the bilinear form exactly symmetric.
            const double lo = std::min(s, t);
            const double hi = std::max(s, t);
            const auto [i, fi] = locate(p->grid, lo);
            const auto [j, fj] = locate(p->grid, hi);
            const auto& m = p->values;
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            if (p->grid.size() == 1) return m(0, 0);
            return (1 - fi) * (1 - fj) * m(ii, jj) + fi * (1 - fj) * m(ii + 1, jj) +
                   (1 - fi) * fj * m(ii, jj + 1) + fi * fj * m(ii + 1, jj + 1);
          },
      },
      params_);
}

double CovarianceModel::variance(double t) const { return (*this)(t, t); }

Eigen::MatrixXd CovarianceModel::gram(std::span<const double> grid) const {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = (*this)(grid[i], grid[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = (*this)(grid[i], grid[j]);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

const OrnsteinUhlenbeckParams& CovarianceModel::ou() const {
  if (const auto* p = std::get_if<OrnsteinUhlenbeckParams>(&params_)) return *p;
  throw TypeError("covariance model is not Ornstein-Uhlenbeck: " + id());
}

const BrownianParams& CovarianceModel::brownian() const {
  if (const auto* p = std::get_if<BrownianParams>(&params_)) return *p;
  throw TypeError("covariance model is not Brownian: " + id());
}

const TabulatedParams& CovarianceModel::table() const {
  if (const auto* p = std::get_if<std::shared_ptr<const TabulatedParams>>(&params_)) return **p;
  throw TypeError("covariance model is not tabulated: " + id());
}

std::string CovarianceModel::id() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const OrnsteinUhlenbeckParams& p) {
                   out << "ou(a=" << p.rate << ",sigma=" << p.sigma << ",T=" << horizon_ << ")";
                 },
                 [&](const BrownianParams& p) {
                   out << "brownian(sigma=" << p.sigma << ",t0=" << p.start_offset << ",T=" << horizon_
                       << ")";
                 },
                 [&](const std::shared_ptr<const TabulatedParams>& p) {
                   out << "tabulated(n=" << p->grid.size() << ",T=" << horizon_ << ")";
                 },
             },
             params_);
  return out.str();
}

double eval_gamma(const CovarianceModel& model, double s, double t) { return model(s, t); }

// --- RiskMeasure ---------------------------------------------------------------

RiskMeasure RiskMeasure::density(std::function<double(double)> f, double lower, double upper,
                                 std::string id) {
  if (!f) throw ValidationError("density measure needs a function");
  if (!(lower >= 0.0) || !(upper > lower)) throw ValidationError("density support must satisfy 0 <= lower < upper");
  RiskMeasure mu;
  mu.kind_ = Kind::Density;
  mu.f_ = std::move(f);
  mu.lower_ = lower;
  mu.upper_ = upper;
  mu.id_ = std::move(id);
  return mu;
}

RiskMeasure RiskMeasure::lebesgue(double lower, double upper) {
  return density([](double) { return 1.0; }, lower, upper, "lebesgue");
}

RiskMeasure RiskMeasure::canonical(const CovarianceModel& model) {
  if (model.degenerate()) throw ValidationError("canonical measure needs a non-vanishing covariance");
  auto mu = density([model](double t) { return 1.0 / model.variance(t); }, model.start(),
                    model.horizon(), "canonical");
  mu.canonical_ = true;
  return mu;
}

RiskMeasure RiskMeasure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ValidationError("atomic measure needs at least one atom");
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw ValidationError("atom weights must be > 0");
    if (!(a.time >= 0.0) || !std::isfinite(a.time)) throw ValidationError("atom times must be >= 0");
  }
  RiskMeasure mu;
  mu.kind_ = Kind::Atomic;
  mu.atoms_ = std::move(atoms);
  mu.lower_ = mu.atoms_.front().time;
  mu.upper_ = mu.atoms_.front().time;
  for (const auto& a : mu.atoms_) {
    mu.lower_ = std::min(mu.lower_, a.time);
    mu.upper_ = std::max(mu.upper_, a.time);
  }
  mu.id_ = "atomic(n=" + std::to_string(mu.atoms_.size()) + ")";
  return mu;
}

double RiskMeasure::density_at(double t) const {
  if (kind_ != Kind::Density) throw TypeError("density_at called on an atomic measure");
  if (t < lower_ || t > upper_) return 0.0;
  const double v = f_(t);
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream msg;
    msg << "measure density " << id_ << " evaluates to " << v << " at t=" << t;
    throw ValidationError(msg.str());
  }
  return v;
}

std::vector<QuadratureNode> quadrature_nodes(const RiskMeasure& mu, std::span<const double> grid) {
  std::vector<QuadratureNode> nodes;
  if (mu.kind() == RiskMeasure::Kind::Atomic) {
    nodes.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) nodes.push_back({a.time, a.weight});
    return nodes;
  }
  // Trapezoid over the run of grid points inside the support.
  const double slack = 1e-12 * std::max(1.0, mu.upper());
  std::size_t first = 0;
  while (first < grid.size() && grid[first] < mu.lower() - slack) ++first;
  std::size_t last = first;
  while (last < grid.size() && grid[last] <= mu.upper() + slack) ++last;
  if (last - first < 2) return nodes;
  nodes.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const double left = i > first ? grid[i] - grid[i - 1] : 0.0;
    const double right = i + 1 < last ? grid[i + 1] - grid[i] : 0.0;
    const double t = std::clamp(grid[i], mu.lower(), mu.upper());
    nodes.push_back({grid[i], 0.5 * (left + right) * mu.density_at(t)});
  }
  return nodes;
}

double baseline_risk(const CovarianceModel& model, const RiskMeasure& mu) {
  if (mu.kind() == RiskMeasure::Kind::Atomic) {
    double sum = 0.0;
    for (const auto& a : mu.atoms()) sum += a.weight * model.variance(a.time);
    return sum;
  }
  const double a = mu.lower();
  const double b = std::min(mu.upper(), model.horizon());
  auto g = [&](double t) { return model.variance(t) * mu.density_at(t); };

  // Trapezoid on 2^k cells, refined until the Richardson estimate settles.
  constexpr int kMinLevel = 4;
  constexpr int kMaxLevel = 22;
  std::size_t cells = 1;
  double trap = 0.5 * (b - a) * (g(a) + g(b));
  double previous_richardson = 0.0;
  for (int level = 1; level <= kMaxLevel; ++level) {
    const double h = (b - a) / static_cast<double>(2 * cells);
    double mids = 0.0;
    for (std::size_t i = 0; i < cells; ++i) mids += g(a + static_cast<double>(2 * i + 1) * h);
    const double refined = 0.5 * trap + h * mids;
    const double richardson = (4.0 * refined - trap) / 3.0;
    trap = refined;
    cells *= 2;
    if (!std::isfinite(richardson)) throw NumericError("baseline risk quadrature produced a non-finite value");
    if (level >= kMinLevel) {
      const double change = std::abs(richardson - previous_richardson);
      if (change <= 1e-9 * std::max(std::abs(richardson), 1e-300)) return richardson;
    }
    previous_richardson = richardson;
  }
  throw NumericError("baseline risk quadrature did not converge to 1e-9 relative change");
}

}  // namespace suregp
