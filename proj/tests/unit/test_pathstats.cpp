#include "oracles.hpp"
#include "suregp/error.hpp"
#include "suregp/pathstats.hpp"
#include "suregp/simulate.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace suregp;

namespace {

StandardizedPath ou_z(std::uint64_t seed, std::size_t n = 1000) {
  const auto m = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  const auto grid = uniform_grid(0.0, 1.0, n);
  return standardize(simulate_ou(m, DriftFunction::zero(), grid, seed), DriftFunction::zero(), m);
}

double max_abs(const std::vector<double>& z) {
  double m = 0.0;
  for (double v : z) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("standardization") {
  const auto m = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  const auto p = oracle::path_of(uniform_grid(0.0, 1.0, 5), [](double t) { return 0.3 + 0.1 * t; });
  const auto z = standardize(p, DriftFunction::constant(0.3), m);
  for (std::size_t i = 0; i < 5; ++i) CHECK(z.z[i] == doctest::Approx(0.1 * p.grid[i] / 0.05));
  const auto m0 = CovarianceModel::ornstein_uhlenbeck(0.5, 0.0, 1.0);
  CHECK_THROWS_AS(standardize(p, DriftFunction::zero(), m0), DomainError);
}

TEST_CASE("occupation time on the ramp and at the extremes") {
  const auto r = oracle::ramp();
  CHECK(occupation_time(r, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(occupation_time(r, 0.0) == doctest::Approx(0.0));
  CHECK(occupation_time(r, 2.0) == 1.0);
  const auto z = ou_z(3);
  CHECK(occupation_time(z, 0.0) == 0.0);
  CHECK(occupation_time(z, max_abs(z.z)) == doctest::Approx(z.duration()).epsilon(1e-14));
  CHECK_THROWS_AS(occupation_time(z, -1.0), DomainError);
}

TEST_CASE("occupation time agrees with brute-force resampling") {
  const auto z = ou_z(5, 200);
  for (double lam : {0.1, 0.5, 1.0, 1.7}) CHECK(occupation_time(z, lam) == doctest::Approx(oracle::brute_occupation(z, lam)).epsilon(2e-3));
}

TEST_CASE("occupation is monotone and bounded") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto z = ou_z(seed, 300);
    double prev = 0.0;
    for (double lam = 0.0; lam <= 4.0; lam += 0.01) {
      const double o = occupation_time(z, lam);
      CHECK(o >= prev);
      CHECK(o <= z.duration() + 1e-15);
      prev = o;
    }
  }
}

TEST_CASE("clipped and band integrals on the ramp") {
  const auto r = oracle::ramp();
  // ∫(t ∧ λ)² = λ³/3 + λ²(1−λ);  ∫t²1{t ≤ λ} = λ³/3
  CHECK(clipped_square_integral(r, 0.5) == doctest::Approx(0.125 / 3 + 0.125).epsilon(1e-12));
  CHECK(band_square_integral(r, 0.5) == doctest::Approx(0.125 / 3).epsilon(1e-12));
  std::vector<double> w(r.grid.size(), 1.0);
  CHECK(band_weighted_integral(r, 0.5, w) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("local time estimates") {
  const auto r = oracle::ramp();
  const auto e = local_time(r, 0.5, 0.01);
  CHECK(e.local_time == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e.occupation == doctest::Approx(0.5));
  CHECK(e.bandwidth == 0.01);
  CHECK_FALSE(e.bandwidth_warning);

  const auto c = StandardizedPath::from_values(oracle::linspace(0, 1, 50), std::vector<double>(50, 0.7));
  CHECK(local_time(c, 0.3, 0.05).local_time == 0.0);
  CHECK(local_time(c, 0.3, 0.05).bandwidth_warning);
  CHECK_THROWS_AS(local_time(r, 0.5, 0.0), DomainError);

  // ℓ̄ ≥ 0 and clamped near zero
  const auto z = ou_z(8);
  for (double lam : {0.0, 0.001, 0.3, 2.0}) CHECK(local_time(z, lam, 0.05).local_time >= 0.0);
}

TEST_CASE("total local-time mass equals the horizon on a rough path") {
  // Brownian-like: random walk increments on a fine grid.
  const auto bm = CovarianceModel::brownian(1.0, 1.0, 1e-3);
  const auto grid = uniform_grid(1e-3, 1.0, 4000);
  const auto p = simulate_cholesky(bm, DriftFunction::zero(), grid, 17);
  const auto z = StandardizedPath::from_values(p.grid, p.values);
  const double eps = 0.01;
  const double top = max_abs(z.z) + eps;
  const auto levels = oracle::linspace(0.0, top + 0.01, 3000);
  double mass = 0.0;
  double prev = local_time(z, levels[0], eps).local_time;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double cur = local_time(z, levels[k], eps).local_time;
    mass += 0.5 * (levels[k] - levels[k - 1]) * (prev + cur);
    prev = cur;
  }
  CHECK(mass == doctest::Approx(z.duration()).epsilon(1e-3));
}

TEST_CASE("local time matches the slope of a polynomial fit of occupation") {
  const double pi = std::numbers::pi;
  const auto g = oracle::linspace(0.0, 1.0, 20001);
  std::vector<double> zv;
  for (double t : g) zv.push_back(1.5 * std::sin(2 * pi * t) + 0.3 * t);
  const auto z = StandardizedPath::from_values(g, zv);
  for (double lam0 : {0.4, 0.8, 1.1}) {
    // Least-squares quadratic fit of λ ↦ L̄ on [λ0 − 0.05, λ0 + 0.05].
    const int m = 21;
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      const double d = -0.05 + 0.1 * i / (m - 1);
      a(i, 0) = 1;
      a(i, 1) = d;
      a(i, 2) = d * d;
      b(i) = occupation_time(z, lam0 + d);
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
    CHECK(local_time(z, lam0, 0.01).local_time == doctest::Approx(coef(1)).epsilon(0.05));
  }
}

TEST_CASE("signed local time of transformed paths") {
  const auto grid = oracle::linspace(0.0, 1.0, 1001);
  const auto one = [](double) { return 1.0; };
  const auto none = [](double) { return 0.0; };
  const auto flat = oracle::path_of(grid, [](double) { return 2.0; });
  CHECK(signed_local_time(flat, 0.5, none, one, 0.01) == 0.0);

  const auto ramp = oracle::path_of(grid, [](double t) { return t; });
  CHECK(signed_local_time(ramp, 0.5, none, one, 0.01) == doctest::Approx(1.0).epsilon(1e-9));

  const auto m = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  auto p = simulate_ou(m, DriftFunction::constant(0.3), grid, 4);
  auto shifted = p;
  for (auto& v : shifted.values) v -= 0.3;
  CHECK(signed_local_time(p, 0.3, none, one, 0.005) ==
        doctest::Approx(signed_local_time(shifted, 0.0, none, one, 0.005)).epsilon(1e-9));

  const auto zero_div = [](double t) { return t; };
  CHECK_THROWS_AS(signed_local_time(ramp, 0.5, none, zero_div, 0.01), DomainError);
}

TEST_CASE("lower occupation on a ramp") {
  const auto g = oracle::linspace(0.0, 2.0, 11);
  CHECK(lower_occupation(g, g, 0.7) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(lower_occupation(g, g, -1.0) == 0.0);
  CHECK(lower_occupation(g, g, 5.0) == doctest::Approx(2.0));
}

TEST_CASE("Berman diagnostic") {
  const auto ou = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  const auto rep = check_berman(ou);
  CHECK(rep.likely_finite);
  CHECK(rep.integrals.size() == rep.deltas.size());
  for (std::size_t k = 1; k < rep.integrals.size(); ++k) CHECK(rep.integrals[k] >= rep.integrals[k - 1]);

  // Perfectly correlated noise: Δ ≡ 0.
  const auto g = oracle::linspace(0.0, 1.0, 5);
  const auto flat = CovarianceModel::tabulated(g, Eigen::MatrixXd::Ones(5, 5));
  CHECK_FALSE(check_berman(flat).likely_finite);

  // Inverse variance (p = 1) diverges logarithmically for OU.
  CHECK_FALSE(check_berman(ou, BermanOptions{1.0, 12, 65}).likely_finite);

  for (double s : {0.1, 0.4, 0.9})
    for (double t : {0.2, 0.5, 1.0}) CHECK(increment_variance(ou, s, t) == increment_variance(ou, t, s));
}

TEST_CASE("occupation density formula on the ramp") {
  const auto r = oracle::ramp();
  const auto levels = oracle::linspace(0.0, 1.1, 1101);
  const auto one = occupation_density_check(r, [](double) { return 1.0; }, levels, 0.005);
  CHECK(one.residual <= 1e-3);
  const auto zero = occupation_density_check(r, [](double) { return 0.0; }, levels, 0.005);
  CHECK(zero.residual == 0.0);
  CHECK(zero.time_side == 0.0);
  const auto sq = occupation_density_check(r, [](double a) { return a * a; }, levels, 0.005);
  CHECK(sq.time_side == doctest::Approx(1.0 / 3).epsilon(1e-3));
  CHECK(sq.level_side == doctest::Approx(1.0 / 3).epsilon(1e-3));
  CHECK_THROWS_AS(occupation_density_check(r, [](double) { return 1.0; }, oracle::linspace(0.0, 0.5, 10), 0.005),
                  DomainError);
}

TEST_CASE("occupation density residual shrinks under refinement") {
  for (const auto& f : std::vector<std::function<double(double)>>{
           [](double) { return 1.0; }, [](double a) { return a; }, [](double a) { return a * a; }}) {
    double prev = 1e9;
    for (std::size_t n : {101, 401, 1601}) {
      const auto r = oracle::ramp(n);
      const double h = 1.0 / static_cast<double>(n - 1);
      const auto levels = oracle::linspace(0.0, 1.0 + 4 * h, n + 4);
      const double res = occupation_density_check(r, f, levels, 2 * h).residual;
      CHECK((res < prev || res <= 1e-12));
      prev = res;
    }
  }
}

TEST_CASE("default bandwidth") {
  const auto z = ou_z(2);
  double mean = 0.0;
  for (double v : z.z) mean += v;
  mean /= static_cast<double>(z.z.size());
  double ss = 0.0;
  for (double v : z.z) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(z.z.size()));
  CHECK(default_bandwidth(z) == doctest::Approx(2 * sd * std::pow(1000.0, -0.2)).epsilon(1e-2));
  const auto c = StandardizedPath::from_values(oracle::linspace(0, 1, 10), std::vector<double>(10, 1.0));
  CHECK(default_bandwidth(c) > 0.0);
}
