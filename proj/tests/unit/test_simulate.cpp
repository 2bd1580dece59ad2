#include "oracles.hpp"
#include "suregp/drift.hpp"
#include "suregp/error.hpp"
#include "suregp/simulate.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace suregp;

namespace {
const auto kOu = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
}

TEST_CASE("scenario drifts") {
  const double pi = std::numbers::pi;
  const auto simple = DriftFunction::scenario(Scenario::Simple);
  const auto level = DriftFunction::scenario(Scenario::Level);
  const auto slope = DriftFunction::scenario(Scenario::Slope);
  for (double t : oracle::linspace(0.0, 1.0, 101)) {
    const double bump = std::max(0.0, std::sin(3 * pi * t));
    const double s2 = std::sin(2 * pi * t);
    const double sgn = s2 > 0 ? 1.0 : (s2 < 0 ? -1.0 : 0.0);
    CHECK(simple(t) == doctest::Approx(0.2 * bump).epsilon(1e-14));
    CHECK(level(t) == doctest::Approx(0.3 + 0.2 * sgn * bump).epsilon(1e-14));
    CHECK(slope(t) == doctest::Approx(0.3 * t + 0.2 * sgn * bump).epsilon(1e-14));
  }
  CHECK(parse_scenario("level") == Scenario::Level);
  CHECK_THROWS(parse_scenario("wiggly"));
}

TEST_CASE("tabulated drift interpolates and rejects out-of-range times") {
  const auto d = DriftFunction::tabulated({0.0, 1.0}, {1.0, 3.0});
  CHECK(d(0.25) == doctest::Approx(1.5));
  CHECK_THROWS_AS(d(1.5), DomainError);
  CHECK_THROWS(d.on_grid(std::vector<double>{0.0, 0.5, 1.0}));
}

TEST_CASE("zero noise reproduces the drift exactly") {
  const auto m0 = CovarianceModel::ornstein_uhlenbeck(0.5, 0.0, 1.0);
  const auto grid = uniform_grid(0.0, 1.0, 200);
  const auto drift = DriftFunction::scenario(Scenario::Level);
  const auto p = simulate_ou(m0, drift, grid, 42);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(p.values[i] == drift(grid[i]));
}

TEST_CASE("OU stationary variance and autocorrelation") {
  const auto grid = uniform_grid(0.0, 1.0, 11);
  const std::size_t n = 200000;
  std::vector<double> sq0(n), sq7(n), lag(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto p = simulate_ou(kOu, DriftFunction::zero(), grid, s + 1);
    sq0[s] = p.values[0] * p.values[0];
    sq7[s] = p.values[7] * p.values[7];
    lag[s] = p.values[2] * p.values[5];
  }
  for (const auto& v : {sq0, sq7}) {
    const auto m = oracle::moments(v);
    CHECK(std::abs(m.mean - 0.0025) <= 3 * m.se);
  }
  const auto m = oracle::moments(lag);
  CHECK(std::abs(m.mean - 0.0025 * std::exp(-0.5 * 0.3)) <= 3 * m.se);
}

TEST_CASE("simulate_ou argument checks") {
  CHECK_THROWS_AS(simulate_ou(CovarianceModel::brownian(1.0, 1.0), DriftFunction::zero(), uniform_grid(0.1, 1, 5), 1),
                  TypeError);
  CHECK_THROWS_AS(simulate_ou(kOu, DriftFunction::zero(), std::vector<double>{}, 1), DomainError);
  CHECK_THROWS_AS(simulate_ou(kOu, DriftFunction::zero(), std::vector<double>{0.5, 0.2}, 1), DomainError);
}

TEST_CASE("Cholesky marginals match exact OU sampling (two-sample KS, level 0.01)") {
  const auto grid = uniform_grid(0.0, 1.0, 21);
  const std::size_t n = 5000;
  CholeskySampler chol(kOu, grid);
  std::vector<double> a(n), b(n);
  for (std::size_t s = 0; s < n; ++s) {
    a[s] = simulate_ou(kOu, DriftFunction::zero(), grid, s + 1).values[13];
    b[s] = chol.sample(DriftFunction::zero(), s + 100001).values[13];
  }
  CHECK(oracle::ks_statistic(a, b) < oracle::ks_critical_01(n, n));
}

TEST_CASE("Cholesky one-point grid and empirical covariance") {
  const auto one = simulate_cholesky(kOu, DriftFunction::constant(0.3), std::vector<double>{0.4}, 5);
  CHECK(one.values.size() == 1);
  CHECK(std::abs(one.values[0] - 0.3) < 0.05 * 6);

  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  const auto bm = CovarianceModel::brownian(1.0, 1.0, 0.01);
  CholeskySampler chol(bm, grid);
  const std::size_t n = 20000;
  std::vector<std::vector<double>> prods(25, std::vector<double>(n));
  for (std::size_t s = 0; s < n; ++s) {
    const auto p = chol.sample(DriftFunction::zero(), s + 1);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) prods[i * 5 + j][s] = p.values[i] * p.values[j];
  }
  int misses = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const auto m = oracle::moments(prods[i * 5 + j]);
      if (std::abs(m.mean - bm(grid[i], grid[j])) > 3 * m.se) ++misses;
    }
  CHECK(misses == 0);
}

TEST_CASE("Cholesky jitter rescues matrices indefinite within the table tolerance") {
  // min eigenvalue -5e-11: accepted by the table check, rescued by the 1e-10 jitter.
  const std::vector<double> g{0.0, 1.0};
  Eigen::MatrixXd k(2, 2);
  k << 1e-10, 1.5e-10, 1.5e-10, 1e-10;
  const auto tab = CovarianceModel::tabulated(g, k);
  CholeskySampler chol(tab, g);
  const auto p = chol.sample(DriftFunction::zero(), 3);
  CHECK(std::isfinite(p.values[0]));
  CHECK(std::isfinite(p.values[1]));
}

TEST_CASE("Karhunen–Loève expansion") {
  const auto grid = uniform_grid(0.0, 1.0, 40);
  KarhunenLoeveBasis kl(kOu, grid);
  SUBCASE("full expansion reproduces the covariance") {
    const auto k = kl.covariance(kl.size());
    const auto gram = kOu.gram(grid);
    for (int i = 0; i < 40; ++i) CHECK(k(i, i) == doctest::Approx(gram(i, i)).epsilon(1e-6));
    CHECK((k - gram).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("one term is rank one") {
    std::vector<std::vector<double>> samples;
    Eigen::MatrixXd x(40, 30);
    for (int s = 0; s < 30; ++s) {
      const auto p = kl.sample(DriftFunction::zero(), 1, s + 1);
      for (int i = 0; i < 40; ++i) x(i, s) = p.values[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x * x.transpose());
    const auto ev = es.eigenvalues();
    CHECK(ev(38) < 1e-12 * ev(39));
  }
  SUBCASE("captured variance is non-decreasing") {
    double prev = 0.0;
    for (std::size_t n = 1; n <= kl.size(); ++n) {
      const double f = kl.captured_fraction(n);
      CHECK(f >= prev - 1e-15);
      prev = f;
    }
    CHECK(prev == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(simulate_kl(kOu, DriftFunction::zero(), grid, 0, 1), DomainError);
}

TEST_CASE("determinism and drift linearity") {
  const auto grid = uniform_grid(0.0, 1.0, 500);
  const auto drift = DriftFunction::scenario(Scenario::Slope);
  const auto a = simulate(kOu, drift, grid, 9);
  const auto b = simulate(kOu, drift, grid, 9);
  CHECK(a.values == b.values);
  const auto z = simulate(kOu, DriftFunction::zero(), grid, 9);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = drift(grid[i]);
    // Subtracting the noise back out is exact up to rounding of the sum.
    CHECK(std::abs((a.values[i] - z.values[i]) - u) <= 4 * std::numeric_limits<double>::epsilon() *
                                                              (std::abs(a.values[i]) + std::abs(z.values[i])));
  }
  const auto bm = CovarianceModel::brownian(1.0, 1.0);
  const auto g2 = uniform_grid(0.01, 1.0, 50);
  CHECK(simulate(bm, drift, g2, 3).values == simulate(bm, drift, g2, 3).values);
  CHECK(simulate(bm, drift, g2, 3).values != simulate(bm, drift, g2, 4).values);
}

TEST_CASE("grid helpers") {
  const auto g = uniform_grid(0.0, 1.0, 1000);
  CHECK(g.size() == 1000);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK_THROWS_AS(validate_grid(std::vector<double>{-0.1, 0.5}), DomainError);
  const auto p = oracle::path_of({0.0, 1.0}, [](double t) { return 2 * t; });
  CHECK(interpolate(p, 0.25) == doctest::Approx(0.5));
}
