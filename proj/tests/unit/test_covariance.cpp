#include "oracles.hpp"
#include "suregp/covariance.hpp"
#include "suregp/error.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace suregp;

TEST_CASE("OU covariance at the experiment parameters") {
  const auto m = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  CHECK(eval_gamma(m, 0.3, 0.3) == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(m.variance(1.0) == doctest::Approx(0.0025).epsilon(1e-15));
}

TEST_CASE("OU covariance against the closed form") {
  const auto m = CovarianceModel::ornstein_uhlenbeck(1.0, std::sqrt(2.0), 2.0);
  CHECK(eval_gamma(m, 0.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  for (double s : {0.0, 0.1, 0.7, 1.9})
    for (double t : {0.0, 0.4, 1.2, 2.0}) {
      const double direct = 2.0 / 2.0 * std::exp(-std::abs(t - s));
      CHECK(m(s, t) == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("symmetry is exact for every model kind") {
  const auto grid = oracle::linspace(0.0, 1.0, 7);
  Eigen::MatrixXd k(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) k(i, j) = std::exp(-std::abs(grid[i] - grid[j]));
  const std::vector<CovarianceModel> models{
      CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0),
      CovarianceModel::brownian(1.3, 1.0),
      CovarianceModel::tabulated(grid, k),
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& m : models) {
    for (int rep = 0; rep < 200; ++rep) {
      const double s = std::max(m.start(), u(rng));
      const double t = std::max(m.start(), u(rng));
      CHECK(m(s, t) == m(t, s));
    }
  }
}

TEST_CASE("domain errors outside the time range") {
  const auto m = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  CHECK_THROWS_AS(m(-0.1, 0.5), DomainError);
  CHECK_THROWS_AS(m(0.5, 1.5), DomainError);
  CHECK_THROWS_AS(CovarianceModel::ornstein_uhlenbeck(0.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CovarianceModel::ornstein_uhlenbeck(0.5, 1.0, 0.0), ValidationError);
}

TEST_CASE("tabulated models reject non-PSD and asymmetric matrices") {
  const std::vector<double> g{0.0, 0.5, 1.0};
  Eigen::MatrixXd bad(3, 3);
  bad << 1, 2, 0, 2, 1, 0, 0, 0, 1;  // eigenvalue -1
  CHECK_THROWS_AS(CovarianceModel::tabulated(g, bad), ValidationError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 0.1;
  CHECK_THROWS_AS(CovarianceModel::tabulated(g, asym), ValidationError);
}

TEST_CASE("tabulated interpolation is bilinear") {
  const std::vector<double> g{0.0, 1.0};
  Eigen::MatrixXd k(2, 2);
  k << 2.0, 1.0, 1.0, 4.0;
  const auto m = CovarianceModel::tabulated(g, k);
  CHECK(m(0.0, 1.0) == doctest::Approx(1.0));
  // bilinear in (s,t): 2(1-s)(1-t) + 1·(1-s)t + 1·s(1-t) + 4st
  const double s = 0.25, t = 0.5;
  CHECK(m(s, t) == doctest::Approx(2 * (1 - s) * (1 - t) + (1 - s) * t + s * (1 - t) + 4 * s * t));
}

TEST_CASE("Gram matrices are PSD on random grids") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  for (const auto& m : {CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0), CovarianceModel::brownian(1.0, 1.0)}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> g(12);
      for (auto& t : g) t = u(rng);
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.gram(g));
      CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }
  }
}

TEST_CASE("baseline risk") {
  const auto ou = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  SUBCASE("canonical measure gives the horizon") {
    CHECK(baseline_risk(ou, RiskMeasure::canonical(ou)) == doctest::Approx(1.0).epsilon(1e-8));
    const auto b = CovarianceModel::brownian(2.0, 3.0, 0.01);
    CHECK(baseline_risk(b, RiskMeasure::canonical(b)) == doctest::Approx(3.0 - 0.01).epsilon(1e-8));
  }
  SUBCASE("single atom") {
    CHECK(baseline_risk(ou, RiskMeasure::atomic({{0.5, 1.0}})) == doctest::Approx(0.0025).epsilon(1e-14));
  }
  SUBCASE("Brownian with Lebesgue measure") {
    const auto b = CovarianceModel::brownian(1.0, 1.0, 1e-6);
    const double brute = oracle::midpoint([](double t) { return t; }, 1e-6, 1.0);
    CHECK(baseline_risk(b, RiskMeasure::lebesgue(1e-6, 1.0)) == doctest::Approx(brute).epsilon(1e-9));
    CHECK(brute == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("smooth non-constant density") {
    const auto mu = RiskMeasure::density([](double t) { return 1.0 + std::sin(3.0 * t); }, 0.0, 1.0, "wavy");
    const double brute = oracle::midpoint([](double t) { return 0.0025 * (1.0 + std::sin(3.0 * t)); }, 0.0, 1.0);
    CHECK(baseline_risk(ou, mu) == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("risk measures validate their inputs") {
  CHECK_THROWS_AS(RiskMeasure::atomic({{0.5, 0.0}}), ValidationError);
  CHECK_THROWS_AS(RiskMeasure::atomic({{0.5, -1.0}}), ValidationError);
  const auto neg = RiskMeasure::density([](double) { return -1.0; }, 0.0, 1.0, "neg");
  CHECK_THROWS_AS(neg.density_at(0.5), ValidationError);
  const auto ou0 = CovarianceModel::ornstein_uhlenbeck(0.5, 0.0, 1.0);
  CHECK(ou0.degenerate());
  CHECK_THROWS(RiskMeasure::canonical(ou0));
}
