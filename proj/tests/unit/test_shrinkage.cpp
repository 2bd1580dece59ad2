#include "oracles.hpp"
#include "suregp/error.hpp"
#include "suregp/shrinkage.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace suregp;

TEST_CASE("threshold functions") {
  CHECK(eta_soft(2.0) == 1.0);
  CHECK(eta_soft(-0.5) == 0.0);
  CHECK(eta_soft(-3.0) == -2.0);
  CHECK(eta_hard(2.0) == 2.0);
  CHECK(eta_hard(0.5) == 0.0);
  CHECK(eta_hard(-1.0) == 0.0);
  CHECK(eta_hard(-1.0000001) == -1.0000001);
}

TEST_CASE("estimators on a unit-variance model") {
  const auto m = oracle::unit_ou();
  const auto p = oracle::path_of({0.0, 0.5, 1.0}, [](double t) { return t < 0.25 ? 1.5 : (t < 0.75 ? 0.5 : -2.5); });
  const auto soft = apply_estimator(p, {ThresholdKind::Soft, DriftFunction::zero(), 1.0}, m);
  CHECK(soft.values[0] == doctest::Approx(0.5));
  CHECK(soft.values[0] == doctest::Approx(0.0 + 1.0 * eta_soft(1.5 / 1.0)));
  CHECK(soft.values[1] == 0.0);
  CHECK(soft.values[2] == doctest::Approx(-1.5));
  const auto hard = apply_estimator(p, {ThresholdKind::Hard, DriftFunction::zero(), 1.0}, m);
  CHECK(hard.values[0] == 1.5);
  CHECK(hard.values[1] == 0.0);
  CHECK(hard.values[2] == -2.5);
  const auto none = apply_estimator(p, {ThresholdKind::Soft, DriftFunction::zero(), 0.0}, m);
  CHECK(none.values == p.values);
  const auto none_h = apply_estimator(p, {ThresholdKind::Hard, DriftFunction::zero(), 0.0}, m);
  CHECK(none_h.values == p.values);
  CHECK_THROWS_AS(apply_estimator(p, {ThresholdKind::Soft, DriftFunction::zero(), -1.0}, m), DomainError);
}

TEST_CASE("band scaling uses the noise standard deviation") {
  const auto m = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  const ThresholdSpec spec{ThresholdKind::Soft, DriftFunction::constant(0.3), 2.0};
  CHECK(spec.level_at(m, 0.4) == doctest::Approx(0.1));
}

TEST_CASE("soft forms agree and soft shrinkage is 1-Lipschitz, hard is keep-or-kill") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 2.0);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int rep = 0; rep < 5000; ++rep) {
    const double x = n(rng), y = n(rng), a = n(rng), band = u(rng);
    const double direct = shrink(ThresholdKind::Soft, x, a, band);
    CHECK(std::abs(direct - (a + band * eta_soft((x - a) / band))) <= 1e-12 * (1 + std::abs(x) + std::abs(a)));
    CHECK(std::abs(direct - shrink(ThresholdKind::Soft, y, a, band)) <= std::abs(x - y) + 1e-12);
    // never crosses the centre
    CHECK((direct - a) * (x - a) >= 0.0);
    const double h = shrink(ThresholdKind::Hard, x, a, band);
    CHECK((h == x || h == a));
  }
  // boundary: hard keeps |x − α| = band
  CHECK(shrink(ThresholdKind::Hard, 1.0, 0.0, 1.0) == 1.0);
  CHECK(soft_correction_derivative(0.5, 0.0, 1.0) == -1.0);
  CHECK(soft_correction_derivative(1.5, 0.0, 1.0) == 0.0);
}
