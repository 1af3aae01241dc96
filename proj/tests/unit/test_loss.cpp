#include "doctest.h"
#include "jcvma/loss.hpp"
#include "jcvma/rng.hpp"

#include <cmath>

using namespace jcvma;

TEST_CASE("rho matches hand values") {
  CHECK(rho(LossSpec(0.5, 2), 2.0) == doctest::Approx(2.0));
  CHECK(rho(LossSpec(0.05, 1), -1.0) == doctest::Approx(0.95));
  CHECK(rho(LossSpec(0.7, 1), 0.0) == doctest::Approx(0.0));
  CHECK(rho(LossSpec(0.7, 1), 2.0) == doctest::Approx(1.4));
}

TEST_CASE("psi and weighted identity match hand values") {
  CHECK(psi(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(psi(0.05, -2.0) == doctest::Approx(-0.95));
  CHECK(psi(0.3, 0.0) == doctest::Approx(-0.7));  // indicator fires at 0

  CHECK(weighted_identity(0.5, 2.0) == doctest::Approx(1.0));
  CHECK(weighted_identity(0.05, -1.0) == doctest::Approx(-0.95));
  CHECK(weighted_identity(0.9, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("loss gradient matches hand values") {
  CHECK(loss_gradient(LossSpec(0.5, 2), 3.0) == doctest::Approx(3.0));
  CHECK(loss_gradient(LossSpec(0.05, 2), -2.0) == doctest::Approx(-3.8));
  CHECK(loss_gradient(LossSpec(0.5, 2), 0.0) == doctest::Approx(0.0));
  // Left convention at the p=1 kink: sign(0) = -1.
  CHECK(loss_gradient(LossSpec(0.3, 1), 0.0) == doctest::Approx(-0.7));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(LossSpec(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec(0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec(0.5, 0), std::invalid_argument);
}

TEST_CASE("nonnegativity, zero only at zero") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double tau = 0.01 + 0.98 * rng.uniform();
    const int p = rng.uniform() < 0.5 ? 1 : 2;
    const double lambda = 20.0 * (rng.uniform() - 0.5);
    const double value = rho(LossSpec(tau, p), lambda);
    CHECK(value >= 0.0);
    if (lambda != 0.0) CHECK(value > 0.0);
  }
  CHECK(rho(LossSpec(0.42, 1), 0.0) == 0.0);
  CHECK(rho(LossSpec(0.42, 2), 0.0) == 0.0);
}

TEST_CASE("symmetry at tau = 0.5 and the asymmetry ratio") {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const double lambda = 0.01 + 10.0 * rng.uniform();
    for (int p : {1, 2}) {
      CHECK(rho(LossSpec(0.5, p), lambda) ==
            doctest::Approx(rho(LossSpec(0.5, p), -lambda)));
      const double tau = 0.01 + 0.98 * rng.uniform();
      const LossSpec spec(tau, p);
      CHECK(rho(spec, lambda) / rho(spec, -lambda) ==
            doctest::Approx(tau / (1.0 - tau)).epsilon(1e-9));
    }
  }
}

TEST_CASE("p=2 convexity by finite differences") {
  Rng rng(13);
  const double h = 1e-4;
  for (int i = 0; i < 10000; ++i) {
    const double tau = 0.01 + 0.98 * rng.uniform();
    double lambda = 10.0 * (rng.uniform() - 0.5);
    if (std::abs(lambda) < 3.0 * h) lambda = 3.0 * h + 0.01;
    const LossSpec spec(tau, 2);
    const double second = (rho(spec, lambda + h) - 2.0 * rho(spec, lambda) +
                           rho(spec, lambda - h)) /
                          (h * h);
    CHECK(second >= -1e-7);
  }
}

TEST_CASE("p=2 gradient against central differences") {
  Rng rng(14);
  for (int i = 0; i < 2000; ++i) {
    const double tau = 0.01 + 0.98 * rng.uniform();
    double lambda = 10.0 * (rng.uniform() - 0.5);
    if (std::abs(lambda) <= 1e-3) lambda = lambda < 0 ? -2e-3 : 2e-3;
    const LossSpec spec(tau, 2);
    const double h = 1e-6 * std::max(1.0, std::abs(lambda));
    const double numeric =
        (rho(spec, lambda + h) - rho(spec, lambda - h)) / (2.0 * h);
    const double analytic = loss_gradient(spec, lambda);
    CHECK(numeric == doctest::Approx(analytic).epsilon(1e-6));
  }
}
