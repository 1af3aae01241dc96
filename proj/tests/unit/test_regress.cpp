#include "doctest.h"
#include "jcvma/regress.hpp"
#include "jcvma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

using namespace jcvma;

namespace {

Dataset intercept_only(std::vector<double> y) {
  Dataset data;
  data.x = Matrix::Ones(static_cast<Eigen::Index>(y.size()), 1);
  data.y = Eigen::Map<Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
  return data;
}

Dataset random_dataset(Rng& rng, int n, int k_extra) {
  Dataset data;
  data.x = Matrix::Ones(n, 1 + k_extra);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= k_extra; ++j) data.x(i, j) = rng.normal();
  data.y.resize(n);
  for (int i = 0; i < n; ++i)
    data.y[i] = 1.0 + 0.5 * data.x.row(i).tail(k_extra).sum() + rng.normal();
  return data;
}

CandidateModel full_model(const Dataset& data) {
  CandidateModel model;
  for (int c = 0; c < data.pool_size(); ++c) model.indices.push_back(c);
  return model;
}

// Golden-section search on a scalar convex objective.
double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (f(c) < f(d)) b = d;
    else a = c;
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("intercept-only quantile fit is the sample median") {
  const Dataset data = intercept_only({1.0, 2.0, 3.0});
  const CandidateModel model{{0}};
  const Coefficients coef = fit(data, model, LossSpec(0.5, 1));
  CHECK(coef.values[0] == doctest::Approx(2.0));
}

TEST_CASE("perfect linear fit is exact for both losses") {
  Dataset data;
  data.x = Matrix::Ones(3, 2);
  data.x.col(1) << 1.0, 2.0, 3.0;
  data.y.resize(3);
  data.y << 1.0, 2.0, 3.0;
  const CandidateModel model{{0, 1}};
  for (int p : {1, 2}) {
    for (double tau : {0.3, 0.5, 0.9}) {
      const Coefficients coef = fit(data, model, LossSpec(tau, p));
      CHECK(coef.values[0] == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(coef.values[1] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-point expectile equals tau") {
  const Dataset data = intercept_only({0.0, 1.0});
  const CandidateModel model{{0}};
  const Coefficients coef = fit(data, model, LossSpec(0.9, 2));
  CHECK(coef.values[0] == doctest::Approx(0.9).epsilon(1e-10));
}

TEST_CASE("five-point 0.3-quantile is the second order statistic") {
  const Dataset data = intercept_only({1.0, 2.0, 3.0, 4.0, 5.0});
  const CandidateModel model{{0}};
  const Coefficients coef = fit(data, model, LossSpec(0.3, 1));
  CHECK(coef.values[0] == doctest::Approx(2.0));
}

TEST_CASE("random quantile instance beats a grid around its own solution") {
  Rng rng(21);
  const Dataset data = random_dataset(rng, 20, 2);
  const CandidateModel model = full_model(data);
  const LossSpec spec(0.25, 1);
  const Coefficients coef = fit(data, model, spec);
  const double attained = model_objective(data, model, spec, coef.values);

  // Grid refinement around the returned point: no perturbed point may
  // improve on the attained objective by more than rounding noise.
  double best = attained;
  for (int pass = 0; pass < 4; ++pass) {
    const double radius = std::pow(10.0, -pass);
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int c = -2; c <= 2; ++c) {
          Vector candidate = coef.values;
          candidate[0] += radius * a;
          candidate[1] += radius * b;
          candidate[2] += radius * c;
          best = std::min(best,
                          model_objective(data, model, spec, candidate));
        }
  }
  CHECK(attained <= best + 1e-6 * std::max(1.0, std::abs(best)));
}

TEST_CASE("LP objective equals the summed check loss") {
  Rng rng(22);
  const Dataset data = random_dataset(rng, 50, 3);
  const CandidateModel model = full_model(data);
  const LossSpec spec(0.4, 1);
  const Coefficients coef = fit_quantile(data, model, 0.4);
  double direct = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i)
    direct += rho(spec, data.y[i] - data.x.row(i).dot(coef.values));
  CHECK(model_objective(data, model, spec, coef.values) ==
        doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("quantile optimality bracketing of residual signs") {
  Rng rng(23);
  for (double tau : {0.25, 0.5, 0.8}) {
    const Dataset data = random_dataset(rng, 30, 1);
    const CandidateModel model = full_model(data);
    const Coefficients coef = fit_quantile(data, model, tau);
    int negative = 0, nonpositive = 0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double r = data.y[i] - data.x.row(i).dot(coef.values);
      if (r < -1e-9) ++negative;
      if (r <= 1e-9) ++nonpositive;
    }
    const double n_tau = tau * static_cast<double>(data.n());
    CHECK(negative <= n_tau + 1e-9);
    CHECK(n_tau <= nonpositive + model.size() + 1e-9);
  }
}

TEST_CASE("tau = 0.5 expectile reduces to least squares") {
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = random_dataset(rng, 40, 3);
    const CandidateModel model = full_model(data);
    const Coefficients coef = fit_expectile(data, model, 0.5);
    const Vector ols =
        data.x.householderQr().solve(data.y);
    CHECK((coef.values - ols).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("large intercept-only expectile matches golden-section search") {
  Rng rng(25);
  std::vector<double> y(10000);
  for (auto& value : y) value = rng.normal();
  const Dataset data = intercept_only(std::move(y));
  const CandidateModel model{{0}};
  const LossSpec spec(0.05, 2);
  const Coefficients coef = fit_expectile(data, model, 0.05);
  const auto objective = [&](double q) {
    Vector theta(1);
    theta << q;
    return model_objective(data, model, spec, theta);
  };
  const double oracle = golden_minimize(objective, -5.0, 5.0);
  CHECK(coef.values[0] == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("expectile first-order condition holds per column") {
  Rng rng(26);
  for (double tau : {0.05, 0.5, 0.95}) {
    const Dataset data = random_dataset(rng, 60, 3);
    const CandidateModel model = full_model(data);
    const Coefficients coef = fit_expectile(data, model, tau);
    const Vector residuals = data.y - data.x * coef.values;
    for (Eigen::Index j = 0; j < data.pool_size(); ++j) {
      double condition = 0.0;
      double scale = 1.0;
      for (Eigen::Index i = 0; i < data.n(); ++i) {
        const double term = asymmetry_weight(tau, residuals[i]) *
                            residuals[i] * data.x(i, j);
        condition += term;
        scale += std::abs(term);
      }
      CHECK(std::abs(condition) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("fits beat random reference vectors on the objective") {
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset data = random_dataset(rng, 15 + static_cast<int>(rng.below(20)), 2);
    const CandidateModel model = full_model(data);
    const double tau = 0.05 + 0.9 * rng.uniform();
    const int p = trial % 2 ? 1 : 2;
    const LossSpec spec(tau, p);
    const Coefficients coef = fit(data, model, spec);
    const double attained = model_objective(data, model, spec, coef.values);
    Vector reference = coef.values;
    for (Eigen::Index j = 0; j < reference.size(); ++j)
      reference[j] += 2.0 * (rng.uniform() - 0.5);
    CHECK(attained <=
          model_objective(data, model, spec, reference) + 1e-9);
  }
}

TEST_CASE("scaling the response scales the coefficients") {
  Rng rng(28);
  const Dataset data = random_dataset(rng, 35, 2);
  const CandidateModel model = full_model(data);
  Dataset scaled = data;
  const double factor = 3.5;
  scaled.y *= factor;

  const Coefficients q1 = fit_quantile(data, model, 0.3);
  const Coefficients q2 = fit_quantile(scaled, model, 0.3);
  CHECK((q2.values - factor * q1.values).lpNorm<Eigen::Infinity>() <= 1e-9);

  const Coefficients e1 = fit_expectile(data, model, 0.3);
  const Coefficients e2 = fit_expectile(scaled, model, 0.3);
  CHECK((e2.values - factor * e1.values).lpNorm<Eigen::Infinity>() <=
        1e-7 * factor);
}

TEST_CASE("rank deficiency and undersized samples are rejected") {
  Dataset data;
  data.x = Matrix::Ones(5, 3);
  data.x.col(1) << 1, 2, 3, 4, 5;
  data.x.col(2) = 2.0 * data.x.col(1);  // exact collinearity
  data.y = Vector::Zero(5);
  CHECK_THROWS_AS(fit(data, CandidateModel{{0, 1, 2}}, LossSpec(0.5, 2)),
                  RankDeficientError);

  const Dataset tiny = intercept_only({1.0});
  CHECK_THROWS_AS(fit(tiny, CandidateModel{{0}}, LossSpec(0.5, 1)),
                  RankDeficientError);
}
