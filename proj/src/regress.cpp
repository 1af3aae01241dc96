#include "jcvma/regress.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <iostream>

#include "jcvma/simplex.hpp"

namespace jcvma {

namespace {

// Shared precondition checks; returns the model submatrix.
Matrix prepare(const Dataset& data, const CandidateModel& model) {
  data.validate();
  model.validate(static_cast<int>(data.pool_size()));
  const Eigen::Index n = data.n();
  const Eigen::Index k = model.size();
  if (n <= k)
    throw RankDeficientError("fit: need n > k_m observations");
  Matrix xm = model.submatrix(data.x);
  Eigen::JacobiSVD<Matrix> svd(xm);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 1e-10 * sv[0])
    throw RankDeficientError("fit: model submatrix is rank deficient");
  return xm;
}

}  // namespace

double model_objective(const Dataset& data, const CandidateModel& model,
                       const LossSpec& spec, const Vector& theta) {
  if (theta.size() != model.size())
    throw DimensionError("model_objective: theta length != model size");
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < model.indices.size(); ++j)
      pred += theta[static_cast<Eigen::Index>(j)] *
              data.x(i, model.indices[j]);
    total += rho(spec, data.y[i] - pred);
  }
  return total;
}

Coefficients fit_quantile(const Dataset& data, const CandidateModel& model,
                          double tau) {
  const LossSpec spec(tau, 1);
  const Matrix xm = prepare(data, model);
  const Eigen::Index n = xm.rows();
  const Eigen::Index k = xm.cols();

  // Dual of the primal quantile LP; k rows, n box-bounded columns.
  LinearProgram lp;
  lp.a = xm.transpose();
  lp.b = tau * (xm.transpose() * Vector::Ones(n));
  lp.c = data.y;
  lp.upper = Vector::Ones(n);

  LpSolution sol;
  try {
    sol = solve_lp(lp);
  } catch (const UnboundedError&) {
    // The dual feasible set is a box; unboundedness cannot occur.
    throw Error("fit_quantile: internal solver error (unbounded dual)");
  }

  Vector theta = sol.row_duals;
  // Strong duality ties the recovered theta to the primal optimum.
  const double primal = model_objective(data, model, spec, theta);
  const double via_dual = tau * data.y.sum() - sol.objective;
  if (std::abs(primal - via_dual) >
      1e-7 * (1.0 + std::abs(primal) + std::abs(via_dual)))
    throw Error("fit_quantile: duality gap exceeds tolerance");
  return Coefficients{std::move(theta), model, spec};
}

Coefficients fit_expectile(const Dataset& data, const CandidateModel& model,
                           double tau) {
  const LossSpec spec(tau, 2);
  const Matrix xm = prepare(data, model);
  const Eigen::Index n = xm.rows();
  const Eigen::Index k = xm.cols();

  // Start from least squares (the tau = 0.5 solution).
  Vector theta = xm.householderQr().solve(data.y);
  double objective = model_objective(data, model, spec, theta);

  Matrix weighted(n, k);
  Vector rhs(n);
  for (int iter = 0; iter < 500; ++iter) {
    const Vector residuals = data.y - xm * theta;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sw = std::sqrt(asymmetry_weight(tau, residuals[i]));
      weighted.row(i) = sw * xm.row(i);
      rhs[i] = sw * data.y[i];
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(weighted);
    Vector next;
    if (qr.rank() < k) {
      // Weighted design went numerically singular; fall back to ridged
      // normal equations with a trace-scaled jitter.
      Matrix gram = weighted.transpose() * weighted;
      const double jitter = 1e-12 * gram.trace();
      gram.diagonal().array() += jitter;
      next = gram.ldlt().solve(weighted.transpose() * rhs);
      std::cerr << "jcvma: fit_expectile applied jitter " << jitter
                << " to a singular reweighted design\n";
    } else {
      next = qr.solve(rhs);
    }
    const double step = (next - theta).cwiseAbs().maxCoeff();
    theta = next;
    const double next_objective = model_objective(data, model, spec, theta);
    const double rel_change =
        std::abs(objective - next_objective) / std::max(1.0, objective);
    objective = next_objective;
    if (step < 1e-10 || rel_change < 1e-12)
      return Coefficients{std::move(theta), model, spec};
  }
  throw NotConvergedError("fit_expectile: IRLS hit the 500-iteration cap");
}

Coefficients fit(const Dataset& data, const CandidateModel& model,
                 const LossSpec& spec) {
  return spec.p == 1 ? fit_quantile(data, model, spec.tau)
                     : fit_expectile(data, model, spec.tau);
}

}  // namespace jcvma
