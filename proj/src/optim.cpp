#include "jcvma/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace jcvma {

double weight_objective(const Matrix& f, const Vector& y,
                        const LossSpec& spec, const Vector& w) {
  if (f.rows() != y.size() || f.cols() != w.size())
    throw DimensionError("weight_objective: dimensions disagree");
  const Vector residuals = y - f * w;
  double total = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i)
    total += rho(spec, residuals[i]);
  return total / static_cast<double>(y.size());
}

Vector project_simplex(const Vector& v) {
  if (!v.allFinite())
    throw std::invalid_argument("project_simplex: non-finite input");
  const Eigen::Index m = v.size();
  std::vector<double> sorted(v.data(), v.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = sorted[0] - 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  Vector w(m);
  for (Eigen::Index j = 0; j < m; ++j) w[j] = std::max(v[j] - threshold, 0.0);
  return w;
}

namespace {

// Weights recovered from LP duals carry rounding of order 1e-12; nudge them
// back onto the exact simplex without disturbing the solution.
WeightVector as_weight_vector(Vector w) {
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    if (w[m] < 0.0) {
      if (w[m] < -1e-8)
        throw Error("weights: negative entry beyond tolerance");
      w[m] = 0.0;
    }
    if (w[m] > 1.0) {
      if (w[m] > 1.0 + 1e-8)
        throw Error("weights: entry above one beyond tolerance");
      w[m] = 1.0;
    }
  }
  const double total = w.sum();
  if (std::abs(total - 1.0) > 1e-8)
    throw Error("weights: sum deviates from one beyond tolerance");
  if (total != 1.0) w /= total;
  return WeightVector(std::move(w));
}

}  // namespace

WeightVector solve_weight_lp(const Matrix& f, const Vector& y, double tau) {
  const LossSpec spec(tau, 1);
  if (f.rows() != y.size() || f.cols() < 1)
    throw DimensionError("solve_weight_lp: F/y dimensions disagree");
  if (!f.allFinite() || !y.allFinite())
    throw std::invalid_argument("solve_weight_lp: non-finite entries");
  const Eigen::Index n = f.rows();
  const Eigen::Index m = f.cols();

  if (m == 1) return WeightVector(Vector::Ones(1));

  // Dual of the slack-variable weight LP. Variables: d in [0,1]^n (shifted
  // residual duals), the split free multiplier of the sum-to-one row, and M
  // slacks for the per-model constraints. Row m's multiplier is -w_m.
  LinearProgram lp;
  lp.a.resize(m, n + 2 + m);
  lp.a.leftCols(n) = f.transpose();
  lp.a.col(n) = Vector::Ones(m);
  lp.a.col(n + 1) = -Vector::Ones(m);
  lp.a.rightCols(m) = Matrix::Identity(m, m);
  lp.b = (1.0 - tau) * (f.transpose() * Vector::Ones(n));
  lp.c = Vector::Zero(n + 2 + m);
  lp.c.head(n) = -y;
  lp.c[n] = -1.0;
  lp.c[n + 1] = 1.0;
  lp.upper = Vector::Constant(n + 2 + m, LinearProgram::inf());
  lp.upper.head(n).setOnes();

  const LpSolution sol = solve_lp(lp);
  return as_weight_vector(-sol.row_duals);
}

WeightVector solve_weight_qp(const SimplexQp& problem) {
  problem.validate();
  const Matrix& f = problem.f;
  const Vector& y = problem.y;
  const LossSpec& spec = problem.spec;
  const Eigen::Index n = f.rows();
  const Eigen::Index m = f.cols();

  if (m == 1) return WeightVector(Vector::Ones(1));

  const auto objective = [&](const Vector& w) {
    return weight_objective(f, y, spec, w);
  };
  const auto gradient = [&](const Vector& w) -> Vector {
    const Vector residuals = y - f * w;
    Vector scaled(n);
    for (Eigen::Index i = 0; i < n; ++i)
      scaled[i] = asymmetry_weight(spec.tau, residuals[i]) * residuals[i];
    return (-2.0 / static_cast<double>(n)) * (f.transpose() * scaled);
  };

  // Lipschitz constant of the gradient via the largest eigenvalue of F'F.
  Matrix gram = f.transpose() * f;
  Vector eig = Vector::Ones(m) / std::sqrt(static_cast<double>(m));
  double lambda_max = 1.0;
  for (int it = 0; it < 60; ++it) {
    eig = gram * eig;
    lambda_max = eig.norm();
    if (lambda_max <= 0.0) break;
    eig /= lambda_max;
  }
  const double lipschitz = std::max(
      2.0 * std::max(spec.tau, 1.0 - spec.tau) * lambda_max /
          static_cast<double>(n),
      1e-300);
  const double step = 1.0 / lipschitz;

  // Start at the best vertex so the monotone iteration never does worse
  // than any single model.
  Vector x = Vector::Zero(m);
  {
    int best = 0;
    double best_value = objective(Vector::Unit(m, 0));
    for (Eigen::Index j = 1; j < m; ++j) {
      const double value = objective(Vector::Unit(m, j));
      if (value < best_value) {
        best_value = value;
        best = static_cast<int>(j);
      }
    }
    x[best] = 1.0;
  }

  Vector x_prev = x;
  Vector momentum_point = x;
  double t = 1.0;
  double fx = objective(x);
  std::vector<double> history{fx};

  const int cap = 100000;
  for (int iter = 0; iter < cap; ++iter) {
    const Vector z = project_simplex(momentum_point -
                                     step * gradient(momentum_point));
    const double fz = objective(z);

    x_prev = x;
    const double f_prev = fx;
    if (fz <= fx) {  // monotone step
      x = z;
      fx = fz;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    momentum_point = x + (t / t_next) * (z - x) +
                     ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;
    if (fz > f_prev) t = 1.0;  // restart momentum after a failed step

    const double pg_norm =
        (x - project_simplex(x - gradient(x))).norm();
    history.push_back(fx);
    const bool window_stall =
        history.size() > 10 &&
        (history[history.size() - 11] - fx) / std::max(1.0, std::abs(fx)) <
            1e-12;
    if (pg_norm < 1e-10 || window_stall)
      return as_weight_vector(project_simplex(x));
  }
  throw NotConvergedError("solve_weight_qp: projected gradient hit the cap");
}

}  // namespace jcvma
