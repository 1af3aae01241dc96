#include "doctest.h"
#include "jcvma/rng.hpp"
#include "jcvma/simplex.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

using namespace jcvma;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LinearProgram make_lp(Matrix a, Vector b, Vector c) {
  LinearProgram lp;
  lp.a = std::move(a);
  lp.b = std::move(b);
  lp.c = std::move(c);
  lp.upper = Vector::Constant(lp.c.size(), kInf);
  return lp;
}

// Brute-force oracle for small LPs with x >= 0 (no upper bounds):
// enumerate every basis, keep feasible ones, take the best objective.
double enumerate_optimum(const LinearProgram& lp) {
  const Eigen::Index m = lp.a.rows();
  const Eigen::Index n = lp.a.cols();
  double best = kInf;
  std::vector<int> pick(m);
  const std::function<void(int, int)> recurse = [&](int start, int depth) {
    if (depth == m) {
      Matrix basis(m, m);
      for (Eigen::Index i = 0; i < m; ++i) basis.col(i) = lp.a.col(pick[i]);
      const Eigen::FullPivLU<Matrix> lu(basis);
      if (!lu.isInvertible()) return;
      const Vector xb = lu.solve(lp.b);
      if ((xb.array() < -1e-9).any()) return;
      double value = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) value += lp.c[pick[i]] * xb[i];
      best = std::min(best, value);
      return;
    }
    for (int j = start; j < n; ++j) {
      pick[depth] = j;
      recurse(j + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

}  // namespace

TEST_CASE("one-variable maximum at its bound") {
  // min -x subject to x + s = 1 with x, s >= 0.
  Matrix a(1, 2);
  a << 1.0, 1.0;
  Vector b(1), c(2);
  b << 1.0;
  c << -1.0, 0.0;
  const LpSolution sol = solve_lp(make_lp(a, b, c));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(-1.0));
}

TEST_CASE("single-residual check-loss identity") {
  // min tau u + (1-tau) v subject to u - v = r with r = -2, tau = 0.05.
  Matrix a(1, 2);
  a << 1.0, -1.0;
  Vector b(1), c(2);
  b << -2.0;
  c << 0.05, 0.95;
  const LpSolution sol = solve_lp(make_lp(a, b, c));
  CHECK(sol.x[0] == doctest::Approx(0.0));
  CHECK(sol.x[1] == doctest::Approx(2.0));
  CHECK(sol.objective == doctest::Approx(1.9));
}

TEST_CASE("random LPs match the basis-enumeration oracle") {
  Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.below(3));
    const Eigen::Index n = m + 2 + static_cast<Eigen::Index>(rng.below(4));
    Matrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
    Vector x0(n);
    for (Eigen::Index j = 0; j < n; ++j) x0[j] = rng.uniform();
    const Vector b = a * x0;  // feasible by construction
    Vector c(n);
    for (Eigen::Index j = 0; j < n; ++j) c[j] = 0.05 + rng.uniform();
    const LinearProgram lp = make_lp(a, b, c);
    const LpSolution sol = solve_lp(lp);
    const double oracle = enumerate_optimum(lp);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-8));
    CHECK((lp.a * sol.x - lp.b).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((sol.x.array() >= -1e-9).all());
  }
}

TEST_CASE("twenty-constraint LPs carry an optimality certificate") {
  Rng rng(72);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 20;
    const Eigen::Index n = 26;
    Matrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
    Vector x0(n);
    for (Eigen::Index j = 0; j < n; ++j) x0[j] = rng.uniform();
    const Vector b = a * x0;
    Vector c(n);
    for (Eigen::Index j = 0; j < n; ++j) c[j] = 0.05 + rng.uniform();
    const LinearProgram lp = make_lp(a, b, c);
    const LpSolution sol = solve_lp(lp);

    // Feasible, and KKT holds: reduced costs are nonnegative everywhere and
    // vanish on the support. That certifies optimality independently of the
    // solver's own bookkeeping.
    CHECK((lp.a * sol.x - lp.b).lpNorm<Eigen::Infinity>() <= 1e-7);
    CHECK((sol.x.array() >= -1e-9).all());
    const Vector reduced = lp.c - lp.a.transpose() * sol.row_duals;
    for (Eigen::Index j = 0; j < n; ++j) {
      CHECK(reduced[j] >= -1e-7);
      if (sol.x[j] > 1e-7) CHECK(std::abs(reduced[j]) <= 1e-7);
    }
    CHECK(sol.objective <= lp.c.dot(x0) + 1e-9);
  }
}

TEST_CASE("upper bounds are honored") {
  // min -x1 - 2 x2 subject to x1 + x2 + s = 3, x1 <= 1, x2 <= 1.5.
  Matrix a(1, 3);
  a << 1.0, 1.0, 1.0;
  Vector b(1), c(3);
  b << 3.0;
  c << -1.0, -2.0, 0.0;
  LinearProgram lp = make_lp(a, b, c);
  lp.upper[0] = 1.0;
  lp.upper[1] = 1.5;
  const LpSolution sol = solve_lp(lp);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(1.5));
  CHECK(sol.objective == doctest::Approx(-4.0));
}

TEST_CASE("infeasible and unbounded problems are reported") {
  Matrix a(1, 2);
  a << 1.0, 1.0;
  Vector b(1), c(2);
  b << -1.0;
  c << 1.0, 1.0;
  CHECK_THROWS_AS(solve_lp(make_lp(a, b, c)), InfeasibleError);

  Matrix a2(1, 2);
  a2 << 1.0, -1.0;
  Vector b2(1), c2(2);
  b2 << 0.0;
  c2 << -1.0, 0.0;
  CHECK_THROWS_AS(solve_lp(make_lp(a2, b2, c2)), UnboundedError);
}

TEST_CASE("deterministic resolve") {
  Rng rng(73);
  Matrix a(3, 7);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 7; ++j) a(i, j) = rng.normal();
  Vector x0(7);
  for (Eigen::Index j = 0; j < 7; ++j) x0[j] = rng.uniform();
  const Vector b = a * x0;
  Vector c(7);
  for (Eigen::Index j = 0; j < 7; ++j) c[j] = 0.1 + rng.uniform();
  const LinearProgram lp = make_lp(a, b, c);
  const LpSolution first = solve_lp(lp);
  const LpSolution second = solve_lp(lp);
  CHECK(first.x == second.x);
  CHECK(first.objective == second.objective);
}
