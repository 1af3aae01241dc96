#ifndef JCVMA_OPTIM_HPP
#define JCVMA_OPTIM_HPP

#include "jcvma/data.hpp"
#include "jcvma/loss.hpp"
#include "jcvma/simplex.hpp"

namespace jcvma {

/// Data of the p=2 weight problem: minimize over the simplex
///   G(w) = (1/n) sum_i rho_{tau,2}(y_i - F_i. w)
/// where column m of F holds model m's cross-validation predictions.
struct SimplexQp {
  Matrix f;
  Vector y;
  LossSpec spec;  // p must be 2

  void validate() const {
    if (spec.p != 2) throw std::invalid_argument("SimplexQp: p must be 2");
    if (f.rows() != y.size() || f.cols() < 1)
      throw DimensionError("SimplexQp: F/y dimensions disagree");
    if (!f.allFinite() || !y.allFinite())
      throw std::invalid_argument("SimplexQp: non-finite entries");
  }
};

/// (1/n) sum_i rho_{tau,p}(y_i - F_i. w); shared by both weight solvers and
/// by the cross-validation criterion.
double weight_objective(const Matrix& f, const Vector& y,
                        const LossSpec& spec, const Vector& w);

/// Euclidean projection onto {w >= 0, sum w = 1} (sort-and-threshold).
Vector project_simplex(const Vector& v);

/// Minimize (1/n) sum_i rho_{tau,1}(y_i - F_i. w) over the simplex.
///
/// The program is the slack-variable LP
///   min tau 1'u + (1-tau) 1'v  s.t.  F w + u - v = y, 1'w = 1, w,u,v >= 0
/// solved exactly through its dual (M rows instead of n+1) with the
/// solve_lp engine; the weights are the dual's row multipliers.
WeightVector solve_weight_lp(const Matrix& f, const Vector& y, double tau);

/// Minimize G(w) over the simplex by monotone accelerated projected
/// gradient from the best vertex. Stops when the projected-gradient norm
/// falls below 1e-10 or the relative objective change over a 10-iteration
/// window falls below 1e-12; throws NotConvergedError after 1e5 iterations.
WeightVector solve_weight_qp(const SimplexQp& problem);

}  // namespace jcvma

#endif  // JCVMA_OPTIM_HPP
