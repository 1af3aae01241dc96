#ifndef JCVMA_SIMPLEX_HPP
#define JCVMA_SIMPLEX_HPP

#include <Eigen/Dense>
#include <limits>

#include "jcvma/data.hpp"

namespace jcvma {

/// Linear program in computational standard form:
///
///   min c'x   s.t.  A x = b,   0 <= x <= upper
///
/// upper entries may be +infinity. Problems with inequality rows are
/// expressed by the caller through explicit slack columns.
struct LinearProgram {
  Matrix a;
  Vector b;
  Vector c;
  Vector upper;  // same length as c; +inf for unbounded-above variables

  static double inf() { return std::numeric_limits<double>::infinity(); }

  void validate() const {
    if (a.rows() != b.size() || a.cols() != c.size() ||
        upper.size() != c.size())
      throw DimensionError("LinearProgram: inconsistent dimensions");
    if (!a.allFinite() || !b.allFinite() || !c.allFinite())
      throw std::invalid_argument("LinearProgram: non-finite problem data");
    for (Eigen::Index j = 0; j < upper.size(); ++j)
      if (upper[j] < 0.0 || std::isnan(upper[j]))
        throw std::invalid_argument("LinearProgram: invalid upper bound");
  }
};

/// Vertex solution of a LinearProgram.
///
/// `row_duals` holds the simplex multipliers pi = c_B' * B^{-1} of the
/// optimal basis; callers use them to read off solutions of the dual
/// program (quantile fits and averaging weights are recovered this way).
struct LpSolution {
  Vector x;
  double objective;
  Vector row_duals;
  int iterations;
};

/// Two-phase revised simplex with variable bounds and Bland's anti-cycling
/// rule. Deterministic for a given column ordering. The basis inverse is
/// kept dense, so problems should be posed with few rows (the tall
/// direction belongs in the columns; pose the dual if needed).
///
/// Throws InfeasibleError, UnboundedError, or CycleGuardError.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace jcvma

#endif  // JCVMA_SIMPLEX_HPP
