#ifndef JCVMA_REGRESS_HPP
#define JCVMA_REGRESS_HPP

#include "jcvma/data.hpp"
#include "jcvma/loss.hpp"

namespace jcvma {

/// Sum of rho_{tau,p} over the residuals y - X theta of one candidate model.
double model_objective(const Dataset& data, const CandidateModel& model,
                       const LossSpec& spec, const Vector& theta);

/// Minimize sum_i rho_{tau,p}(y_i - theta' x_i(m)) for one candidate model.
/// Dispatches on p: 1 -> fit_quantile, 2 -> fit_expectile.
///
/// Requires n > k_m and a full-column-rank submatrix (singular values above
/// 1e-10 times the largest); throws RankDeficientError otherwise.
Coefficients fit(const Dataset& data, const CandidateModel& model,
                 const LossSpec& spec);

/// Exact quantile regression: solves the LP
///   min tau 1'u + (1-tau) 1'v   s.t.  X theta + u - v = y,  u,v >= 0
/// through its bounded dual (min y'd s.t. X'd = tau X'1, 0 <= d <= 1) with
/// the solve_lp simplex engine; the returned theta interpolates the dual
/// basis and attains the LP optimum. Deterministic under Bland's rule; ties
/// resolve to a vertex, so degenerate problems compare by objective only.
Coefficients fit_quantile(const Dataset& data, const CandidateModel& model,
                          double tau);

/// Expectile regression by iteratively reweighted least squares with
/// weights |tau - 1{r_i <= 0}|. Converges when the max absolute coefficient
/// change drops below 1e-10 or the relative objective change drops below
/// 1e-12; throws NotConvergedError after 500 iterations.
Coefficients fit_expectile(const Dataset& data, const CandidateModel& model,
                           double tau);

}  // namespace jcvma

#endif  // JCVMA_REGRESS_HPP
