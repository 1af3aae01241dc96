#ifndef JCVMA_STATS_HPP
#define JCVMA_STATS_HPP

namespace jcvma {

double normal_pdf(double x);
double normal_cdf(double x);

/// tau-quantile of the standard normal (bisection on the CDF to 1e-13).
double normal_quantile(double tau);

/// tau-expectile of the standard normal: the root q of
///   tau E[(Z - q)+] = (1 - tau) E[(q - Z)+]
/// found by bisection to 1e-10.
double normal_expectile(double tau);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a t statistic with df degrees of freedom.
double student_t_pvalue(double t, double df);

}  // namespace jcvma

#endif  // JCVMA_STATS_HPP
