#ifndef JCVMA_LOSS_HPP
#define JCVMA_LOSS_HPP

#include <cmath>
#include <stdexcept>

namespace jcvma {

/// Asymmetry level and power of the flexible loss rho_{tau,p}.
///
/// tau in (0,1) sets how much heavier one error sign is penalized; p is 1
/// (check/pinball loss, quantile-type fits) or 2 (asymmetric squared loss,
/// expectile-type fits). tau = 0.5 makes the loss symmetric.
struct LossSpec {
  double tau;
  int p;

  LossSpec(double tau_level, int power) : tau(tau_level), p(power) {
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("LossSpec: tau must lie strictly in (0,1)");
    if (p != 1 && p != 2)
      throw std::invalid_argument("LossSpec: p must be 1 or 2");
  }
};

/// Weight |tau - 1{lambda <= 0}|; the indicator includes 0.
inline double asymmetry_weight(double tau, double lambda) {
  return lambda <= 0.0 ? 1.0 - tau : tau;
}

/// Flexible loss |tau - 1{lambda <= 0}| * |lambda|^p.
inline double rho(const LossSpec& spec, double lambda) {
  const double a = std::abs(lambda);
  return asymmetry_weight(spec.tau, lambda) * (spec.p == 1 ? a : a * a);
}

/// psi_tau(u) = tau - 1{u <= 0}. Up to sign this is the p=1 score; the
/// indicator convention at u = 0 matches rho (left limit).
inline double psi(double tau, double u) {
  return u <= 0.0 ? tau - 1.0 : tau;
}

/// Psi_tau(u) = |tau - 1{u <= 0}| * u. Diagnostic helper.
inline double weighted_identity(double tau, double u) {
  return asymmetry_weight(tau, u) * u;
}

/// d/dlambda rho(lambda). For p = 2 this is the exact derivative
/// 2|tau - 1{lambda <= 0}| * lambda. For p = 1 the loss has a kink at 0 and
/// we return |tau - 1{lambda <= 0}| * sign(lambda) with sign(0) = -1, i.e.
/// the left-derivative convention consistent with the indicator.
inline double loss_gradient(const LossSpec& spec, double lambda) {
  const double weight = asymmetry_weight(spec.tau, lambda);
  if (spec.p == 2) return 2.0 * weight * lambda;
  return lambda > 0.0 ? weight : -weight;
}

}  // namespace jcvma

#endif  // JCVMA_LOSS_HPP
