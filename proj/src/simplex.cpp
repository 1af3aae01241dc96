#include "jcvma/simplex.hpp"

#include <cmath>
#include <vector>

namespace jcvma {

namespace {

enum class VarState : char { Basic, AtLower, AtUpper };

constexpr double kPivotTol = 1e-11;

class BoundedSimplex {
 public:
  BoundedSimplex(const Matrix& a, const Vector& b, const Vector& upper)
      : a_(a), b_(b), upper_(upper), m_(a.rows()), n_(a.cols()) {
    // Artificial columns carry sign(b_i) so the phase-1 start is feasible.
    state_.assign(static_cast<std::size_t>(n_ + m_), VarState::AtLower);
    basis_.resize(m_);
    art_sign_ = Vector::Ones(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) art_sign_[i] = -1.0;
      basis_[i] = static_cast<int>(n_ + i);
      state_[static_cast<std::size_t>(n_ + i)] = VarState::Basic;
    }
    binv_ = art_sign_.asDiagonal();  // the +-identity start basis
    xb_ = b_.cwiseAbs();
    iterations_ = 0;
  }

  // Returns false when the phase-1 objective cannot be driven to zero.
  bool phase1() {
    in_phase1_ = true;
    Vector cost = Vector::Zero(n_ + m_);
    cost.tail(m_).setOnes();
    run(cost, /*scan_artificials=*/true);
    in_phase1_ = false;
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeasibility += std::abs(xb_[i]);
    return infeasibility <= 1e-7 * (1.0 + b_.lpNorm<Eigen::Infinity>());
  }

  void phase2(const Vector& c) {
    Vector cost = Vector::Zero(n_ + m_);
    cost.head(n_) = c;
    run(cost, /*scan_artificials=*/false);
  }

  LpSolution extract(const Vector& c) {
    refactorize();  // tighten basic values before reading the solution
    Vector x = Vector::Zero(n_);
    for (Eigen::Index j = 0; j < n_; ++j)
      if (state_[static_cast<std::size_t>(j)] == VarState::AtUpper)
        x[j] = upper_[j];
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = xb_[i];
    for (Eigen::Index j = 0; j < n_; ++j)
      if (x[j] < 0.0 && x[j] > -1e-9) x[j] = 0.0;  // rounding at the vertex
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i)
      cb[i] = basis_[i] < n_ ? c[basis_[i]] : 0.0;
    Vector duals = binv_.transpose() * cb;
    return LpSolution{x, c.dot(x), std::move(duals), iterations_};
  }

 private:
  double upper_of(Eigen::Index j) const {
    if (j < n_) return upper_[j];
    // Artificials are free to move in phase 1 and pinned to zero afterwards.
    return in_phase1_ ? LinearProgram::inf() : 0.0;
  }

  Vector column(Eigen::Index j) const {
    if (j < n_) return a_.col(j);
    Vector e = Vector::Zero(m_);
    e[j - n_] = art_sign_[j - n_];
    return e;
  }

  void refactorize() {
    Matrix basis_matrix(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i)
      basis_matrix.col(i) = column(basis_[i]);
    binv_ = basis_matrix.partialPivLu().inverse();
    Vector rhs = b_;
    for (Eigen::Index j = 0; j < n_; ++j)
      if (state_[static_cast<std::size_t>(j)] == VarState::AtUpper)
        rhs -= a_.col(j) * upper_[j];
    xb_ = binv_ * rhs;
  }

  void run(const Vector& cost, bool scan_artificials) {
    const double price_tol = 1e-9 * (1.0 + cost.lpNorm<Eigen::Infinity>());
    const int cap = 20000 + 60 * static_cast<int>(n_ + m_);
    Vector cb(m_);
    for (int iter = 0;; ++iter) {
      if (iter >= cap)
        throw CycleGuardError(
            "simplex: iteration cap reached (cycle guard tripped)");
      ++iterations_;
      for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      const Vector duals = binv_.transpose() * cb;

      // Bland: the entering variable is the smallest-index violator.
      const Eigen::Index scan_end = scan_artificials ? n_ + m_ : n_;
      Eigen::Index entering = -1;
      double direction = 0.0;
      for (Eigen::Index j = 0; j < scan_end; ++j) {
        const VarState st = state_[static_cast<std::size_t>(j)];
        if (st == VarState::Basic) continue;
        if (upper_of(j) <= 0.0) continue;  // fixed at zero, cannot move
        const double reduced =
            j < n_ ? cost[j] - duals.dot(a_.col(j))
                   : cost[j] - duals[j - n_] * art_sign_[j - n_];
        if (st == VarState::AtLower && reduced < -price_tol) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (st == VarState::AtUpper && reduced > price_tol) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return;  // optimal for this phase

      const Vector w = binv_ * column(entering);

      // Ratio test: largest step t >= 0 keeping every basic variable inside
      // its bounds; the entering variable itself may flip to its other
      // bound. Ties prefer the smallest variable index (Bland).
      double t_max = upper_of(entering);
      int leaving_pos = -1;        // -1 => bound flip
      double leaving_bound = 0.0;  // bound the leaving variable hits
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double step = direction * w[i];
        double limit;
        double bound_hit;
        if (step > kPivotTol) {
          limit = xb_[i] / step;
          bound_hit = 0.0;
        } else if (step < -kPivotTol) {
          const double ub = upper_of(basis_[i]);
          if (std::isinf(ub)) continue;
          limit = (ub - xb_[i]) / (-step);
          bound_hit = ub;
        } else {
          continue;
        }
        if (limit < 0.0) limit = 0.0;
        const bool strictly_better = limit < t_max - 1e-12;
        const bool tie = std::abs(limit - t_max) <= 1e-12;
        if (strictly_better ||
            (tie && leaving_pos >= 0 && basis_[i] < basis_[leaving_pos])) {
          t_max = limit;
          leaving_pos = static_cast<int>(i);
          leaving_bound = bound_hit;
        }
      }
      if (std::isinf(t_max))
        throw UnboundedError("simplex: objective unbounded below");

      if (leaving_pos < 0) {
        // Bound flip: no basis change.
        xb_ -= direction * t_max * w;
        state_[static_cast<std::size_t>(entering)] =
            direction > 0 ? VarState::AtUpper : VarState::AtLower;
        continue;
      }

      // Pivot entering into position leaving_pos.
      const int leaving = basis_[leaving_pos];
      xb_ -= direction * t_max * w;
      xb_[leaving_pos] = direction > 0 ? t_max : upper_of(entering) - t_max;
      state_[static_cast<std::size_t>(leaving)] =
          leaving_bound == 0.0 ? VarState::AtLower : VarState::AtUpper;
      state_[static_cast<std::size_t>(entering)] = VarState::Basic;
      basis_[leaving_pos] = static_cast<int>(entering);

      // Elementary row update of the basis inverse.
      const double pivot = w[leaving_pos];
      const Eigen::RowVectorXd pivot_row = binv_.row(leaving_pos) / pivot;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (i == leaving_pos) continue;
        binv_.row(i) -= w[i] * pivot_row;
      }
      binv_.row(leaving_pos) = pivot_row;

      if (++pivots_since_refactor_ >= 128) {
        pivots_since_refactor_ = 0;
        refactorize();
      }
    }
  }

  const Matrix& a_;
  const Vector& b_;
  const Vector& upper_;
  Eigen::Index m_, n_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  Vector art_sign_;
  Matrix binv_;
  Vector xb_;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
  bool in_phase1_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  BoundedSimplex simplex(lp.a, lp.b, lp.upper);
  if (!simplex.phase1())
    throw InfeasibleError("simplex: no feasible point (phase 1)");
  simplex.phase2(lp.c);
  return simplex.extract(lp.c);
}

}  // namespace jcvma
