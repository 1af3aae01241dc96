#include "jcvma/averaging.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "jcvma/optim.hpp"
#include "jcvma/rng.hpp"

namespace jcvma {

std::vector<std::vector<int>> FoldPlan::groups() const {
  std::vector<std::vector<int>> out(fold_count);
  for (std::size_t i = 0; i < assignment.size(); ++i)
    out[assignment[i]].push_back(static_cast<int>(i));
  return out;
}

FoldPlan make_folds(int n, int fold_count, std::uint64_t seed) {
  if (fold_count < 2 || fold_count > n)
    throw std::invalid_argument("make_folds: need 2 <= J <= n");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  const int base = n / fold_count;
  FoldPlan plan{fold_count, std::vector<int>(n, fold_count - 1), seed};
  for (int j = 0; j < fold_count - 1; ++j)
    for (int q = 0; q < base; ++q) plan.assignment[order[j * base + q]] = j;
  return plan;
}

namespace {

struct CvRun {
  Matrix f;
  std::vector<std::pair<int, int>> failures;  // (model, group)
};

// One pass over all (group, model) cells, collecting failures instead of
// throwing so fit_jcvma can drop offenders wholesale.
CvRun run_cv(const Dataset& data, const CandidateSet& models,
             const LossSpec& spec, const FoldPlan& plan) {
  const Eigen::Index n = data.n();
  const int m_count = models.size();
  CvRun run{Matrix::Zero(n, m_count), {}};
  const auto groups = plan.groups();
  for (int j = 0; j < plan.fold_count; ++j) {
    const auto& held_out = groups[j];
    const Eigen::Index train_n = n - static_cast<Eigen::Index>(held_out.size());
    Dataset train;
    train.x.resize(train_n, data.pool_size());
    train.y.resize(train_n);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (plan.assignment[i] == j) continue;
      train.x.row(row) = data.x.row(i);
      train.y[row] = data.y[i];
      ++row;
    }
    for (int m = 0; m < m_count; ++m) {
      try {
        const Coefficients coef = fit(train, models.models[m], spec);
        for (int i : held_out)
          run.f(i, m) = coef.predict(data.x.row(i).transpose());
      } catch (const RankDeficientError&) {
        run.failures.emplace_back(m, j);
      }
    }
  }
  return run;
}

}  // namespace

CvPredictionMatrix cv_predictions(const Dataset& data,
                                  const CandidateSet& models,
                                  const LossSpec& spec,
                                  const FoldPlan& plan) {
  data.validate();
  models.validate(static_cast<int>(data.pool_size()));
  if (static_cast<Eigen::Index>(plan.assignment.size()) != data.n())
    throw DimensionError("cv_predictions: plan does not match data");
  CvRun run = run_cv(data, models, spec, plan);
  if (!run.failures.empty()) {
    const auto [m, j] = run.failures.front();
    throw RankDeficientError(
        "cv_predictions: rank-deficient fit for model " + std::to_string(m) +
            " with group " + std::to_string(j) + " excluded",
        m, j);
  }
  return CvPredictionMatrix{std::move(run.f), plan, spec};
}

double jcv_criterion(const Matrix& f, const Vector& y, const WeightVector& w,
                     const LossSpec& spec) {
  return weight_objective(f, y, spec, w.w);
}

double jcv_criterion(const CvPredictionMatrix& cv, const Vector& y,
                     const WeightVector& w) {
  return jcv_criterion(cv.f, y, w, cv.spec);
}

WeightVector select_weights(const Matrix& f, const Vector& y,
                            const LossSpec& spec) {
  if (spec.p == 1) return solve_weight_lp(f, y, spec.tau);
  return solve_weight_qp(SimplexQp{f, y, spec});
}

Vector embed_coefficients(const Coefficients& theta, int kbar) {
  Vector out = Vector::Zero(kbar);
  for (std::size_t j = 0; j < theta.model.indices.size(); ++j) {
    const int idx = theta.model.indices[j];
    if (idx >= kbar)
      throw std::out_of_range(
          "embed_coefficients: model index outside the first kbar columns");
    out[idx] = theta.values[static_cast<Eigen::Index>(j)];
  }
  return out;
}

double JcvmaFit::predict(const Vector& xnew) const {
  if (xnew.size() != pool_size)
    throw DimensionError("predict: covariate row length != pool size");
  if (xnew[0] != 1.0)
    throw std::invalid_argument("predict: first covariate entry must be 1");
  double acc = 0.0;
  for (int m = 0; m < models.size(); ++m)
    acc += weights[m] * fits[m].predict(xnew);
  return acc;
}

JcvmaFit fit_jcvma(const Dataset& data, const CandidateSet& models,
                   const LossSpec& spec, int fold_count, std::uint64_t seed) {
  data.validate();
  models.validate(static_cast<int>(data.pool_size()));
  const FoldPlan plan = make_folds(static_cast<int>(data.n()), fold_count,
                                   seed);

  CvRun run = run_cv(data, models, spec, plan);
  std::set<int> bad;
  for (const auto& [m, j] : run.failures) bad.insert(m);

  // Full-data fits; a model that cannot be fit on the full sample is
  // dropped on the same grounds as a failed group fit.
  std::vector<Coefficients> fits;
  fits.reserve(models.models.size());
  std::vector<int> fitted_index;
  for (int m = 0; m < models.size(); ++m) {
    if (bad.count(m)) continue;
    try {
      fits.push_back(fit(data, models.models[m], spec));
      fitted_index.push_back(m);
    } catch (const RankDeficientError&) {
      bad.insert(m);
    }
  }
  if (fits.empty())
    throw RankDeficientError(
        "fit_jcvma: every candidate model was rank deficient");

  CandidateSet survivors;
  Matrix f_surviving(data.n(), static_cast<Eigen::Index>(fits.size()));
  for (std::size_t s = 0; s < fitted_index.size(); ++s) {
    survivors.models.push_back(models.models[fitted_index[s]]);
    f_surviving.col(static_cast<Eigen::Index>(s)) =
        run.f.col(fitted_index[s]);
  }

  WeightVector weights = select_weights(f_surviving, data.y, spec);

  // Averaged coefficients exist when every surviving model lies inside the
  // first kbar pool columns (the selection-matrix setting); otherwise the
  // per-model route in predict() remains the only representation.
  const int kbar = survivors.kbar();
  std::optional<Vector> averaged;
  bool representable = true;
  for (const auto& model : survivors.models)
    if (model.indices.back() >= kbar) representable = false;
  if (representable) {
    Vector acc = Vector::Zero(kbar);
    for (std::size_t s = 0; s < fits.size(); ++s)
      acc += weights[static_cast<Eigen::Index>(s)] *
             embed_coefficients(fits[s], kbar);
    averaged = std::move(acc);
  }

  return JcvmaFit{spec,
                  std::move(survivors),
                  std::move(fits),
                  std::move(weights),
                  std::move(averaged),
                  std::vector<int>(bad.begin(), bad.end()),
                  fold_count,
                  seed,
                  data.pool_size()};
}

}  // namespace jcvma
