#include "jcvma/baselines.hpp"

#include <cmath>
#include <limits>

namespace jcvma {

CriterionScore info_criterion(const Dataset& data, const Coefficients& fitted,
                              int model_index, CriterionKind kind) {
  if (kind == CriterionKind::Jcv)
    throw std::invalid_argument(
        "info_criterion: JCV scores come from jcv_criterion, not a fit");
  const double n = static_cast<double>(data.n());
  const double mean_loss =
      model_objective(data, fitted.model, fitted.spec, fitted.values) / n;
  const double k = static_cast<double>(fitted.model.size());
  const double penalty =
      kind == CriterionKind::Aic ? 2.0 * k : k * std::log(n);
  if (mean_loss <= 0.0)
    return CriterionScore{model_index, kind,
                          -std::numeric_limits<double>::infinity(), true};
  const double value =
      (2.0 / fitted.spec.p) * n * std::log(mean_loss) + penalty;
  return CriterionScore{model_index, kind, value, false};
}

CriterionScore info_criterion(const Dataset& data, const CandidateModel& model,
                              const LossSpec& spec, CriterionKind kind) {
  const Coefficients fitted = fit(data, model, spec);
  return info_criterion(data, fitted, /*model_index=*/0, kind);
}

WeightVector smooth_weights(const std::vector<CriterionScore>& scores) {
  if (scores.empty())
    throw std::invalid_argument("smooth_weights: empty score list");
  for (const auto& s : scores)
    if (s.kind != scores.front().kind)
      throw std::invalid_argument("smooth_weights: mixed score kinds");

  const Eigen::Index m = static_cast<Eigen::Index>(scores.size());
  Vector w = Vector::Zero(m);

  int zero_count = 0;
  for (const auto& s : scores) zero_count += s.zero_loss ? 1 : 0;
  if (zero_count > 0) {
    for (Eigen::Index j = 0; j < m; ++j)
      if (scores[j].zero_loss) w[j] = 1.0 / zero_count;
    return WeightVector(std::move(w));
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : scores) best = std::min(best, s.value);
  if (std::isinf(best))
    throw std::invalid_argument("smooth_weights: no finite score");
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    w[j] = std::exp(-(scores[j].value - best) / 2.0);
    total += w[j];
  }
  w /= total;
  return WeightVector(std::move(w));
}

WeightVector ewa_weights(int m_count) {
  if (m_count < 1) throw std::invalid_argument("ewa_weights: need M >= 1");
  return WeightVector(Vector::Constant(m_count, 1.0 / m_count));
}

int select_model(const std::vector<CriterionScore>& scores) {
  if (scores.empty())
    throw std::invalid_argument("select_model: empty score list");
  int best = 0;
  for (int j = 1; j < static_cast<int>(scores.size()); ++j) {
    const bool better =
        (scores[j].zero_loss && !scores[best].zero_loss) ||
        (scores[j].zero_loss == scores[best].zero_loss &&
         scores[j].value < scores[best].value);
    if (better) best = j;
  }
  return best;
}

int select_model(const std::vector<double>& losses) {
  if (losses.empty())
    throw std::invalid_argument("select_model: empty loss list");
  int best = 0;
  for (int j = 1; j < static_cast<int>(losses.size()); ++j)
    if (losses[j] < losses[best]) best = j;
  return best;
}

}  // namespace jcvma
