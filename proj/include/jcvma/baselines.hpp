#ifndef JCVMA_BASELINES_HPP
#define JCVMA_BASELINES_HPP

#include <vector>

#include "jcvma/data.hpp"
#include "jcvma/loss.hpp"
#include "jcvma/regress.hpp"

namespace jcvma {

enum class CriterionKind { Aic, Bic, Jcv };

/// One model's information-criterion (or cross-validation) score. A perfect
/// in-sample fit makes the log term -infinity; such scores are flagged
/// `zero_loss` and win every comparison.
struct CriterionScore {
  int model;
  CriterionKind kind;
  double value;
  bool zero_loss = false;
};

/// AIC_m = (2/p) n ln[(1/n) sum rho(residuals)] + 2 k_m; BIC replaces the
/// penalty with k_m ln(n). Residuals come from the model's full-data fit
/// under the same loss. Natural logarithm throughout.
CriterionScore info_criterion(const Dataset& data, const CandidateModel& model,
                              const LossSpec& spec, CriterionKind kind);

/// Same, reusing an already-computed full-data fit.
CriterionScore info_criterion(const Dataset& data, const Coefficients& fitted,
                              int model_index, CriterionKind kind);

/// Smoothed IC weights: w_m proportional to exp(-score_m / 2), evaluated
/// with max-subtraction. zero_loss scores take all the weight, split
/// equally among themselves.
WeightVector smooth_weights(const std::vector<CriterionScore>& scores);

/// Equal weights 1/M.
WeightVector ewa_weights(int m_count);

/// Index of the best (smallest) score; zero_loss wins; ties break to the
/// smallest model index.
int select_model(const std::vector<CriterionScore>& scores);

/// Same rule on raw per-model losses (cross-validation selection).
int select_model(const std::vector<double>& losses);

}  // namespace jcvma

#endif  // JCVMA_BASELINES_HPP
