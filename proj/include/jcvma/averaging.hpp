#ifndef JCVMA_AVERAGING_HPP
#define JCVMA_AVERAGING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "jcvma/data.hpp"
#include "jcvma/loss.hpp"
#include "jcvma/regress.hpp"

namespace jcvma {

/// Partition of {0..n-1} into J groups: a seeded permutation sliced into
/// consecutive blocks. The first J-1 groups hold floor(n/J) observations,
/// the last group holds the remainder n - (J-1)*floor(n/J).
struct FoldPlan {
  int fold_count;
  std::vector<int> assignment;  // per-observation group id in [0, J)
  std::uint64_t seed;

  std::vector<std::vector<int>> groups() const;
};

FoldPlan make_folds(int n, int fold_count, std::uint64_t seed);

/// n x M matrix of held-out predictions: entry (i, m) is model m's
/// prediction for observation i from the fit that excluded i's group.
struct CvPredictionMatrix {
  Matrix f;
  FoldPlan plan;
  LossSpec spec;
};

/// Fits every (model, excluded-group) pair and assembles the prediction
/// matrix row-aligned with `data`. A rank-deficient subproblem throws
/// RankDeficientError tagged with the model and group indices.
CvPredictionMatrix cv_predictions(const Dataset& data,
                                  const CandidateSet& models,
                                  const LossSpec& spec, const FoldPlan& plan);

/// The J-fold cross-validation criterion (1/n) sum_i rho(y_i - F_i. w).
double jcv_criterion(const CvPredictionMatrix& cv, const Vector& y,
                     const WeightVector& w);
double jcv_criterion(const Matrix& f, const Vector& y, const WeightVector& w,
                     const LossSpec& spec);

/// Criterion-minimizing weights over the simplex; dispatches to the exact
/// LP (p=1) or the projected-gradient QP (p=2).
WeightVector select_weights(const Matrix& f, const Vector& y,
                            const LossSpec& spec);

/// Scatter a model's coefficients into the first `kbar` pool coordinates
/// (zeros elsewhere). Throws if a model index falls outside [0, kbar).
Vector embed_coefficients(const Coefficients& theta, int kbar);

/// Full averaging result: per-model full-data fits, selected weights, and
/// (when every surviving model lives inside the first kbar pool columns)
/// the averaged coefficient vector.
struct JcvmaFit {
  LossSpec spec;
  CandidateSet models;               // surviving models
  std::vector<Coefficients> fits;    // aligned with `models`
  WeightVector weights;              // aligned with `models`
  std::optional<Vector> averaged_theta;  // length kbar when representable
  std::vector<int> dropped;          // original indices removed for rank
                                     // deficiency, reported to the caller
  int fold_count;
  std::uint64_t fold_seed;
  Eigen::Index pool_size;

  /// Averaged prediction for a pool-length covariate row (first entry 1).
  double predict(const Vector& xnew) const;
};

/// The whole procedure: folds, held-out fits, criterion minimization,
/// full-data fits, averaged coefficients. Models whose design goes rank
/// deficient on any group or on the full data are dropped from the
/// candidate set for the run and reported through `dropped`.
JcvmaFit fit_jcvma(const Dataset& data, const CandidateSet& models,
                   const LossSpec& spec, int fold_count = 5,
                   std::uint64_t seed = 0);

}  // namespace jcvma

#endif  // JCVMA_AVERAGING_HPP
