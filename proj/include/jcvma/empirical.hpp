#ifndef JCVMA_EMPIRICAL_HPP
#define JCVMA_EMPIRICAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jcvma/data.hpp"
#include "jcvma/loss.hpp"

namespace jcvma {

enum class OrderingRule { Correlation, Pvalue, AsGiven };
enum class CandidateShape { Nested, SubsetToggle };

std::string ordering_name(OrderingRule rule);
std::optional<OrderingRule> parse_ordering(const std::string& name);

/// Ranking of the predictor pool columns (indices >= 1; the intercept is
/// excluded). `score` is |correlation| or the p-value of the ranked column.
/// Columns with undefined correlation (zero variance) are appended last in
/// original order and listed in `constant_columns` so callers can warn.
struct ColumnOrdering {
  std::vector<int> order;
  std::vector<double> score;
  std::vector<int> constant_columns;
};

/// Descending |Pearson correlation| with the response; ties keep the
/// original column order.
ColumnOrdering order_by_correlation(const Dataset& data);

/// Ascending two-sided t-test p-value from the full-model least-squares
/// fit with classical homoskedastic standard errors. Throws
/// RankDeficientError when the full design is singular or n <= K.
ColumnOrdering order_by_pvalue(const Dataset& data);

/// Nested chain over an ordering: {always}, {always, v1}, {always, v1, v2},
/// ... The intercept column 0 and the always-include columns enter every
/// model.
CandidateSet build_nested(const std::vector<int>& ordered,
                          const std::vector<int>& always_include = {});

/// Always-include columns plus every subset of `toggles` (2^t models, mask
/// order). Capped at 4096 models.
CandidateSet build_toggle(const std::vector<int>& toggles,
                          const std::vector<int>& always_include = {});

struct EmpiricalConfig {
  std::string input_path;
  std::string response;
  std::vector<std::string> always_include;
  OrderingRule ordering = OrderingRule::Correlation;
  CandidateShape shape = CandidateShape::Nested;
  LossSpec spec{0.5, 2};
  int folds = 5;
  int train_size = 100;  // n1
  int replications = 100;
  std::uint64_t seed = 1;
};

struct EmpiricalMethodResult {
  std::string method;
  double mean_fpe;
  double relative_fpe;  // mean FPE divided by the largest model's mean FPE
};

struct EmpiricalReport {
  std::vector<EmpiricalMethodResult> methods;
  std::vector<int> column_order;       // ranked pool indices
  std::vector<double> column_scores;   // ranking scores
  std::vector<std::string> pool_names;
  std::vector<std::string> failures;   // per-replication failure notes
  int replications;
};

/// The Design I / Design II evaluation: rank variables once on the full
/// sample, then repeatedly split into train (n1) / validation, run
/// JCVMA (J = config.folds), SAIC, SBIC, EWA, and the largest single
/// model, and report each method's validation FPE relative to the largest
/// model's.
EmpiricalReport evaluate_empirical(const EmpiricalConfig& config);

}  // namespace jcvma

#endif  // JCVMA_EMPIRICAL_HPP
