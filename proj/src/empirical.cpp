#include "jcvma/empirical.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "jcvma/averaging.hpp"
#include "jcvma/baselines.hpp"
#include "jcvma/csv.hpp"
#include "jcvma/optim.hpp"
#include "jcvma/regress.hpp"
#include "jcvma/rng.hpp"
#include "jcvma/stats.hpp"

namespace jcvma {

std::string ordering_name(OrderingRule rule) {
  switch (rule) {
    case OrderingRule::Correlation: return "correlation";
    case OrderingRule::Pvalue: return "pvalue";
    case OrderingRule::AsGiven: return "given";
  }
  return "?";
}

std::optional<OrderingRule> parse_ordering(const std::string& name) {
  if (name == "correlation") return OrderingRule::Correlation;
  if (name == "pvalue") return OrderingRule::Pvalue;
  if (name == "given") return OrderingRule::AsGiven;
  return std::nullopt;
}

ColumnOrdering order_by_correlation(const Dataset& data) {
  data.validate();
  const Eigen::Index n = data.n();
  if (n < 2)
    throw std::invalid_argument("order_by_correlation: need n >= 2");
  const double y_mean = data.y.mean();
  const Vector yc = data.y.array() - y_mean;
  const double y_ss = yc.squaredNorm();

  ColumnOrdering ordering;
  std::vector<std::pair<double, int>> ranked;  // (-|corr|, column)
  for (Eigen::Index c = 1; c < data.pool_size(); ++c) {
    const Vector xc = data.x.col(c).array() - data.x.col(c).mean();
    const double x_ss = xc.squaredNorm();
    if (x_ss <= 0.0 || y_ss <= 0.0) {
      ordering.constant_columns.push_back(static_cast<int>(c));
      continue;
    }
    const double corr = xc.dot(yc) / std::sqrt(x_ss * y_ss);
    ranked.emplace_back(-std::abs(corr), static_cast<int>(c));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.first < b.first;
                   });
  for (const auto& [neg_corr, col] : ranked) {
    ordering.order.push_back(col);
    ordering.score.push_back(-neg_corr);
  }
  for (int col : ordering.constant_columns) {
    ordering.order.push_back(col);
    ordering.score.push_back(0.0);
  }
  return ordering;
}

ColumnOrdering order_by_pvalue(const Dataset& data) {
  data.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index k = data.pool_size();
  if (n <= k)
    throw RankDeficientError("order_by_pvalue: need n > K for the full fit");
  Eigen::JacobiSVD<Matrix> svd(data.x);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 1e-10 * sv[0])
    throw RankDeficientError("order_by_pvalue: full design is singular");

  const Matrix gram_inv =
      (data.x.transpose() * data.x).ldlt().solve(Matrix::Identity(k, k));
  const Vector beta = gram_inv * (data.x.transpose() * data.y);
  const double rss = (data.y - data.x * beta).squaredNorm();
  const double sigma2 = rss / static_cast<double>(n - k);

  ColumnOrdering ordering;
  std::vector<std::pair<double, int>> ranked;  // (p-value, column)
  for (Eigen::Index c = 1; c < k; ++c) {
    const double se = std::sqrt(sigma2 * gram_inv(c, c));
    const double t = se > 0.0 ? beta[c] / se
                              : std::numeric_limits<double>::infinity();
    ranked.emplace_back(student_t_pvalue(t, static_cast<double>(n - k)),
                        static_cast<int>(c));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.first < b.first;
                   });
  for (const auto& [p, col] : ranked) {
    ordering.order.push_back(col);
    ordering.score.push_back(p);
  }
  return ordering;
}

namespace {

std::vector<int> with_intercept(const std::vector<int>& always) {
  std::vector<int> base = always;
  base.push_back(0);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  return base;
}

}  // namespace

CandidateSet build_nested(const std::vector<int>& ordered,
                          const std::vector<int>& always_include) {
  const std::vector<int> base = with_intercept(always_include);
  CandidateSet set;
  for (std::size_t take = 0; take <= ordered.size(); ++take) {
    CandidateModel model;
    model.indices = base;
    for (std::size_t j = 0; j < take; ++j) {
      if (std::find(base.begin(), base.end(), ordered[j]) == base.end())
        model.indices.push_back(ordered[j]);
    }
    std::sort(model.indices.begin(), model.indices.end());
    if (!set.models.empty() && set.models.back() == model) continue;
    set.models.push_back(std::move(model));
  }
  return set;
}

CandidateSet build_toggle(const std::vector<int>& toggles,
                          const std::vector<int>& always_include) {
  if (toggles.size() > 12)
    throw std::invalid_argument(
        "build_toggle: more than 12 toggle columns (4096-model cap)");
  const std::vector<int> base = with_intercept(always_include);
  CandidateSet set;
  const int combos = 1 << toggles.size();
  for (int mask = 0; mask < combos; ++mask) {
    CandidateModel model;
    model.indices = base;
    for (std::size_t b = 0; b < toggles.size(); ++b)
      if (mask & (1 << b)) model.indices.push_back(toggles[b]);
    std::sort(model.indices.begin(), model.indices.end());
    model.indices.erase(
        std::unique(model.indices.begin(), model.indices.end()),
        model.indices.end());
    set.models.push_back(std::move(model));
  }
  return set;
}

EmpiricalReport evaluate_empirical(const EmpiricalConfig& config) {
  const CsvTable table = load_csv_table(config.input_path);
  std::vector<std::string> pool_names;
  const Dataset full = select_response(table, config.response, &pool_names);
  const Eigen::Index n = full.n();
  if (!(config.train_size > 0 && config.train_size < n))
    throw std::invalid_argument("evaluate_empirical: need 0 < n1 < n");
  if (config.replications < 1)
    throw std::invalid_argument("evaluate_empirical: need R >= 1");

  std::vector<int> always;
  for (const auto& name : config.always_include) {
    bool found = false;
    for (std::size_t c = 0; c < pool_names.size(); ++c) {
      if (pool_names[c] == name) {
        always.push_back(static_cast<int>(c));
        found = true;
        break;
      }
    }
    if (!found)
      throw MissingColumnError("evaluate_empirical: no column '" + name +
                               "'");
  }

  ColumnOrdering ordering;
  switch (config.ordering) {
    case OrderingRule::Correlation:
      ordering = order_by_correlation(full);
      break;
    case OrderingRule::Pvalue:
      ordering = order_by_pvalue(full);
      break;
    case OrderingRule::AsGiven:
      for (Eigen::Index c = 1; c < full.pool_size(); ++c) {
        ordering.order.push_back(static_cast<int>(c));
        ordering.score.push_back(0.0);
      }
      break;
  }
  std::vector<int> ranked;
  const std::set<int> always_set(always.begin(), always.end());
  for (int col : ordering.order)
    if (!always_set.count(col)) ranked.push_back(col);

  const CandidateSet candidates =
      config.shape == CandidateShape::Nested
          ? build_nested(ranked, always)
          : build_toggle(ranked, always);
  int largest = 0;
  for (int m = 1; m < candidates.size(); ++m)
    if (candidates.models[m].size() >
        candidates.models[largest].size())
      largest = m;

  const std::vector<std::string> method_names = {"jcvma" +
                                                     std::to_string(
                                                         config.folds),
                                                 "saic", "sbic", "ewa",
                                                 "largest"};
  std::vector<double> fpe_totals(method_names.size(), 0.0);
  std::vector<int> fpe_counts(method_names.size(), 0);
  EmpiricalReport report;
  report.replications = config.replications;
  report.column_order = ordering.order;
  report.column_scores = ordering.score;
  report.pool_names = pool_names;

  const Rng base(config.seed);
  std::vector<int> rows(n);
  for (int rep = 0; rep < config.replications; ++rep) {
    std::iota(rows.begin(), rows.end(), 0);
    Rng stream = base.substream(static_cast<std::uint64_t>(rep));
    stream.shuffle(rows);
    std::vector<int> train_rows(rows.begin(), rows.begin() + config.train_size);
    std::vector<int> valid_rows(rows.begin() + config.train_size, rows.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(valid_rows.begin(), valid_rows.end());

    Dataset train;
    train.x.resize(train_rows.size(), full.pool_size());
    train.y.resize(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      train.x.row(i) = full.x.row(train_rows[i]);
      train.y[i] = full.y[train_rows[i]];
    }

    try {
      // Shared full-data (train) fits.
      std::vector<Coefficients> fits;
      fits.reserve(candidates.models.size());
      for (const auto& model : candidates.models)
        fits.push_back(fit(train, model, config.spec));

      const FoldPlan plan = make_folds(
          static_cast<int>(train.n()), config.folds,
          base.substream(0x464f4c44ULL + rep).seed());
      const CvPredictionMatrix cvm =
          cv_predictions(train, candidates, config.spec, plan);

      std::vector<WeightVector> weights;
      weights.push_back(select_weights(cvm.f, train.y, config.spec));
      std::vector<CriterionScore> aic, bic;
      for (int m = 0; m < candidates.size(); ++m) {
        aic.push_back(info_criterion(train, fits[m], m, CriterionKind::Aic));
        bic.push_back(info_criterion(train, fits[m], m, CriterionKind::Bic));
      }
      weights.push_back(smooth_weights(aic));
      weights.push_back(smooth_weights(bic));
      weights.push_back(ewa_weights(candidates.size()));
      Vector largest_w = Vector::Zero(candidates.size());
      largest_w[largest] = 1.0;
      weights.push_back(WeightVector(std::move(largest_w)));

      for (std::size_t method = 0; method < weights.size(); ++method) {
        double loss = 0.0;
        for (int row : valid_rows) {
          double prediction = 0.0;
          for (int m = 0; m < candidates.size(); ++m)
            prediction += weights[method][m] *
                          fits[m].predict(full.x.row(row).transpose());
          loss += rho(config.spec, full.y[row] - prediction);
        }
        fpe_totals[method] += loss / static_cast<double>(valid_rows.size());
        fpe_counts[method] += 1;
      }
    } catch (const std::exception& e) {
      report.failures.push_back("rep " + std::to_string(rep) + ": " +
                                e.what());
    }
  }

  const double largest_mean =
      fpe_counts[4] > 0 ? fpe_totals[4] / fpe_counts[4]
                        : std::numeric_limits<double>::quiet_NaN();
  for (std::size_t method = 0; method < method_names.size(); ++method) {
    const double mean = fpe_counts[method] > 0
                            ? fpe_totals[method] / fpe_counts[method]
                            : std::numeric_limits<double>::quiet_NaN();
    report.methods.push_back(
        EmpiricalMethodResult{method_names[method], mean,
                              mean / largest_mean});
  }
  return report;
}

}  // namespace jcvma
