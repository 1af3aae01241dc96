#include "jcvma/simlab.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "jcvma/baselines.hpp"
#include "jcvma/optim.hpp"
#include "jcvma/rng.hpp"
#include "jcvma/stats.hpp"

namespace jcvma {

std::string dgp_name(DgpKind kind) {
  switch (kind) {
    case DgpKind::Dgp1: return "dgp1";
    case DgpKind::Dgp2: return "dgp2";
    case DgpKind::Dgp3: return "dgp3";
    case DgpKind::Design2: return "design2";
  }
  return "?";
}

std::optional<DgpKind> parse_dgp(const std::string& name) {
  if (name == "dgp1") return DgpKind::Dgp1;
  if (name == "dgp2") return DgpKind::Dgp2;
  if (name == "dgp3") return DgpKind::Dgp3;
  if (name == "design2") return DgpKind::Design2;
  return std::nullopt;
}

namespace {

double inverse_square_sum(int from, int to) {
  double total = 0.0;
  for (int j = from; j <= to; ++j)
    total += 1.0 / (static_cast<double>(j) * static_cast<double>(j));
  return total;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
  detail::splitmix64(state);
  return detail::splitmix64(state);
}

// Coefficients of DGP 2: (1,1,1,0,0,1,2,3,1,...,1) over thirty terms.
double dgp2_beta(int j /*1-based*/) {
  switch (j) {
    case 4:
    case 5: return 0.0;
    case 7: return 2.0;
    case 8: return 3.0;
    default: return 1.0;
  }
}

int divergent_model_count(int n) {
  const int m = static_cast<int>(std::floor(5.0 * std::pow(n, 0.2)));
  return std::max(m, 1);
}

struct RowDraw {
  Vector pool;    // covariates entering candidate models (col 0 == 1)
  double mu;
  double sigma;
};

RowDraw draw_row(const DgpSpec& spec, Rng& rng, int pool_size,
                 double tail_sd) {
  RowDraw row;
  row.pool = Vector::Ones(pool_size);
  switch (spec.kind) {
    case DgpKind::Dgp1: {
      for (int c = 1; c < pool_size; ++c) row.pool[c] = rng.normal();
      double signal = 1.0;
      for (int c = 1; c < pool_size; ++c)
        signal += row.pool[c] / static_cast<double>(c + 1);
      signal += tail_sd * rng.normal();  // unmaterialized columns 26..1000
      row.mu = spec.theta * signal;
      row.sigma = 0.0;
      for (int c = 1; c <= 5; ++c) row.sigma += row.pool[c] * row.pool[c];
      break;
    }
    case DgpKind::Dgp2: {
      double signal = dgp2_beta(1);
      row.sigma = 0.0;
      for (int j = 2; j <= 30; ++j) {
        const double x = rng.normal();
        if (j <= pool_size) row.pool[j - 1] = x;
        if (j <= 8) row.sigma += x * x;
        signal += dgp2_beta(j) * x;
      }
      row.mu = spec.theta * signal;
      break;
    }
    case DgpKind::Dgp3: {
      double signal = 1.0;
      row.sigma = 0.01;
      for (int c = 1; c < pool_size; ++c) {
        const double x = rng.normal();
        row.pool[c] = x;
        signal += normal_cdf(x) / static_cast<double>(c + 1);
        if (c <= 10) row.sigma += x * x;
      }
      row.mu = spec.theta * signal;
      break;
    }
    case DgpKind::Design2: {
      for (int c = 1; c < pool_size; ++c) row.pool[c] = rng.normal();
      row.mu = 1.0 + row.pool[1] + row.pool[2] + row.pool[3];
      row.sigma = 1.0;
      break;
    }
  }
  return row;
}

}  // namespace

SimSample generate(const DgpSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: need n >= 1");
  int pool_size = 0;
  double tail_sd = 0.0;
  switch (spec.kind) {
    case DgpKind::Dgp1: {
      pool_size = std::max(divergent_model_count(spec.n), 6);
      tail_sd = std::sqrt(inverse_square_sum(pool_size + 1, 1000));
      break;
    }
    case DgpKind::Dgp2: pool_size = 8; break;
    case DgpKind::Dgp3: pool_size = 25; break;
    case DgpKind::Design2: pool_size = 5; break;
  }

  Rng rng(spec.seed);
  SimSample sample;
  const auto fill = [&](Dataset& data, Vector& mu, Vector& sigma, int rows) {
    data.x.resize(rows, pool_size);
    data.y.resize(rows);
    mu.resize(rows);
    sigma.resize(rows);
    for (int i = 0; i < rows; ++i) {
      const RowDraw row = draw_row(spec, rng, pool_size, tail_sd);
      data.x.row(i) = row.pool;
      mu[i] = row.mu;
      sigma[i] = row.sigma;
      data.y[i] = row.mu + row.sigma * rng.normal();
    }
  };
  fill(sample.train, sample.mu_train, sample.sigma_train, spec.n);
  fill(sample.holdout, sample.mu_holdout, sample.sigma_holdout, spec.holdout);
  return sample;
}

double calibrate_theta(DgpKind kind, double r2) {
  if (!(r2 > 0.0 && r2 < 1.0))
    throw std::invalid_argument("calibrate_theta: R^2 outside (0,1)");
  double signal_var_unit;  // var(mu) at theta = 1
  double noise_var;
  switch (kind) {
    case DgpKind::Dgp1:
      signal_var_unit = inverse_square_sum(2, 1000);
      noise_var = 35.0;  // E[(chi^2_5)^2]
      break;
    case DgpKind::Dgp2:
      signal_var_unit = 38.0;  // sum of squared nonconstant coefficients
      noise_var = 63.0;        // E[(chi^2_7)^2]
      break;
    case DgpKind::Dgp3:
      // Phi(x_j) is uniform, so each term contributes j^{-2}/12.
      signal_var_unit = inverse_square_sum(2, 25) / 12.0;
      noise_var = 120.2001;  // E[(0.01 + chi^2_10)^2]
      break;
    case DgpKind::Design2:
      throw std::invalid_argument(
          "calibrate_theta: design2 has fixed coefficients");
    default:
      throw std::invalid_argument("calibrate_theta: unknown design");
  }
  return std::sqrt(noise_var * r2 / (signal_var_unit * (1.0 - r2)));
}

double irreducible_noise_loss(const LossSpec& spec) {
  static std::map<std::pair<double, int>, double> cache;
  static std::mutex lock;
  {
    std::lock_guard<std::mutex> guard(lock);
    const auto hit = cache.find({spec.tau, spec.p});
    if (hit != cache.end()) return hit->second;
  }
  const double q = spec.p == 1 ? normal_quantile(spec.tau)
                               : normal_expectile(spec.tau);
  Rng rng(0x6a63766d616e6f69ULL);
  constexpr int kDraws = 1000000;
  double total = 0.0;
  for (int i = 0; i < kDraws; ++i) total += rho(spec, rng.normal() - q);
  const double value = total / kDraws;
  std::lock_guard<std::mutex> guard(lock);
  cache[{spec.tau, spec.p}] = value;
  return value;
}

double efpe(const Vector& predictions, const Vector& holdout_y,
            const Vector& holdout_sigma, const LossSpec& spec) {
  if (predictions.size() != holdout_y.size() ||
      holdout_sigma.size() != holdout_y.size())
    throw DimensionError("efpe: holdout sizes disagree");
  const Eigen::Index s = holdout_y.size();
  double loss = 0.0;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < s; ++i) {
    loss += rho(spec, holdout_y[i] - predictions[i]);
    scale += spec.p == 1 ? holdout_sigma[i]
                         : holdout_sigma[i] * holdout_sigma[i];
  }
  const double count = static_cast<double>(s);
  return loss / count - (scale / count) * irreducible_noise_loss(spec);
}

double mse_metric(const Vector& averaged_theta, const Vector& theta0) {
  if (averaged_theta.size() != theta0.size())
    throw DimensionError("mse_metric: coefficient lengths disagree");
  return (averaged_theta - theta0).squaredNorm();
}

double weight_sum_correct(const WeightVector& weights,
                          const std::vector<int>& correct_models) {
  double total = 0.0;
  for (int m : correct_models) {
    if (m < 0 || m >= weights.size())
      throw DimensionError("weight_sum_correct: model index out of range");
    total += weights[m];
  }
  return total;
}

CandidateSet nested_candidates(int m_count) {
  CandidateSet set;
  for (int m = 1; m <= m_count; ++m) {
    CandidateModel model;
    for (int c = 0; c < m; ++c) model.indices.push_back(c);
    set.models.push_back(std::move(model));
  }
  return set;
}

namespace {

// Always-include columns plus every subset of the toggle columns, in
// bitmask order.
CandidateSet toggle_candidates(const std::vector<int>& always,
                               const std::vector<int>& toggles) {
  CandidateSet set;
  const int combos = 1 << toggles.size();
  for (int mask = 0; mask < combos; ++mask) {
    CandidateModel model;
    model.indices = always;
    for (std::size_t b = 0; b < toggles.size(); ++b)
      if (mask & (1 << b)) model.indices.push_back(toggles[b]);
    std::sort(model.indices.begin(), model.indices.end());
    set.models.push_back(std::move(model));
  }
  return set;
}

}  // namespace

CandidateSet dgp_candidates(DgpKind kind, int n) {
  switch (kind) {
    case DgpKind::Dgp1:
      return nested_candidates(divergent_model_count(n));
    case DgpKind::Dgp3:
      return nested_candidates(std::min(divergent_model_count(n), 25));
    case DgpKind::Dgp2:
      return toggle_candidates({0, 1, 2}, {3, 4, 5, 6, 7});
    case DgpKind::Design2:
      return toggle_candidates({0}, {1, 2, 3, 4});
  }
  throw std::invalid_argument("dgp_candidates: unknown design");
}

std::vector<int> design2_correct_models() {
  // Masks over {x2..x5} containing {x2, x3, x4}: 0b0111 and 0b1111.
  return {7, 15};
}

Vector design2_pseudo_true(const LossSpec& spec) {
  Vector theta0(5);
  const double q = spec.p == 1 ? normal_quantile(spec.tau)
                               : normal_expectile(spec.tau);
  theta0 << 1.0 + q, 1.0, 1.0, 1.0, 0.0;
  return theta0;
}

std::string method_name(Method method) {
  switch (method) {
    case Method::Jcvma5: return "jcvma5";
    case Method::Jcvma10: return "jcvma10";
    case Method::Saic: return "saic";
    case Method::Sbic: return "sbic";
    case Method::Ewa: return "ewa";
    case Method::AicSelect: return "aic";
    case Method::BicSelect: return "bic";
    case Method::Cv5Select: return "cv5";
    case Method::Cv10Select: return "cv10";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m :
       {Method::Jcvma5, Method::Jcvma10, Method::Saic, Method::Sbic,
        Method::Ewa, Method::AicSelect, Method::BicSelect, Method::Cv5Select,
        Method::Cv10Select})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

namespace {

struct RepArtifacts {
  SimSample sample;
  CandidateSet candidates;
  std::vector<Coefficients> fits;  // full-data fit per model
  Matrix holdout_predictions;      // holdout x M
  std::map<int, Matrix> cv_cache;  // J -> prediction matrix
  std::uint64_t rep_seed = 0;
};

const Matrix& cv_matrix(RepArtifacts& rep, const LossSpec& spec, int folds) {
  auto hit = rep.cv_cache.find(folds);
  if (hit != rep.cv_cache.end()) return hit->second;
  const FoldPlan plan =
      make_folds(static_cast<int>(rep.sample.train.n()), folds,
                 mix_seed(rep.rep_seed, 1000 + folds));
  CvPredictionMatrix cvm =
      cv_predictions(rep.sample.train, rep.candidates, spec, plan);
  return rep.cv_cache.emplace(folds, std::move(cvm.f)).first->second;
}

WeightVector method_weights(RepArtifacts& rep, const LossSpec& spec,
                            Method method) {
  const int m_count = rep.candidates.size();
  const auto ic_scores = [&](CriterionKind kind) {
    std::vector<CriterionScore> scores;
    scores.reserve(m_count);
    for (int m = 0; m < m_count; ++m)
      scores.push_back(info_criterion(rep.sample.train, rep.fits[m], m, kind));
    return scores;
  };
  const auto vertex = [&](int m) {
    Vector w = Vector::Zero(m_count);
    w[m] = 1.0;
    return WeightVector(std::move(w));
  };
  const auto cv_losses = [&](int folds) {
    const Matrix& f = cv_matrix(rep, spec, folds);
    std::vector<double> losses(m_count);
    for (int m = 0; m < m_count; ++m)
      losses[m] = jcv_criterion(f, rep.sample.train.y, vertex(m), spec);
    return losses;
  };

  switch (method) {
    case Method::Jcvma5:
      return select_weights(cv_matrix(rep, spec, 5), rep.sample.train.y,
                            spec);
    case Method::Jcvma10:
      return select_weights(cv_matrix(rep, spec, 10), rep.sample.train.y,
                            spec);
    case Method::Saic: return smooth_weights(ic_scores(CriterionKind::Aic));
    case Method::Sbic: return smooth_weights(ic_scores(CriterionKind::Bic));
    case Method::Ewa: return ewa_weights(m_count);
    case Method::AicSelect:
      return vertex(select_model(ic_scores(CriterionKind::Aic)));
    case Method::BicSelect:
      return vertex(select_model(ic_scores(CriterionKind::Bic)));
    case Method::Cv5Select: return vertex(select_model(cv_losses(5)));
    case Method::Cv10Select: return vertex(select_model(cv_losses(10)));
  }
  throw std::invalid_argument("method_weights: unknown method");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.replications < 1)
    throw std::invalid_argument("run_experiment: need R >= 1");
  if (config.n_values.empty() || config.specs.empty() ||
      config.methods.empty())
    throw std::invalid_argument("run_experiment: empty grid");
  const bool correct_design = config.dgp == DgpKind::Design2;
  std::vector<double> r2_grid = config.r2_values;
  if (correct_design || r2_grid.empty())
    r2_grid = {std::numeric_limits<double>::quiet_NaN()};

  ExperimentReport report;
  report.config = config;

  for (std::size_t n_idx = 0; n_idx < config.n_values.size(); ++n_idx) {
    const int n = config.n_values[n_idx];
    for (std::size_t r_idx = 0; r_idx < r2_grid.size(); ++r_idx) {
      const double r2 = r2_grid[r_idx];
      const double theta =
          correct_design ? 0.0 : calibrate_theta(config.dgp, r2);
      for (std::size_t s_idx = 0; s_idx < config.specs.size(); ++s_idx) {
        const LossSpec spec = config.specs[s_idx];

        const int m_count = dgp_candidates(config.dgp, n).size();
        std::map<Method, std::vector<double>> efpe_values, mse_values,
            weight_values;
        std::map<Method, std::vector<std::string>> failures;
        Vector single_efpe_totals = Vector::Zero(m_count);
        Eigen::VectorXi single_efpe_counts = Eigen::VectorXi::Zero(m_count);

        for (int rep = 0; rep < config.replications; ++rep) {
          const std::uint64_t rep_seed = mix_seed(
              config.seed,
              ((n_idx * 97 + r_idx) * 97 + s_idx) * 1000003ULL + rep);
          RepArtifacts artifacts;
          try {
            artifacts.rep_seed = rep_seed;
            artifacts.sample = generate(DgpSpec{config.dgp, n, theta,
                                                rep_seed, config.holdout});
            artifacts.candidates = dgp_candidates(config.dgp, n);
            for (int m = 0; m < artifacts.candidates.size(); ++m)
              artifacts.fits.push_back(fit(artifacts.sample.train,
                                           artifacts.candidates.models[m],
                                           spec));
            const Eigen::Index holdout_n = artifacts.sample.holdout.n();
            artifacts.holdout_predictions.resize(holdout_n,
                                                 artifacts.candidates.size());
            for (int m = 0; m < artifacts.candidates.size(); ++m)
              for (Eigen::Index i = 0; i < holdout_n; ++i)
                artifacts.holdout_predictions(i, m) =
                    artifacts.fits[m].predict(
                        artifacts.sample.holdout.x.row(i).transpose());
          } catch (const std::exception& e) {
            const std::string note =
                "rep " + std::to_string(rep) + ": " + e.what();
            for (Method method : config.methods)
              failures[method].push_back(note);
            continue;
          }

          if (!correct_design) {
            for (int m = 0; m < m_count; ++m) {
              single_efpe_totals[m] +=
                  efpe(artifacts.holdout_predictions.col(m),
                       artifacts.sample.holdout.y,
                       artifacts.sample.sigma_holdout, spec);
              single_efpe_counts[m] += 1;
            }
          }

          for (Method method : config.methods) {
            try {
              const WeightVector w = method_weights(artifacts, spec, method);
              if (correct_design) {
                const int kbar = artifacts.candidates.kbar();
                Vector averaged = Vector::Zero(kbar);
                for (int m = 0; m < m_count; ++m)
                  averaged +=
                      w[m] * embed_coefficients(artifacts.fits[m], kbar);
                mse_values[method].push_back(
                    mse_metric(averaged, design2_pseudo_true(spec)));
                weight_values[method].push_back(
                    weight_sum_correct(w, design2_correct_models()));
              } else {
                const Vector predictions =
                    artifacts.holdout_predictions * w.w;
                efpe_values[method].push_back(
                    efpe(predictions, artifacts.sample.holdout.y,
                         artifacts.sample.sigma_holdout, spec));
              }
            } catch (const std::exception& e) {
              failures[method].push_back("rep " + std::to_string(rep) +
                                         ": " + e.what());
            }
          }
        }

        const auto mean_of = [](const std::vector<double>& v) {
          if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
          double total = 0.0;
          for (double x : v) total += x;
          return total / static_cast<double>(v.size());
        };

        double normalizer = std::numeric_limits<double>::quiet_NaN();
        if (!correct_design) {
          for (int m = 0; m < m_count; ++m) {
            if (single_efpe_counts[m] == 0) continue;
            const double mean_m =
                single_efpe_totals[m] / single_efpe_counts[m];
            if (std::isnan(normalizer) || mean_m < normalizer)
              normalizer = mean_m;
          }
        }

        const auto push_cell = [&](Method method, const std::string& metric,
                                   std::vector<double> values, double mean,
                                   double norm) {
          ExperimentCell cell;
          cell.method = method_name(method);
          cell.metric = metric;
          cell.dgp = config.dgp;
          cell.n = n;
          cell.r2 = r2;
          cell.tau = spec.tau;
          cell.p = spec.p;
          cell.values = std::move(values);
          cell.mean = mean;
          cell.normalizer = norm;
          cell.failures = failures[method];
          report.cells.push_back(std::move(cell));
        };

        for (Method method : config.methods) {
          if (correct_design) {
            const double mse_mean = mean_of(mse_values[method]);
            push_cell(method, "mse", mse_values[method], mse_mean, 0.0);
            const double ws_mean = mean_of(weight_values[method]);
            push_cell(method, "weight_sum", weight_values[method], ws_mean,
                      0.0);
          } else {
            const double efpe_mean = mean_of(efpe_values[method]);
            push_cell(method, "efpe", efpe_values[method], efpe_mean, 0.0);
            push_cell(method, "normalized_efpe", {}, efpe_mean / normalizer,
                      normalizer);
          }
        }
      }
    }
  }
  return report;
}

}  // namespace jcvma
