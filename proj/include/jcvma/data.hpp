#ifndef JCVMA_DATA_HPP
#define JCVMA_DATA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "jcvma/errors.hpp"
#include "jcvma/loss.hpp"

namespace jcvma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Regression sample: full regressor pool x (n x K, column 0 identically 1)
/// and response y (length n). Candidate models select pool columns.
struct Dataset {
  Matrix x;
  Vector y;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index pool_size() const { return x.cols(); }

  void validate() const {
    if (x.rows() < 1 || x.cols() < 1)
      throw DimensionError("Dataset: need n >= 1 and K >= 1");
    if (y.size() != x.rows())
      throw DimensionError("Dataset: y length does not match x rows");
    if (!x.allFinite() || !y.allFinite())
      throw std::invalid_argument("Dataset: non-finite entries");
    if ((x.col(0).array() != 1.0).any())
      throw std::invalid_argument("Dataset: column 0 must be identically 1");
  }
};

/// One candidate model: 0-based pool column indices, strictly increasing.
struct CandidateModel {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }

  void validate(int pool_size) const {
    if (indices.empty())
      throw std::invalid_argument("CandidateModel: empty index list");
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (indices[j] < 0 || indices[j] >= pool_size)
        throw std::invalid_argument("CandidateModel: index out of pool range");
      if (j > 0 && indices[j] <= indices[j - 1])
        throw std::invalid_argument(
            "CandidateModel: indices must be strictly increasing");
    }
  }

  /// Columns of `pool` this model regresses on, in model order.
  Matrix submatrix(const Matrix& pool) const {
    Matrix sub(pool.rows(), indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j)
      sub.col(j) = pool.col(indices[j]);
    return sub;
  }

  /// Restriction of a pool-length row to this model's coordinates.
  Vector restrict(const Vector& xrow) const {
    Vector out(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) out[j] = xrow[indices[j]];
    return out;
  }

  bool operator==(const CandidateModel& other) const {
    return indices == other.indices;
  }
};

/// Fitted coefficient vector for one candidate model.
struct Coefficients {
  Vector values;
  CandidateModel model;
  LossSpec spec;

  double predict(const Vector& xrow) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < model.indices.size(); ++j)
      acc += values[j] * xrow[model.indices[j]];
    return acc;
  }
};

/// The M candidate models entering the averaging step. Duplicates are legal
/// but flagged so front ends can warn.
struct CandidateSet {
  std::vector<CandidateModel> models;

  int size() const { return static_cast<int>(models.size()); }

  /// kbar = max_m k_m.
  int kbar() const {
    int k = 0;
    for (const auto& m : models) k = std::max(k, m.size());
    return k;
  }

  void validate(int pool_size) const {
    if (models.empty())
      throw std::invalid_argument("CandidateSet: need at least one model");
    for (const auto& m : models) m.validate(pool_size);
  }

  bool has_duplicates() const {
    for (std::size_t a = 0; a < models.size(); ++a)
      for (std::size_t b = a + 1; b < models.size(); ++b)
        if (models[a] == models[b]) return true;
    return false;
  }
};

/// Point on the M-simplex: entries in [0,1] summing to 1 within 1e-10.
struct WeightVector {
  Vector w;

  explicit WeightVector(Vector values) : w(std::move(values)) {
    if (w.size() < 1)
      throw DimensionError("WeightVector: need at least one entry");
    for (Eigen::Index m = 0; m < w.size(); ++m)
      if (!(w[m] >= 0.0 && w[m] <= 1.0))
        throw std::invalid_argument("WeightVector: entry outside [0,1]");
    if (std::abs(w.sum() - 1.0) > 1e-10)
      throw std::invalid_argument("WeightVector: entries must sum to 1");
  }

  Eigen::Index size() const { return w.size(); }
  double operator[](Eigen::Index m) const { return w[m]; }
};

}  // namespace jcvma

#endif  // JCVMA_DATA_HPP
