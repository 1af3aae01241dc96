#ifndef JCVMA_ERRORS_HPP
#define JCVMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jcvma {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Design submatrix has column rank < k at the working tolerance.
/// `model` and `fold` are 0-based indices when known, -1 otherwise.
class RankDeficientError : public Error {
 public:
  int model;
  int fold;
  explicit RankDeficientError(const std::string& what, int model_idx = -1,
                              int fold_idx = -1)
      : Error(what), model(model_idx), fold(fold_idx) {}
};

/// An iterative solver hit its iteration cap before meeting tolerance.
class NotConvergedError : public Error {
 public:
  using Error::Error;
};

/// Linear program has an empty feasible region.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Linear program is unbounded below.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// Simplex iteration cap tripped; unreachable with Bland's rule unless the
/// problem data is numerically pathological.
class CycleGuardError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Row/column are 1-based positions in the file,
/// 0 when not applicable.
class ParseError : public Error {
 public:
  int row;
  int column;
  explicit ParseError(const std::string& what, int row_pos = 0,
                      int column_pos = 0)
      : Error(what), row(row_pos), column(column_pos) {}
};

/// A named column is absent from the input table.
class MissingColumnError : public Error {
 public:
  using Error::Error;
};

/// Shapes of two arguments do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace jcvma

#endif  // JCVMA_ERRORS_HPP
