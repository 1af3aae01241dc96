#ifndef JCVMA_CSV_HPP
#define JCVMA_CSV_HPP

#include <string>
#include <vector>

#include "jcvma/data.hpp"

namespace jcvma {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Raw rectangular table: header row plus numeric cells.
struct CsvTable {
  std::vector<std::string> columns;
  Matrix values;  // n x columns.size()

  Eigen::Index n() const { return values.rows(); }
  int column_index(const std::string& name) const;  // -1 when absent
};

/// Parse an RFC-4180-style CSV with a header row and numeric cells.
/// Throws ParseError naming the 1-based row/column of the offending cell.
CsvTable load_csv_table(const std::string& path);

/// Loaded dataset view of a CSV: x is the table with a constant column
/// prepended (so K = 1 + file columns) and y is all zeros until a response
/// column is selected.
struct LoadedCsv {
  Dataset data;
  std::vector<std::string> columns;  // pool names; index 0 is "(intercept)"
};

LoadedCsv load_csv(const std::string& path);

/// Dataset with y taken from `response` and x holding the constant column
/// plus every other table column. Throws MissingColumnError.
Dataset select_response(const CsvTable& table, const std::string& response,
                        std::vector<std::string>* pool_names = nullptr);

/// Write rows of preformatted cells with RFC-4180 quoting.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace jcvma

#endif  // JCVMA_CSV_HPP
