#include "jcvma/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace jcvma {

std::string format_double(double value) {
  char buffer[40];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return static_cast<int>(c);
  return -1;
}

namespace {

// Split one physical CSV record, honoring quoted fields ("" escapes a
// quote). Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 int row_for_errors) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != std::char_traits<char>::eof()) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty())
        throw ParseError("csv: stray quote inside unquoted field",
                         row_for_errors,
                         static_cast<int>(fields.size()) + 1);
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes)
    throw ParseError("csv: unterminated quoted field", row_for_errors, 0);
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

double parse_cell(const std::string& text, int row, int col) {
  if (text.empty())
    throw ParseError("csv: blank cell", row, col);
  const char* begin = text.data();
  const char* end = begin + text.size();
  // Tolerate surrounding spaces only.
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && *(end - 1) == ' ') --end;
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end)
    throw ParseError("csv: non-numeric cell '" + text + "'", row, col);
  return value;
}

}  // namespace

CsvTable load_csv_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("csv: cannot open " + path);
  CsvTable table;
  std::vector<std::string> fields;
  if (!read_record(in, fields, 1) || fields.empty())
    throw ParseError("csv: empty file", 1, 0);
  table.columns = fields;
  const std::size_t width = table.columns.size();

  std::vector<double> cells;
  int rows = 0;
  int file_row = 1;
  while (read_record(in, fields, file_row + 1)) {
    ++file_row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank
    if (fields.size() != width)
      throw ParseError("csv: row has " + std::to_string(fields.size()) +
                           " cells, expected " + std::to_string(width),
                       file_row, 0);
    for (std::size_t c = 0; c < width; ++c)
      cells.push_back(parse_cell(fields[c], file_row,
                                 static_cast<int>(c) + 1));
    ++rows;
  }
  if (rows == 0) throw ParseError("csv: no data rows", file_row, 0);
  table.values.resize(rows, static_cast<Eigen::Index>(width));
  for (int r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      table.values(r, static_cast<Eigen::Index>(c)) = cells[r * width + c];
  return table;
}

LoadedCsv load_csv(const std::string& path) {
  const CsvTable table = load_csv_table(path);
  LoadedCsv loaded;
  loaded.columns.push_back("(intercept)");
  for (const auto& name : table.columns) loaded.columns.push_back(name);
  loaded.data.x.resize(table.n(), table.values.cols() + 1);
  loaded.data.x.col(0).setOnes();
  loaded.data.x.rightCols(table.values.cols()) = table.values;
  loaded.data.y = Vector::Zero(table.n());
  return loaded;
}

Dataset select_response(const CsvTable& table, const std::string& response,
                        std::vector<std::string>* pool_names) {
  const int r_col = table.column_index(response);
  if (r_col < 0)
    throw MissingColumnError("csv: no column named '" + response + "'");
  Dataset data;
  data.y = table.values.col(r_col);
  data.x.resize(table.n(), table.values.cols());  // constant + K-1 others
  data.x.col(0).setOnes();
  if (pool_names) {
    pool_names->clear();
    pool_names->push_back("(intercept)");
  }
  Eigen::Index out = 1;
  for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
    if (c == r_col) continue;
    data.x.col(out++) = table.values.col(c);
    if (pool_names) pool_names->push_back(table.columns[c]);
  }
  return data;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("csv: cannot write " + path);
  const auto quote = [](const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
      if (c == '"') quoted += "\"\"";
      else quoted.push_back(c);
    }
    quoted += "\"";
    return quoted;
  };
  const auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c) out << ',';
      out << quote(fields[c]);
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  if (!out) throw Error("csv: write failed for " + path);
}

}  // namespace jcvma
