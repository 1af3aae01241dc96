#include "jcvma/fit_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "jcvma/csv.hpp"

namespace jcvma {

namespace {

constexpr const char* kFormatTag = "jcvma-fit/1";

std::string join_doubles(const Vector& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

double parse_double(const std::string& token, int line) {
  double value = 0.0;
  const auto result =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size())
    throw ParseError("fit artifact: bad number '" + token + "'", line);
  return value;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

}  // namespace

void save_fit(const std::string& path, const JcvmaFit& fit,
              const std::vector<std::string>& pool_names) {
  if (static_cast<Eigen::Index>(pool_names.size()) != fit.pool_size)
    throw DimensionError("save_fit: pool names do not match pool size");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("save_fit: cannot write " + path);
  out << "format " << kFormatTag << '\n';
  out << "tau " << format_double(fit.spec.tau) << '\n';
  out << "p " << fit.spec.p << '\n';
  out << "folds " << fit.fold_count << '\n';
  out << "fold_seed " << fit.fold_seed << '\n';
  out << "pool " << fit.pool_size << '\n';
  for (const auto& name : pool_names) out << "column " << name << '\n';
  out << "models " << fit.models.size() << '\n';
  for (const auto& model : fit.models.models) {
    out << "model";
    for (int idx : model.indices) out << ' ' << idx;
    out << '\n';
  }
  for (const auto& coef : fit.fits)
    out << "coef " << join_doubles(coef.values) << '\n';
  out << "weights " << join_doubles(fit.weights.w) << '\n';
  if (fit.averaged_theta)
    out << "averaged " << join_doubles(*fit.averaged_theta) << '\n';
  else
    out << "averaged none\n";
  out << "dropped";
  for (int idx : fit.dropped) out << ' ' << idx;
  out << '\n';
  if (!out) throw Error("save_fit: write failed for " + path);
}

SavedFit load_fit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("fit artifact: cannot open " + path);
  std::string line;
  int line_no = 0;
  const auto next_line = [&](const std::string& expected_key) {
    if (!std::getline(in, line))
      throw ParseError("fit artifact: unexpected end of file", line_no);
    ++line_no;
    if (line.rfind(expected_key + " ", 0) != 0 && line != expected_key)
      throw ParseError("fit artifact: expected '" + expected_key + "' line",
                       line_no);
    return line.size() > expected_key.size()
               ? line.substr(expected_key.size() + 1)
               : std::string();
  };

  if (next_line("format") != kFormatTag)
    throw ParseError("fit artifact: unsupported format tag", line_no);
  const double tau = parse_double(next_line("tau"), line_no);
  const int p = static_cast<int>(parse_double(next_line("p"), line_no));
  const LossSpec spec(tau, p);
  const int folds = static_cast<int>(parse_double(next_line("folds"),
                                                  line_no));
  const std::uint64_t fold_seed =
      static_cast<std::uint64_t>(std::stoull(next_line("fold_seed")));
  const int pool = static_cast<int>(parse_double(next_line("pool"),
                                                 line_no));

  std::vector<std::string> pool_names;
  for (int c = 0; c < pool; ++c) pool_names.push_back(next_line("column"));

  const int m_count =
      static_cast<int>(parse_double(next_line("models"), line_no));
  CandidateSet models;
  for (int m = 0; m < m_count; ++m) {
    CandidateModel model;
    for (const auto& token : split(next_line("model")))
      model.indices.push_back(
          static_cast<int>(parse_double(token, line_no)));
    models.models.push_back(std::move(model));
  }
  models.validate(pool);

  std::vector<Coefficients> fits;
  for (int m = 0; m < m_count; ++m) {
    const auto tokens = split(next_line("coef"));
    if (static_cast<int>(tokens.size()) != models.models[m].size())
      throw ParseError("fit artifact: coefficient count mismatch", line_no);
    Vector values(tokens.size());
    for (std::size_t j = 0; j < tokens.size(); ++j)
      values[static_cast<Eigen::Index>(j)] = parse_double(tokens[j], line_no);
    fits.push_back(Coefficients{std::move(values), models.models[m], spec});
  }

  const auto weight_tokens = split(next_line("weights"));
  if (static_cast<int>(weight_tokens.size()) != m_count)
    throw ParseError("fit artifact: weight count mismatch", line_no);
  Vector w(m_count);
  for (int m = 0; m < m_count; ++m) w[m] = parse_double(weight_tokens[m],
                                                        line_no);

  const std::string averaged_text = next_line("averaged");
  std::optional<Vector> averaged;
  if (averaged_text != "none") {
    const auto tokens = split(averaged_text);
    Vector values(tokens.size());
    for (std::size_t j = 0; j < tokens.size(); ++j)
      values[static_cast<Eigen::Index>(j)] = parse_double(tokens[j], line_no);
    averaged = std::move(values);
  }

  std::vector<int> dropped;
  if (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("dropped", 0) != 0)
      throw ParseError("fit artifact: expected 'dropped' line", line_no);
    for (const auto& token : split(line.substr(7)))
      dropped.push_back(static_cast<int>(parse_double(token, line_no)));
  }

  SavedFit saved{JcvmaFit{spec, std::move(models), std::move(fits),
                          WeightVector(std::move(w)), std::move(averaged),
                          std::move(dropped), folds, fold_seed, pool},
                 std::move(pool_names)};
  return saved;
}

}  // namespace jcvma
