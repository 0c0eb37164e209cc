#include "qgen/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "qgen/errors.hpp"
#include "qgen/linalg.hpp"

namespace qgen {

void Dataset::validate() const {
  if (features.size() != labels.size()) throw DataError(name + ": feature/label row counts differ");
  for (int y : labels)
    if (y != 1 && y != -1) throw DataError(name + ": labels must be -1 or +1");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw DataError(where + ": cannot parse number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError(where + ": cannot parse integer '" + s + "'");
  return v;
}

struct RawTable {
  Matrix features;
  std::vector<int> classes;
};

// Reads "<n_features floats>,<int class>" rows after checking the header.
RawTable read_labelled_csv(const std::filesystem::path& path, const std::string& expected_header,
                           std::size_t n_features) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty dataset");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) throw DataError(path.string() + ":1: unexpected header");
  RawTable t;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != n_features + 1)
      throw DataError(where + ": expected " + std::to_string(n_features + 1) + " fields, got " +
                      std::to_string(cells.size()));
    std::vector<double> row(n_features);
    for (std::size_t c = 0; c < n_features; ++c) row[c] = parse_double(cells[c], where);
    t.features.push_back(std::move(row));
    t.classes.push_back(parse_int(cells[n_features], where));
  }
  if (t.features.empty()) throw DataError(path.string() + ": empty dataset");
  return t;
}

Dataset binary_subset(std::string name, const RawTable& t, int negative_class, int positive_class) {
  Dataset ds;
  ds.name = std::move(name);
  std::set<int> present;
  for (std::size_t i = 0; i < t.classes.size(); ++i) {
    const int c = t.classes[i];
    if (c != negative_class && c != positive_class) continue;
    present.insert(c);
    ds.features.push_back(t.features[i]);
    ds.labels.push_back(c == positive_class ? +1 : -1);
  }
  if (present.size() < 2)
    throw DataError(ds.name + ": need rows of both class " + std::to_string(negative_class) + " and class " +
                    std::to_string(positive_class));
  return ds;
}

}  // namespace

Dataset load_iris(const std::filesystem::path& path) {
  const RawTable t =
      read_labelled_csv(path, "sepal_length,sepal_width,petal_length,petal_width,class", 4);
  for (std::size_t i = 0; i < t.classes.size(); ++i)
    if (t.classes[i] < 0 || t.classes[i] > 2)
      throw DataError(path.string() + ":" + std::to_string(i + 2) + ": class must be 0, 1 or 2");
  return binary_subset("iris", t, 0, 1);
}

Dataset load_digits(const std::filesystem::path& path) {
  std::string header;
  for (int i = 0; i < 64; ++i) header += "p" + std::to_string(i) + ",";
  header += "label";
  const RawTable t = read_labelled_csv(path, header, 64);
  for (std::size_t i = 0; i < t.features.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    if (t.classes[i] < 0 || t.classes[i] > 9) throw DataError(where + ": label must be in 0..9");
    for (double v : t.features[i])
      if (v < 0.0 || v > 16.0 || v != std::floor(v)) throw DataError(where + ": pixel must be an integer in [0, 16]");
  }
  return binary_subset("digits", t, 0, 1);
}

Matrix PcaModel::transform(const Matrix& rows) const {
  const std::size_t k = projection.empty() ? 0 : projection.front().size();
  Matrix out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != mean.size()) throw std::invalid_argument("PcaModel::transform: column count mismatch");
    std::vector<double> p(k, 0.0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double centred = row[c] - mean[c];
      for (std::size_t j = 0; j < k; ++j) p[j] += centred * projection[c][j];
    }
    out.push_back(std::move(p));
  }
  return out;
}

PcaResult pca_reduce(const Matrix& features, std::size_t k) {
  if (features.empty()) throw std::invalid_argument("pca_reduce: no rows");
  const std::size_t rows = features.size();
  const std::size_t cols = features.front().size();
  if (k < 1 || k > std::min(rows, cols))
    throw std::invalid_argument("pca_reduce: k = " + std::to_string(k) + " exceeds min(rows, cols)");

  PcaModel model;
  model.mean.assign(cols, 0.0);
  for (const auto& r : features) {
    if (r.size() != cols) throw std::invalid_argument("pca_reduce: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) model.mean[c] += r[c];
  }
  for (double& m : model.mean) m /= static_cast<double>(rows);

  std::vector<double> cov(cols * cols, 0.0);
  for (const auto& r : features)
    for (std::size_t a = 0; a < cols; ++a) {
      const double da = r[a] - model.mean[a];
      for (std::size_t b = a; b < cols; ++b) cov[a * cols + b] += da * (r[b] - model.mean[b]);
    }
  const double denom = rows > 1 ? static_cast<double>(rows - 1) : 1.0;
  for (std::size_t a = 0; a < cols; ++a)
    for (std::size_t b = a; b < cols; ++b) {
      cov[a * cols + b] /= denom;
      cov[b * cols + a] = cov[a * cols + b];
    }

  const HermitianEig eig = hermitian_eig(ComplexMatrix::from_real(cols, cols, cov));
  model.projection.assign(cols, std::vector<double>(k, 0.0));
  for (double v : eig.eigenvalues) model.total_variance += std::max(v, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = cols - 1 - j;  // ascending -> descending
    model.explained_variance.push_back(std::max(eig.eigenvalues[src], 0.0));
    std::size_t arg = 0;
    for (std::size_t c = 1; c < cols; ++c)
      if (std::abs(eig.eigenvectors(c, src).real()) > std::abs(eig.eigenvectors(arg, src).real())) arg = c;
    // Real symmetric input: the Jacobi rotations stay real, so imaginary parts are zero.
    const double sign = eig.eigenvectors(arg, src).real() < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < cols; ++c) model.projection[c][j] = sign * eig.eigenvectors(c, src).real();
  }
  PcaResult result{model.transform(features), std::move(model)};
  return result;
}

MinMaxScaler MinMaxScaler::fit(const Matrix& features) {
  MinMaxScaler s;
  if (features.empty()) return s;
  const std::size_t cols = features.front().size();
  s.lo.assign(cols, std::numeric_limits<double>::infinity());
  s.hi.assign(cols, -std::numeric_limits<double>::infinity());
  for (const auto& r : features) {
    if (r.size() != cols) throw std::invalid_argument("MinMaxScaler: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      s.lo[c] = std::min(s.lo[c], r[c]);
      s.hi[c] = std::max(s.hi[c], r[c]);
    }
  }
  return s;
}

Matrix MinMaxScaler::transform(const Matrix& features) const {
  Matrix out = features;
  for (auto& r : out) {
    if (r.size() != lo.size()) throw std::invalid_argument("MinMaxScaler: column count mismatch");
    for (std::size_t c = 0; c < r.size(); ++c) {
      const double span = hi[c] - lo[c];
      r[c] = span > 0.0 ? std::clamp((r[c] - lo[c]) / span, 0.0, 1.0) * std::numbers::pi : 0.0;
    }
  }
  return out;
}

Matrix scale_features(const Matrix& features) { return MinMaxScaler::fit(features).transform(features); }

SplitIndices stratified_split(const std::vector<int>& labels, std::size_t n_train, std::uint64_t seed) {
  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] > 0 ? pos : neg).push_back(i);
  const std::size_t want_pos = n_train - n_train / 2;
  const std::size_t want_neg = n_train / 2;
  if (want_pos > pos.size() || want_neg > neg.size() || n_train >= labels.size())
    throw DataError("stratified_split: cannot draw " + std::to_string(n_train) + " balanced training rows from " +
                    std::to_string(labels.size()) + " and leave a test set");
  std::mt19937_64 rng(seed);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::shuffle(pos.begin(), pos.end(), rng);
  SplitIndices s;
  s.train.insert(s.train.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(want_neg));
  s.train.insert(s.train.end(), pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(want_pos));
  s.test.insert(s.test.end(), neg.begin() + static_cast<std::ptrdiff_t>(want_neg), neg.end());
  s.test.insert(s.test.end(), pos.begin() + static_cast<std::ptrdiff_t>(want_pos), pos.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Batch select_rows(const Matrix& features, const std::vector<int>& labels, const std::vector<std::size_t>& rows) {
  Batch b;
  for (std::size_t r : rows) {
    b.features.push_back(features.at(r));
    b.labels.push_back(labels.at(r));
  }
  return b;
}

}  // namespace qgen
