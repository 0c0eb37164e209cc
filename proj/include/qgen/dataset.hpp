#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qgen/training.hpp"

namespace qgen {

using Matrix = std::vector<std::vector<double>>;

struct Dataset {
  std::string name;
  Matrix features;
  std::vector<int> labels;  // -1 / +1

  std::size_t size() const { return labels.size(); }
  void validate() const;
};

/// Iris CSV, classes 0 and 1 only (mapped to -1 and +1).
Dataset load_iris(const std::filesystem::path& path);

/// 8x8 digits CSV, labels 0 and 1 only (mapped to -1 and +1), 64 raw pixels.
Dataset load_digits(const std::filesystem::path& path);

struct PcaModel {
  Matrix projection;          // cols x k, orthonormal columns
  std::vector<double> mean;   // column means of the fit data
  std::vector<double> explained_variance;  // top-k covariance eigenvalues, descending
  double total_variance = 0.0;

  Matrix transform(const Matrix& rows) const;
};

struct PcaResult {
  Matrix projected;
  PcaModel model;
};

/// Projects mean-centred rows onto the top-k covariance eigenvectors. Each
/// component's sign is fixed so its largest-magnitude loading is positive.
PcaResult pca_reduce(const Matrix& features, std::size_t k);

/// Per-column min-max map onto [0, pi]; fitted on one matrix, applicable to
/// another (values outside the fitted range are clamped).
struct MinMaxScaler {
  std::vector<double> lo;
  std::vector<double> hi;

  static MinMaxScaler fit(const Matrix& features);
  Matrix transform(const Matrix& features) const;
};

/// Per-column min-max scaling onto [0, pi]; constant columns map to 0.
Matrix scale_features(const Matrix& features);

/// Class-balanced draw of n_train rows (the odd row, if any, goes to the +1
/// class); every remaining row becomes the test set.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
SplitIndices stratified_split(const std::vector<int>& labels, std::size_t n_train, std::uint64_t seed);

Batch select_rows(const Matrix& features, const std::vector<int>& labels, const std::vector<std::size_t>& rows);

}  // namespace qgen
