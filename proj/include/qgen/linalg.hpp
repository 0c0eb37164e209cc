#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qgen {

using c64 = std::complex<double>;

/// Dense row-major complex matrix. Backs states, gates, Kraus operators and
/// Fisher matrices alike; dimensions here never exceed a few hundred.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<c64> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<c64>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  /// Real symmetric matrices (Fisher, covariance) are stored row-major as doubles.
  static ComplexMatrix from_real(std::size_t rows, std::size_t cols, std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  c64& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const c64& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const c64> entries() const { return data_; }
  std::span<c64> entries() { return data_; }

  ComplexMatrix adjoint() const;
  c64 trace() const;
  double frobenius_norm() const;
  /// Real parts, row-major.
  std::vector<double> real_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(c64 scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<c64> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(c64 s, ComplexMatrix a);

/// A·v for a column vector stored as a flat sequence.
std::vector<c64> mat_vec(const ComplexMatrix& a, std::span<const c64> v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |A_ij - conj(A_ji)|; infinite for non-square input.
double hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, unitary
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Throws
/// std::invalid_argument when the input is not Hermitian within 1e-10
/// (scaled by the matrix magnitude for large entries).
HermitianEig hermitian_eig(const ComplexMatrix& a);

/// Moore-Penrose inverse of a PSD Hermitian matrix: eigenvalues >= cutoff are
/// inverted, the rest dropped. Rejects eigenvalues below -1e-10.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double cutoff);

/// 0.5 * sum_i ln(max(lambda_i, floor)), i.e. ln sqrt(det A) with a floored
/// spectrum.
double psd_log_sqrt_det(const ComplexMatrix& a, double floor);

}  // namespace qgen
