#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qgen/linalg.hpp"
#include "qgen/qsim.hpp"

using namespace qgen;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = c64(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

}  // namespace

TEST_CASE("kron examples") {
  CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
  CHECK(kron(gates::Z(), gates::Z()) == ComplexMatrix::diagonal({1, -1, -1, 1}));
  CHECK(kron(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::identity(2)) == ComplexMatrix::diagonal({1, 1, 0, 0}));
}

TEST_CASE("kron is associative and respects mixed products") {
  std::mt19937_64 rng(3);
  const auto a = random_hermitian(2, rng), b = random_hermitian(2, rng), c = random_hermitian(2, rng);
  CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
  const auto d = random_hermitian(2, rng);
  CHECK(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-13);
}

TEST_CASE("hermitian_eig examples") {
  auto z = hermitian_eig(gates::Z());
  CHECK(z.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(z.eigenvalues[1] == doctest::Approx(1.0));

  auto x = hermitian_eig(gates::X());
  CHECK(x.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(x.eigenvalues[1] == doctest::Approx(1.0));
  // Eigenvector of -1 is (|0> - |1>)/sqrt 2 up to phase.
  const c64 v0 = x.eigenvectors(0, 0), v1 = x.eigenvectors(1, 0);
  CHECK(std::abs(v0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(v0 + v1) < 1e-12);

  auto deg = hermitian_eig(ComplexMatrix::diagonal({3, 3}));
  CHECK(deg.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(deg.eigenvalues[1] == doctest::Approx(3.0));
  CHECK(is_unitary(deg.eigenvectors));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix a{{1, 2}, {0, 1}};
  CHECK_THROWS_AS(hermitian_eig(a), std::invalid_argument);
}

TEST_CASE("hermitian_eig reconstructs random matrices and matches Eigen") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 3u, 4u, 8u, 16u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix a = random_hermitian(n, rng);
      const HermitianEig e = hermitian_eig(a);
      CHECK(is_unitary(e.eigenvectors, 1e-10));
      for (std::size_t k = 1; k < n; ++k) CHECK(e.eigenvalues[k - 1] <= e.eigenvalues[k]);
      ComplexMatrix recon = e.eigenvectors * ComplexMatrix::diagonal(e.eigenvalues) * e.eigenvectors.adjoint();
      CHECK(max_abs_diff(recon, a) < 1e-11);

      Eigen::MatrixXcd m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(es.eigenvalues()(k) - e.eigenvalues[k]) < 1e-11);
    }
  }
}

TEST_CASE("pseudo_inverse examples") {
  CHECK(max_abs_diff(pseudo_inverse(ComplexMatrix::diagonal({2, 0}), 1e-10), ComplexMatrix::diagonal({0.5, 0})) < 1e-15);
  CHECK(max_abs_diff(pseudo_inverse(ComplexMatrix::identity(5), 1e-10), ComplexMatrix::identity(5)) < 1e-14);
  CHECK(max_abs_diff(pseudo_inverse(ComplexMatrix::diagonal({4, 1e-15}), 1e-10), ComplexMatrix::diagonal({0.25, 0})) <
        1e-15);
  CHECK_THROWS(pseudo_inverse(ComplexMatrix::diagonal({1, -0.5}), 1e-10));
}

TEST_CASE("pseudo_inverse satisfies the Moore-Penrose identities on PSD input") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix b = random_hermitian(4, rng);
    // Rank-2 PSD matrix.
    ComplexMatrix a = b * ComplexMatrix::diagonal({1, 1, 0, 0}) * b.adjoint();
    const ComplexMatrix ai = pseudo_inverse(a, 1e-9);
    CHECK(max_abs_diff(a * ai * a, a) < 1e-9);
    CHECK(max_abs_diff(ai * a * ai, ai) < 1e-9);
    CHECK(max_abs_diff(pseudo_inverse(ai, 1e-9), a) < 1e-8);
  }
}

TEST_CASE("psd_log_sqrt_det examples") {
  CHECK(psd_log_sqrt_det(ComplexMatrix::identity(6), 1e-12) == doctest::Approx(0.0));
  CHECK(psd_log_sqrt_det(ComplexMatrix::diagonal({4, 1}), 1e-12) == doctest::Approx(0.5 * std::log(4.0)));
  CHECK(psd_log_sqrt_det(ComplexMatrix::diagonal({1, 0}), 1e-12) == doctest::Approx(-13.815510558));
}

TEST_CASE("matrix shape errors") {
  CHECK_THROWS(ComplexMatrix(2, 2) * ComplexMatrix(3, 3));
  CHECK_THROWS(ComplexMatrix(2, 2) + ComplexMatrix(2, 3));
  CHECK_THROWS(hermitian_eig(ComplexMatrix(2, 3)));
}
