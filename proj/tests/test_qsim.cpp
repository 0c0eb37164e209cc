#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qgen/qsim.hpp"

using namespace qgen;

namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

DensityMatrix ket(std::size_t n, std::size_t index) {
  std::vector<c64> amp(std::size_t{1} << n);
  amp[index] = 1.0;
  return DensityMatrix(PureState(n, amp));
}

// Random mixed state: a convex mix of a few random pure states.
DensityMatrix random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix rho(dim, dim);
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    std::vector<c64> amp(dim);
    double norm = 0.0;
    for (auto& a : amp) {
      a = c64(g(rng), g(rng));
      norm += std::norm(a);
    }
    for (auto& a : amp) a /= std::sqrt(norm);
    const double w = u(rng);
    total += w;
    ComplexMatrix proj = PureState(n, amp).projector();
    proj *= w;
    rho += proj;
  }
  rho *= 1.0 / total;
  return DensityMatrix(n, rho);
}

}  // namespace

TEST_CASE("apply_unitary examples") {
  const DensityMatrix zero = ket(1, 0);
  CHECK(max_abs_diff(apply_unitary(zero, gates::I()).matrix(), zero.matrix()) < 1e-15);
  CHECK(max_abs_diff(apply_unitary(zero, gates::X()).matrix(), ket(1, 1).matrix()) < 1e-15);
  CHECK(std::abs(expectation(apply_unitary(zero, gates::rx(std::numbers::pi / 2)), gates::Z())) < 1e-15);
  CHECK_THROWS(apply_unitary(zero, ComplexMatrix::diagonal({1, 2})));
}

TEST_CASE("rotation gates match closed forms") {
  for (double t : {-2.0, 0.0, 0.7, 3.1}) {
    CHECK(is_unitary(gates::rx(t)));
    CHECK(expectation(apply_unitary(ket(1, 0), gates::rx(t)), gates::Z()) == doctest::Approx(std::cos(t)));
    CHECK(expectation(apply_unitary(ket(1, 0), gates::ry(t)), gates::X()) == doctest::Approx(std::sin(t)));
    CHECK(expectation(apply_unitary(ket(1, 0), gates::ry(t)), gates::Z()) == doctest::Approx(std::cos(t)));
  }
  CHECK(gates::cnot(0, 1, 2) == ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  CHECK(gates::cnot(1, 0, 2) == ComplexMatrix{{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}});
  CHECK(gates::embed(gates::Z(), 0, 2) == ComplexMatrix::diagonal({1, 1, -1, -1}));
}

TEST_CASE("apply_channel examples") {
  const DensityMatrix zero = ket(1, 0);
  const KrausChannel identity{{gates::I()}, 0.0};
  CHECK(max_abs_diff(apply_channel(zero, identity).matrix(), zero.matrix()) < 1e-15);

  // p = 0.3: (1 - p)|0><0| + p I/2 = diag(0.85, 0.15).
  const auto out = apply_channel(zero, depolarizing(0.3, 0, 1)).matrix();
  CHECK(max_abs_diff(out, ComplexMatrix::diagonal({0.85, 0.15})) < 1e-12);

  // Fully mixed limit.
  const auto mixed = apply_channel(ket(1, 1), depolarizing(1.0 - 1e-12, 0, 1)).matrix();
  CHECK(max_abs_diff(mixed, ComplexMatrix::diagonal({0.5, 0.5})) < 1e-11);

  CHECK_THROWS(apply_channel(ket(2, 0), depolarizing(0.1, 0, 1)));
}

TEST_CASE("depolarizing channel construction") {
  const auto p0 = depolarizing(0.0, 1, 2);
  const DensityMatrix s = ket(2, 2);
  CHECK(max_abs_diff(apply_channel(s, p0).matrix(), s.matrix()) < 1e-15);
  CHECK(depolarizing(0.5, 0, 1).completeness_defect() < 1e-14);
  CHECK(depolarizing(0.5, 1, 3).completeness_defect() < 1e-14);
  CHECK(register_depolarizing(0.5, 2).completeness_defect() < 1e-14);
  CHECK_THROWS(depolarizing(-0.1, 0, 1));
  CHECK_THROWS(depolarizing(1.0, 0, 1));
  CHECK_THROWS(depolarizing(0.1, 2, 2));
}

TEST_CASE("register depolarizing mixes towards I/dim") {
  std::mt19937_64 rng(4);
  for (double p : {0.05, 0.3, 0.9}) {
    const DensityMatrix rho = random_state(2, rng);
    ComplexMatrix expect = rho.matrix();
    expect *= 1.0 - p;
    ComplexMatrix mix = ComplexMatrix::identity(4);
    mix *= p / 4.0;
    expect += mix;
    CHECK(max_abs_diff(apply_channel(rho, register_depolarizing(p, 2)).matrix(), expect) < 1e-13);
  }
}

TEST_CASE("expectation examples") {
  CHECK(expectation(ket(1, 0), gates::Z()) == doctest::Approx(1.0));
  CHECK(std::abs(expectation(DensityMatrix::maximally_mixed(1), gates::Z())) < 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell(PureState(2, {r, 0, 0, r}));
  CHECK(std::abs(expectation(bell, gates::embed(gates::Z(), 0, 2))) < 1e-15);
  CHECK_THROWS(expectation(bell, ComplexMatrix{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}));
}

TEST_CASE("measure_probability examples") {
  const Povm povm = Povm::z_basis(0, 2);
  CHECK(measure_probability(ket(2, 0), povm, Outcome::Plus) == doctest::Approx(1.0));
  CHECK(measure_probability(DensityMatrix::maximally_mixed(2), povm, Outcome::Plus) == doctest::Approx(0.5));
  std::mt19937_64 rng(9);
  const ComplexMatrix z0 = gates::embed(gates::Z(), 0, 2);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_state(2, rng);
    const double plus = measure_probability(rho, povm, Outcome::Plus);
    CHECK(plus == doctest::Approx(0.5 * (1.0 + expectation(rho, z0))).epsilon(1e-12));
    CHECK(plus + measure_probability(rho, povm, Outcome::Minus) == doctest::Approx(1.0).epsilon(1e-12));
  }
  Povm partial;
  partial.elements[Outcome::Plus] = povm.elements.at(Outcome::Plus);
  CHECK_THROWS(measure_probability(ket(2, 0), partial, Outcome::Minus));
}

TEST_CASE("density matrix invariants are enforced") {
  CHECK_THROWS(DensityMatrix(1, ComplexMatrix::diagonal({0.7, 0.7})));
  CHECK_THROWS(DensityMatrix(1, ComplexMatrix::diagonal({1.5, -0.5})));
  CHECK_THROWS(DensityMatrix(1, ComplexMatrix{{0.5, 0.5}, {0.0, 0.5}}));
  CHECK_THROWS(PureState(1, {1.0, 1.0}));
}

TEST_CASE("channels preserve trace and positivity over random pairs") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> up(0.0, 0.999);
  std::uniform_int_distribution<std::size_t> uq(0, 1);
  double worst_trace = 0.0, worst_eig = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const DensityMatrix rho = random_state(2, rng);
    const double p = up(rng);
    const auto ch = t % 2 ? depolarizing(p, uq(rng), 2) : register_depolarizing(p, 2);
    const DensityMatrix out = apply_channel(rho, ch);
    worst_trace = std::max(worst_trace, std::abs(out.matrix().trace() - 1.0));
    worst_eig = std::min(worst_eig, hermitian_eig(out.matrix()).eigenvalues.front());
  }
  CHECK(worst_trace <= 1e-10);
  CHECK(worst_eig >= -1e-9);
}

TEST_CASE("composed depolarizing scales <Z> multiplicatively") {
  std::mt19937_64 rng(77);
  for (auto [p1, p2] : {std::pair{0.1, 0.2}, std::pair{0.5, 0.05}, std::pair{0.3, 0.3}}) {
    const DensityMatrix rho = random_state(1, rng);
    const double z = expectation(rho, gates::Z());
    const auto out = apply_channel(apply_channel(rho, depolarizing(p1, 0, 1)), depolarizing(p2, 0, 1));
    CHECK(expectation(out, gates::Z()) == doctest::Approx((1 - p1) * (1 - p2) * z).epsilon(1e-12));
  }
}
