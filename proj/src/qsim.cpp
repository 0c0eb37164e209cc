#include "qgen/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qgen {

namespace gates {

ComplexMatrix I() { return ComplexMatrix::identity(2); }
ComplexMatrix X() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix Y() { return {{0.0, c64{0.0, -1.0}}, {c64{0.0, 1.0}, 0.0}}; }
ComplexMatrix Z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix rx(double angle) {
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  return {{c, c64{0.0, -s}}, {c64{0.0, -s}, c}};
}

ComplexMatrix ry(double angle) {
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  return {{c, -s}, {s, c}};
}

ComplexMatrix rz(double angle) {
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  return {{c64{c, -s}, 0.0}, {0.0, c64{c, s}}};
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t target, std::size_t n_qubits) {
  if (target >= n_qubits) throw std::invalid_argument("embed: target qubit out of range");
  ComplexMatrix out = target == 0 ? op : I();
  for (std::size_t q = 1; q < n_qubits; ++q) out = kron(out, q == target ? op : I());
  return out;
}

ComplexMatrix cnot(std::size_t control, std::size_t target, std::size_t n_qubits) {
  if (control >= n_qubits || target >= n_qubits || control == target)
    throw std::invalid_argument("cnot: invalid control/target");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t cbit = std::size_t{1} << (n_qubits - 1 - control);
  const std::size_t tbit = std::size_t{1} << (n_qubits - 1 - target);
  ComplexMatrix out(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t row = (col & cbit) ? (col ^ tbit) : col;
    out(row, col) = 1.0;
  }
  return out;
}

}  // namespace gates

namespace {

std::size_t checked_dim(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 8) throw std::invalid_argument("n_qubits must be in [1, 8]");
  return std::size_t{1} << n_qubits;
}

}  // namespace

PureState::PureState(std::size_t n_qubits)
    : n_qubits_(n_qubits), amplitudes_(checked_dim(n_qubits), c64{}) {
  amplitudes_[0] = 1.0;
}

PureState::PureState(std::size_t n_qubits, std::vector<c64> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != checked_dim(n_qubits))
    throw std::invalid_argument("PureState: amplitude count must be 2^n");
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw std::invalid_argument("PureState: amplitudes not normalized (" + std::to_string(norm2) + ")");
}

PureState PureState::evolved(const ComplexMatrix& u) const {
  if (u.rows() != dim() || u.cols() != dim())
    throw std::invalid_argument("PureState::evolved: dimension mismatch");
  PureState out(*this);
  out.amplitudes_ = mat_vec(u, amplitudes_);
  return out;
}

ComplexMatrix PureState::projector() const {
  ComplexMatrix out(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) out(i, j) = amplitudes_[i] * std::conj(amplitudes_[j]);
  return out;
}

DensityMatrix::DensityMatrix(std::size_t n_qubits)
    : n_qubits_(n_qubits), matrix_(checked_dim(n_qubits), checked_dim(n_qubits)) {
  matrix_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : n_qubits_(psi.n_qubits()), matrix_(psi.projector()) {}

DensityMatrix::DensityMatrix(std::size_t n_qubits, ComplexMatrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  const std::size_t dim = checked_dim(n_qubits);
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw std::invalid_argument("DensityMatrix: matrix must be 2^n x 2^n");
  if (!is_hermitian(matrix_, 1e-10)) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - 1.0) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  if (hermitian_eig(matrix_).eigenvalues.front() < -1e-10)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix::DensityMatrix(Unchecked, std::size_t n_qubits, ComplexMatrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  const std::size_t dim = checked_dim(n_qubits);
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(Unchecked{}, n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::assume_valid(std::size_t n_qubits, ComplexMatrix matrix) {
  return DensityMatrix(Unchecked{}, n_qubits, std::move(matrix));
}

double KrausChannel::completeness_defect() const {
  if (operators.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t dim = operators.front().rows();
  ComplexMatrix sum(dim, dim);
  for (const auto& k : operators) sum += k.adjoint() * k;
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      worst = std::max(worst, std::abs(sum(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

Povm Povm::z_basis(std::size_t qubit, std::size_t n_qubits) {
  const ComplexMatrix p0 = ComplexMatrix::diagonal({1.0, 0.0});
  const ComplexMatrix p1 = ComplexMatrix::diagonal({0.0, 1.0});
  Povm povm;
  povm.elements.emplace(Outcome::Plus, gates::embed(p0, qubit, n_qubits));
  povm.elements.emplace(Outcome::Minus, gates::embed(p1, qubit, n_qubits));
  return povm;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim())
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  if (!is_unitary(u, 1e-9)) throw std::invalid_argument("apply_unitary: operator is not unitary");
  return DensityMatrix(DensityMatrix::Unchecked{}, rho.n_qubits(), u * rho.matrix() * u.adjoint());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  if (ch.operators.empty()) throw std::invalid_argument("apply_channel: empty Kraus set");
  for (const auto& k : ch.operators)
    if (k.rows() != rho.dim() || k.cols() != rho.dim())
      throw std::invalid_argument("apply_channel: Kraus operator dimension mismatch");
  if (ch.completeness_defect() > 1e-9)
    throw std::invalid_argument("apply_channel: Kraus operators are not complete");
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const auto& k : ch.operators) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix(DensityMatrix::Unchecked{}, rho.n_qubits(), std::move(out));
}

namespace {

void check_rate(double p) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("depolarizing: noise rate must lie in [0, 1), got " + std::to_string(p));
}

}  // namespace

KrausChannel depolarizing(double p, std::size_t target, std::size_t n_qubits) {
  check_rate(p);
  if (target >= n_qubits) throw std::invalid_argument("depolarizing: target qubit out of range");
  KrausChannel ch;
  ch.noise_rate = p;
  ch.operators.push_back(std::sqrt(1.0 - 0.75 * p) * gates::embed(gates::I(), target, n_qubits));
  if (p == 0.0) return ch;
  const double w = std::sqrt(0.25 * p);
  for (const auto& pauli : {gates::X(), gates::Y(), gates::Z()})
    ch.operators.push_back(w * gates::embed(pauli, target, n_qubits));
  return ch;
}

KrausChannel register_depolarizing(double p, std::size_t n_qubits) {
  check_rate(p);
  const std::size_t dim = checked_dim(n_qubits);
  const double inv_d2 = 1.0 / static_cast<double>(dim * dim);
  KrausChannel ch;
  ch.noise_rate = p;
  ch.operators.push_back(std::sqrt(1.0 - p + p * inv_d2) * ComplexMatrix::identity(dim));
  if (p == 0.0) return ch;
  const ComplexMatrix paulis[4] = {gates::I(), gates::X(), gates::Y(), gates::Z()};
  const double w = std::sqrt(p * inv_d2);
  const std::size_t n_strings = dim * dim;
  for (std::size_t code = 1; code < n_strings; ++code) {
    ComplexMatrix op = paulis[(code >> (2 * (n_qubits - 1))) & 3];
    for (std::size_t q = 1; q < n_qubits; ++q) op = kron(op, paulis[(code >> (2 * (n_qubits - 1 - q))) & 3]);
    ch.operators.push_back(w * op);
  }
  return ch;
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& obs) {
  if (obs.rows() != rho.dim() || obs.cols() != rho.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  if (!is_hermitian(obs, 1e-10)) throw std::invalid_argument("expectation: observable is not Hermitian");
  const ComplexMatrix& m = rho.matrix();
  c64 t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) t += obs(i, k) * m(k, i);
  return t.real();
}

double measure_probability(const DensityMatrix& rho, const Povm& povm, Outcome label) {
  const auto it = povm.elements.find(label);
  if (it == povm.elements.end()) throw std::invalid_argument("measure_probability: unknown outcome label");
  const double prob = expectation(rho, it->second);
  if (prob < -1e-10 || prob > 1.0 + 1e-10)
    throw std::domain_error("measure_probability: probability " + std::to_string(prob) + " outside [0, 1]");
  return std::clamp(prob, 0.0, 1.0);
}

}  // namespace qgen
