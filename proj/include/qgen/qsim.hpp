#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "qgen/linalg.hpp"

namespace qgen {

// Qubit 0 is the most significant bit of the basis index, so |q0 q1 ...>
// matches kron(q0, q1, ...).

namespace gates {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
ComplexMatrix rx(double angle);
ComplexMatrix ry(double angle);
ComplexMatrix rz(double angle);
/// Single-qubit operator `op` on `target`, identity on the other qubits.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t target, std::size_t n_qubits);
ComplexMatrix cnot(std::size_t control, std::size_t target, std::size_t n_qubits);
}  // namespace gates

class PureState {
 public:
  /// |0...0>
  explicit PureState(std::size_t n_qubits);
  /// Throws if the amplitude count is not a power of two or the norm is off
  /// by more than 1e-10.
  PureState(std::size_t n_qubits, std::vector<c64> amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const c64> amplitudes() const { return amplitudes_; }

  PureState evolved(const ComplexMatrix& u) const;
  ComplexMatrix projector() const;

 private:
  std::size_t n_qubits_;
  std::vector<c64> amplitudes_;
};

struct KrausChannel;

class DensityMatrix {
 public:
  /// |0...0><0...0|
  explicit DensityMatrix(std::size_t n_qubits);
  explicit DensityMatrix(const PureState& psi);
  /// Validates Hermiticity and unit trace (1e-10) and eigenvalues >= -1e-10.
  DensityMatrix(std::size_t n_qubits, ComplexMatrix matrix);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  static DensityMatrix maximally_mixed(std::size_t n_qubits);
  /// Skips validation; for simulator internals that preserve the invariants
  /// by construction.
  static DensityMatrix assume_valid(std::size_t n_qubits, ComplexMatrix matrix);

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, std::size_t n_qubits, ComplexMatrix matrix);
  friend DensityMatrix apply_unitary(const DensityMatrix&, const ComplexMatrix&);
  friend DensityMatrix apply_channel(const DensityMatrix&, const KrausChannel&);

  std::size_t n_qubits_;
  ComplexMatrix matrix_;
};

struct KrausChannel {
  std::vector<ComplexMatrix> operators;
  double noise_rate = 0.0;

  /// Sum K^dagger K compared against the identity (max-abs entry).
  double completeness_defect() const;
};

enum class Outcome { Plus, Minus };

struct Povm {
  std::map<Outcome, ComplexMatrix> elements;

  /// Computational-basis measurement of one qubit: +1 <-> |0>, -1 <-> |1>.
  static Povm z_basis(std::size_t qubit, std::size_t n_qubits);
};

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch);

/// Single-qubit depolarizing channel, rho -> (1-p) rho + p Tr_t(rho) (x) I/2
/// on `target`. Kraus set {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}.
KrausChannel depolarizing(double p, std::size_t target, std::size_t n_qubits);

/// Register-wide depolarizing, rho -> (1-p) rho + p I/2^n, as a Kraus sum over
/// all 4^n Pauli strings.
KrausChannel register_depolarizing(double p, std::size_t n_qubits);

double expectation(const DensityMatrix& rho, const ComplexMatrix& obs);
double measure_probability(const DensityMatrix& rho, const Povm& povm, Outcome label);

}  // namespace qgen
