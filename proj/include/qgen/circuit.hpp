#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qgen/linalg.hpp"
#include "qgen/qsim.hpp"

namespace qgen {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// How a noise barrier acts on the register.
enum class NoiseModel {
  /// One depolarizing channel on the whole register, rho -> (1-p) rho + p I/2^n.
  /// Every traceless observable shrinks by exactly (1-p) per barrier.
  Register,
  /// Independent single-qubit depolarizing channels on every qubit.
  PerQubit,
};

/// Layered ansatz: angle encoding, a noise barrier, `n_layers` blocks of
/// ZYZ Euler rotations followed by a CNOT ring, a closing noise barrier, and
/// a Z measurement of qubit 0.
struct CircuitSpec {
  std::size_t n_qubits = 2;
  std::size_t n_layers = 2;
  double noise_rate = 0.0;
  NoiseModel noise_model = NoiseModel::Register;
  /// Adds a barrier after every layer instead of only after the last one.
  bool noise_every_layer = false;

  static constexpr std::size_t kParamsPerRotation = 3;
  static constexpr std::size_t kMeasuredQubit = 0;

  std::size_t parameter_count() const { return n_layers * n_qubits * kParamsPerRotation; }
  /// Number of noise barriers touching the measured qubit.
  std::size_t measured_noise_sites() const { return noise_every_layer ? n_layers + 1 : 2; }
  /// (1-p)^k0; the exact output scaling under the Register noise model.
  double eta() const;
  void validate() const;
};

struct ParameterVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool in_domain() const;
};

struct ParameterSpace {
  std::size_t d = 0;
  static constexpr double kLower = -kTwoPi;
  static constexpr double kUpper = kTwoPi;

  double log_volume() const;
};

/// A CircuitSpec with its gates and channels precomputed. Immutable and
/// safe to share across threads.
class Circuit {
 public:
  explicit Circuit(CircuitSpec spec);

  const CircuitSpec& spec() const { return spec_; }
  std::size_t parameter_count() const { return spec_.parameter_count(); }
  /// Same circuit with the noise switched off.
  Circuit noiseless() const;

  /// Feature i (0-based) rotates qubit i mod n: RX on even qubits, RY on odd
  /// ones, in index order.
  PureState encode(std::span<const double> features) const;
  /// Noise-free state vector.
  PureState forward_pure(std::span<const double> features, std::span<const double> theta) const;
  DensityMatrix forward_noisy(std::span<const double> features, std::span<const double> theta) const;

  /// <Z_0> on the noisy state, in [-1, 1].
  double model_value(std::span<const double> features, std::span<const double> theta) const;
  /// Probability of the +1 label, (1 + model_value) / 2.
  double predict_probability(std::span<const double> features, std::span<const double> theta) const;

  const ComplexMatrix& observable() const { return observable_; }
  const Povm& povm() const { return povm_; }

 private:
  ComplexMatrix layer_unitary(std::span<const double> theta, std::size_t layer) const;
  void apply_noise(ComplexMatrix& rho) const;
  void check_theta(std::span<const double> theta) const;

  CircuitSpec spec_;
  ComplexMatrix entangler_;
  ComplexMatrix observable_;
  Povm povm_;
  std::vector<KrausChannel> noise_;
};

/// Euler rotation RZ(gamma) RY(beta) RZ(alpha).
ComplexMatrix rot(double alpha, double beta, double gamma);

/// +1 when p_hat >= 0.5.
int predict_label(double p_hat);

}  // namespace qgen
