#include "qgen/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qgen {

double CircuitSpec::eta() const {
  return std::pow(1.0 - noise_rate, static_cast<double>(measured_noise_sites()));
}

void CircuitSpec::validate() const {
  if (n_qubits < 2 || n_qubits > 6) throw std::invalid_argument("CircuitSpec: n_qubits must be in [2, 6]");
  if (n_layers < 1) throw std::invalid_argument("CircuitSpec: n_layers must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate < 1.0))
    throw std::invalid_argument("CircuitSpec: noise rate must lie in [0, 1)");
}

bool ParameterVector::in_domain() const {
  for (double v : values)
    if (!(v >= ParameterSpace::kLower && v <= ParameterSpace::kUpper)) return false;
  return true;
}

double ParameterSpace::log_volume() const { return static_cast<double>(d) * std::log(2.0 * kTwoPi); }

ComplexMatrix rot(double alpha, double beta, double gamma) {
  return gates::rz(gamma) * gates::ry(beta) * gates::rz(alpha);
}

int predict_label(double p_hat) { return p_hat >= 0.5 ? +1 : -1; }

Circuit::Circuit(CircuitSpec spec) : spec_(spec) {
  spec_.validate();
  const std::size_t n = spec_.n_qubits;
  const std::size_t dim = std::size_t{1} << n;
  // CNOT ring: (0->1), (1->2), ..., (n-1 -> 0). For two qubits this is the
  // CNOT(0->1), CNOT(1->0) pair.
  entangler_ = ComplexMatrix::identity(dim);
  for (std::size_t q = 0; q < n; ++q) entangler_ = gates::cnot(q, (q + 1) % n, n) * entangler_;
  observable_ = gates::embed(gates::Z(), CircuitSpec::kMeasuredQubit, n);
  povm_ = Povm::z_basis(CircuitSpec::kMeasuredQubit, n);
  if (spec_.noise_rate > 0.0) {
    if (spec_.noise_model == NoiseModel::Register) {
      noise_.push_back(register_depolarizing(spec_.noise_rate, n));
    } else {
      for (std::size_t q = 0; q < n; ++q) noise_.push_back(depolarizing(spec_.noise_rate, q, n));
    }
  }
}

Circuit Circuit::noiseless() const {
  CircuitSpec s = spec_;
  s.noise_rate = 0.0;
  return Circuit(s);
}

void Circuit::check_theta(std::span<const double> theta) const {
  if (theta.size() != parameter_count()) {
    throw std::invalid_argument("circuit: expected " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(theta.size()));
  }
}

PureState Circuit::encode(std::span<const double> features) const {
  if (features.empty()) throw std::invalid_argument("encode: empty feature sequence");
  const std::size_t n = spec_.n_qubits;
  // Accumulate the per-qubit single-qubit products, then take one Kronecker
  // product; encoding gates on different qubits commute.
  std::vector<ComplexMatrix> local(n, gates::I());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t q = i % n;
    local[q] = (q % 2 == 0 ? gates::rx(features[i]) : gates::ry(features[i])) * local[q];
  }
  ComplexMatrix u = local[0];
  for (std::size_t q = 1; q < n; ++q) u = kron(u, local[q]);
  return PureState(n).evolved(u);
}

ComplexMatrix Circuit::layer_unitary(std::span<const double> theta, std::size_t layer) const {
  const std::size_t n = spec_.n_qubits;
  const std::size_t base = layer * n * CircuitSpec::kParamsPerRotation;
  ComplexMatrix rotations = rot(theta[base], theta[base + 1], theta[base + 2]);
  for (std::size_t q = 1; q < n; ++q) {
    const std::size_t o = base + q * CircuitSpec::kParamsPerRotation;
    rotations = kron(rotations, rot(theta[o], theta[o + 1], theta[o + 2]));
  }
  return entangler_ * rotations;
}

void Circuit::apply_noise(ComplexMatrix& rho) const {
  for (const auto& ch : noise_) {
    ComplexMatrix out(rho.rows(), rho.cols());
    for (const auto& k : ch.operators) out += k * rho * k.adjoint();
    rho = std::move(out);
  }
}

PureState Circuit::forward_pure(std::span<const double> features, std::span<const double> theta) const {
  check_theta(theta);
  PureState psi = encode(features);
  for (std::size_t l = 0; l < spec_.n_layers; ++l) psi = psi.evolved(layer_unitary(theta, l));
  return psi;
}

DensityMatrix Circuit::forward_noisy(std::span<const double> features,
                                     std::span<const double> theta) const {
  check_theta(theta);
  ComplexMatrix rho = encode(features).projector();
  apply_noise(rho);
  for (std::size_t l = 0; l < spec_.n_layers; ++l) {
    const ComplexMatrix u = layer_unitary(theta, l);
    rho = u * rho * u.adjoint();
    if (spec_.noise_every_layer || l + 1 == spec_.n_layers) apply_noise(rho);
  }
  return DensityMatrix::assume_valid(spec_.n_qubits, std::move(rho));
}

double Circuit::model_value(std::span<const double> features, std::span<const double> theta) const {
  return expectation(forward_noisy(features, theta), observable_);
}

double Circuit::predict_probability(std::span<const double> features,
                                    std::span<const double> theta) const {
  return std::clamp(0.5 * (1.0 + model_value(features, theta)), 0.0, 1.0);
}

}  // namespace qgen
