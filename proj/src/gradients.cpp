#include "qgen/gradients.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgen {

double GradientVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

bool GradientVector::finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

void check_index(const Circuit& circuit, std::size_t j) {
  if (j >= circuit.parameter_count()) {
    throw std::out_of_range("parameter index " + std::to_string(j) + " out of range (d = " +
                            std::to_string(circuit.parameter_count()) + ")");
  }
}

std::vector<double> shifted(std::span<const double> theta, std::size_t j, double by) {
  std::vector<double> out(theta.begin(), theta.end());
  out[j] += by;
  return out;
}

}  // namespace

double param_shift_grad(const Circuit& circuit, std::span<const double> features,
                        std::span<const double> theta, std::size_t j) {
  check_index(circuit, j);
  const double plus = circuit.model_value(features, shifted(theta, j, kParameterShift));
  const double minus = circuit.model_value(features, shifted(theta, j, -kParameterShift));
  return 0.5 * (plus - minus);
}

GradientVector param_shift_gradient(const Circuit& circuit, std::span<const double> features,
                                    std::span<const double> theta) {
  GradientVector g{std::vector<double>(circuit.parameter_count())};
  for (std::size_t j = 0; j < g.values.size(); ++j) g.values[j] = param_shift_grad(circuit, features, theta, j);
  return g;
}

GradientVector finite_diff_grad(const ScalarFunction& f, std::span<const double> theta, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: step must be positive");
  GradientVector g{std::vector<double>(theta.size())};
  for (std::size_t j = 0; j < theta.size(); ++j) {
    g.values[j] = (f(shifted(theta, j, h)) - f(shifted(theta, j, -h))) / (2.0 * h);
  }
  return g;
}

ComplexMatrix density_derivative(const Circuit& circuit, std::span<const double> features,
                                 std::span<const double> theta, std::size_t j) {
  check_index(circuit, j);
  ComplexMatrix d = circuit.forward_noisy(features, shifted(theta, j, kParameterShift)).matrix();
  d -= circuit.forward_noisy(features, shifted(theta, j, -kParameterShift)).matrix();
  d *= 0.5;
  return d;
}

}  // namespace qgen
