#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qgen/circuit.hpp"

namespace qgen {

struct GradientVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double norm() const;
  bool finite() const;
};

inline constexpr double kParameterShift = std::numbers::pi / 2.0;
inline constexpr double kDefaultFiniteDiffStep = 1e-5;

/// d<Z_0>/d theta_j by the two-term shift rule at +-pi/2. Exact for the
/// Pauli-rotation gates used by Circuit.
double param_shift_grad(const Circuit& circuit, std::span<const double> features,
                        std::span<const double> theta, std::size_t j);

/// All d partial derivatives of the model value.
GradientVector param_shift_gradient(const Circuit& circuit, std::span<const double> features,
                                    std::span<const double> theta);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences (f(theta + h e_j) - f(theta - h e_j)) / 2h.
GradientVector finite_diff_grad(const ScalarFunction& f, std::span<const double> theta,
                                double h = kDefaultFiniteDiffStep);

/// d rho / d theta_j of the noisy state, via the shift rule on the density
/// matrix. Traceless and Hermitian.
ComplexMatrix density_derivative(const Circuit& circuit, std::span<const double> features,
                                 std::span<const double> theta, std::size_t j);

}  // namespace qgen
