#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qgen/circuit.hpp"
#include "qgen/linalg.hpp"

namespace qgen {

inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr double kSldFloor = 1e-10;

enum class FisherKind { Classical, Quantum };

/// Real symmetric d x d Fisher information matrix, row-major.
struct FisherMatrix {
  FisherKind kind = FisherKind::Quantum;
  std::size_t d = 0;
  std::vector<double> values;

  static FisherMatrix zeros(FisherKind kind, std::size_t d);

  double operator()(std::size_t i, std::size_t j) const { return values[i * d + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * d + j]; }

  ComplexMatrix as_matrix() const;
  /// Ascending.
  std::vector<double> eigenvalues() const;
  /// Descending, negatives (rounding noise) clamped to zero.
  std::vector<double> spectrum_descending() const;
  double log_sqrt_det(double floor = kProbabilityFloor) const;
};

/// Arithmetic mean of equally sized matrices of the same kind.
FisherMatrix average(std::span<const FisherMatrix> matrices);

/// Classical FIM of the two-outcome Z measurement on the noisy state,
/// F_ij = sum_y (d_i p_y)(d_j p_y) / max(p_y, 1e-12).
FisherMatrix cfim(const Circuit& circuit, std::span<const double> features, std::span<const double> theta);

using ProbabilityMap = std::function<double(double)>;

/// Classical FIM of a model whose noisy outcome probabilities are eta(u_y)
/// with u_y the noiseless ones: F_ij = sum_y eta'(u_y)^2 / eta(u_y) (d_i u_y)(d_j u_y).
/// Throws std::domain_error when eta(u_y) <= 0.
FisherMatrix noisy_cfim_scaled(const Circuit& circuit, std::span<const double> features,
                               std::span<const double> theta, const ProbabilityMap& eta,
                               const ProbabilityMap& eta_prime);

/// Pure-state QFIM, 4 Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>].
/// Only defined for a noiseless circuit.
FisherMatrix qfim_pure(const Circuit& circuit, std::span<const double> features, std::span<const double> theta);

/// Mixed-state QFIM from the symmetric logarithmic derivative in the
/// eigenbasis of rho; pairs with lambda_i + lambda_j < 1e-10 contribute zero.
FisherMatrix qfim_mixed(const Circuit& circuit, std::span<const double> features, std::span<const double> theta);

/// Batch means over feature rows.
FisherMatrix qfim_batch(const Circuit& circuit, std::span<const std::vector<double>> batch,
                        std::span<const double> theta);
FisherMatrix cfim_batch(const Circuit& circuit, std::span<const std::vector<double>> batch,
                        std::span<const double> theta);

/// (sum lambda)^2 / sum lambda^2. Negative rounding noise is treated as zero.
double effective_dim_ipr(std::span<const double> eigenvalues);

/// Number of eigenvalues above tol.
std::size_t effective_dim_rank(const FisherMatrix& f, double tol);
/// Maximum rank over a sample of parameter points.
std::size_t effective_dim_rank(std::span<const FisherMatrix> samples, double tol);

/// Largest r such that the r-th largest eigenvalue is >= alpha in every
/// spectrum (each sorted descending); 0 if none.
std::size_t effective_dim_threshold(std::span<const std::vector<double>> spectra, double alpha);

struct EffectiveDimension {
  std::size_t rank_based = 0;
  double ipr_based = 0.0;
  std::size_t threshold_based = 0;
  double alpha = 0.0;
};

EffectiveDimension effective_dimension(const FisherMatrix& f, double alpha, double rank_tol = kSldFloor);

}  // namespace qgen
