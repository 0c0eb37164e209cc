#include "qgen/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qgen/gradients.hpp"

namespace qgen {

FisherMatrix FisherMatrix::zeros(FisherKind kind, std::size_t d) {
  return FisherMatrix{kind, d, std::vector<double>(d * d, 0.0)};
}

ComplexMatrix FisherMatrix::as_matrix() const { return ComplexMatrix::from_real(d, d, values); }

std::vector<double> FisherMatrix::eigenvalues() const { return hermitian_eig(as_matrix()).eigenvalues; }

std::vector<double> FisherMatrix::spectrum_descending() const {
  std::vector<double> s = eigenvalues();
  std::reverse(s.begin(), s.end());
  for (double& v : s) v = std::max(v, 0.0);
  return s;
}

double FisherMatrix::log_sqrt_det(double floor) const { return psd_log_sqrt_det(as_matrix(), floor); }

FisherMatrix average(std::span<const FisherMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("average: no matrices");
  FisherMatrix out = FisherMatrix::zeros(matrices.front().kind, matrices.front().d);
  for (const auto& m : matrices) {
    if (m.d != out.d) throw std::invalid_argument("average: dimension mismatch");
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += m.values[k];
  }
  const double inv = 1.0 / static_cast<double>(matrices.size());
  for (double& v : out.values) v *= inv;
  return out;
}

namespace {

// Probability of the +1 outcome and its gradient, from the model value.
struct OutcomeStats {
  double p_plus;
  std::vector<double> dp_plus;
};

OutcomeStats outcome_stats(const Circuit& circuit, std::span<const double> features,
                           std::span<const double> theta) {
  const GradientVector g = param_shift_gradient(circuit, features, theta);
  OutcomeStats s{circuit.predict_probability(features, theta), g.values};
  for (double& v : s.dp_plus) v *= 0.5;
  return s;
}

void add_outer(FisherMatrix& f, std::span<const double> grad, double weight) {
  for (std::size_t i = 0; i < f.d; ++i)
    for (std::size_t j = 0; j < f.d; ++j) f(i, j) += weight * grad[i] * grad[j];
}

}  // namespace

FisherMatrix cfim(const Circuit& circuit, std::span<const double> features, std::span<const double> theta) {
  const OutcomeStats s = outcome_stats(circuit, features, theta);
  FisherMatrix f = FisherMatrix::zeros(FisherKind::Classical, circuit.parameter_count());
  // dp_minus = -dp_plus, so both outcomes share the same outer product.
  const double weight = 1.0 / std::max(s.p_plus, kProbabilityFloor) +
                        1.0 / std::max(1.0 - s.p_plus, kProbabilityFloor);
  add_outer(f, s.dp_plus, weight);
  return f;
}

FisherMatrix noisy_cfim_scaled(const Circuit& circuit, std::span<const double> features,
                               std::span<const double> theta, const ProbabilityMap& eta,
                               const ProbabilityMap& eta_prime) {
  const OutcomeStats s = outcome_stats(circuit.noiseless(), features, theta);
  double weight = 0.0;
  for (double u : {s.p_plus, 1.0 - s.p_plus}) {
    const double e = eta(u);
    if (!(e > 0.0)) {
      throw std::domain_error("noisy_cfim_scaled: eta(" + std::to_string(u) + ") = " + std::to_string(e) +
                              " is not positive");
    }
    const double ep = eta_prime(u);
    weight += ep * ep / e;
  }
  FisherMatrix f = FisherMatrix::zeros(FisherKind::Classical, circuit.parameter_count());
  add_outer(f, s.dp_plus, weight);
  return f;
}

FisherMatrix qfim_pure(const Circuit& circuit, std::span<const double> features, std::span<const double> theta) {
  if (circuit.spec().noise_rate != 0.0)
    throw std::invalid_argument("qfim_pure: circuit is noisy; use qfim_mixed");
  const std::size_t d = circuit.parameter_count();
  const PureState psi = circuit.forward_pure(features, theta);
  const auto amp = psi.amplitudes();

  // d/dtheta_j of exp(-i theta G / 2) is (1/2) exp(-i (theta + pi) G / 2) for
  // G^2 = I, so |d_j psi> = |psi(theta + pi e_j)> / 2 exactly.
  std::vector<std::vector<c64>> dpsi(d);
  std::vector<double> moved(theta.begin(), theta.end());
  for (std::size_t j = 0; j < d; ++j) {
    moved[j] += std::numbers::pi;
    const PureState shifted = circuit.forward_pure(features, moved);
    moved[j] = theta[j];
    dpsi[j].assign(shifted.amplitudes().begin(), shifted.amplitudes().end());
    for (auto& a : dpsi[j]) a *= 0.5;
  }

  auto inner = [](std::span<const c64> a, std::span<const c64> b) {
    c64 s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
  };
  std::vector<c64> overlap(d);
  for (std::size_t j = 0; j < d; ++j) overlap[j] = inner(amp, dpsi[j]);

  FisherMatrix f = FisherMatrix::zeros(FisherKind::Quantum, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double v = 4.0 * (inner(dpsi[i], dpsi[j]) - std::conj(overlap[i]) * overlap[j]).real();
      f(i, j) = v;
      f(j, i) = v;
    }
  return f;
}

FisherMatrix qfim_mixed(const Circuit& circuit, std::span<const double> features, std::span<const double> theta) {
  const std::size_t d = circuit.parameter_count();
  const DensityMatrix rho = circuit.forward_noisy(features, theta);
  const HermitianEig eig = hermitian_eig(rho.matrix());
  const ComplexMatrix& v = eig.eigenvectors;
  const ComplexMatrix vh = v.adjoint();
  const std::size_t dim = rho.dim();

  std::vector<ComplexMatrix> rotated(d);
  for (std::size_t j = 0; j < d; ++j) rotated[j] = vh * density_derivative(circuit, features, theta, j) * v;

  // Tr[d_i rho L_j] with L_j = sum_kl 2 <k|d_j rho|l> / (lambda_k + lambda_l) |k><l|.
  ComplexMatrix inv_sum(dim, dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t l = 0; l < dim; ++l) {
      const double s = eig.eigenvalues[k] + eig.eigenvalues[l];
      inv_sum(k, l) = s < kSldFloor ? 0.0 : 2.0 / s;
    }

  FisherMatrix f = FisherMatrix::zeros(FisherKind::Quantum, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t l = 0; l < dim; ++l) {
          const double w = inv_sum(k, l).real();
          if (w == 0.0) continue;
          acc += w * (rotated[j](k, l) * rotated[i](l, k)).real();
        }
      f(i, j) = acc;
      f(j, i) = acc;
    }
  return f;
}

namespace {

template <typename PerSample>
FisherMatrix batch_mean(std::span<const std::vector<double>> batch, PerSample&& per_sample) {
  if (batch.empty()) throw std::invalid_argument("Fisher batch average: empty batch");
  std::vector<FisherMatrix> parts;
  parts.reserve(batch.size());
  for (const auto& x : batch) parts.push_back(per_sample(x));
  return average(parts);
}

}  // namespace

FisherMatrix qfim_batch(const Circuit& circuit, std::span<const std::vector<double>> batch,
                        std::span<const double> theta) {
  return batch_mean(batch, [&](const std::vector<double>& x) { return qfim_mixed(circuit, x, theta); });
}

FisherMatrix cfim_batch(const Circuit& circuit, std::span<const std::vector<double>> batch,
                        std::span<const double> theta) {
  return batch_mean(batch, [&](const std::vector<double>& x) { return cfim(circuit, x, theta); });
}

double effective_dim_ipr(std::span<const double> eigenvalues) {
  double sum = 0.0, sum_sq = 0.0;
  for (double lambda : eigenvalues) {
    const double v = std::max(lambda, 0.0);
    sum += v;
    sum_sq += v * v;
  }
  if (!(sum_sq > 0.0)) throw std::invalid_argument("effective_dim_ipr: spectrum is identically zero");
  return sum * sum / sum_sq;
}

std::size_t effective_dim_rank(const FisherMatrix& f, double tol) {
  const auto ev = f.eigenvalues();
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [tol](double v) { return v > tol; }));
}

std::size_t effective_dim_rank(std::span<const FisherMatrix> samples, double tol) {
  std::size_t best = 0;
  for (const auto& f : samples) best = std::max(best, effective_dim_rank(f, tol));
  return best;
}

std::size_t effective_dim_threshold(std::span<const std::vector<double>> spectra, double alpha) {
  if (spectra.empty()) throw std::invalid_argument("effective_dim_threshold: no spectra");
  if (!(alpha > 0.0)) throw std::invalid_argument("effective_dim_threshold: alpha must be positive");
  std::size_t r = spectra.front().size();
  for (const auto& s : spectra) {
    std::size_t ok = 0;
    while (ok < s.size() && s[ok] >= alpha) ++ok;
    r = std::min(r, ok);
  }
  return r;
}

EffectiveDimension effective_dimension(const FisherMatrix& f, double alpha, double rank_tol) {
  EffectiveDimension e;
  const auto desc = f.spectrum_descending();
  e.rank_based = static_cast<std::size_t>(
      std::count_if(desc.begin(), desc.end(), [rank_tol](double v) { return v > rank_tol; }));
  e.ipr_based = effective_dim_ipr(desc);
  e.alpha = alpha;
  const std::vector<std::vector<double>> one{desc};
  e.threshold_based = effective_dim_threshold(one, alpha);
  return e;
}

}  // namespace qgen
