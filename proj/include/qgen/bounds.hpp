#pragma once

#include <cstddef>
#include <string_view>

namespace qgen {

// All logarithms are natural. Volumes and determinants are carried in log
// space so that d up to 1e5 stays finite.

struct BallVolume {
  double log_value;
  double value;  // may underflow to 0 for large d
};

/// Volume of the unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1).
BallVolume unit_ball_volume(std::size_t d);

/// ln N(eps) <= C - d ln eps with C = ln V_Theta - ln V_d - ln m.
double covering_log_bound(double epsilon, std::size_t d, double log_v_theta, double log_m);

/// C' = ln V_Theta - ln V_d - ln m + d ln L.
double complexity_constant(std::size_t d, double log_v_theta, double log_m, double lipschitz);

/// 6 sqrt(pi d) exp(C'/d) / sqrt(N).
double rademacher_bound(double d, std::size_t n, double c_prime);

/// 3 sqrt(ln(2/delta) / 2N).
double confidence_term(std::size_t n, double conf_delta);

struct BoundInputs {
  std::size_t d = 0;
  std::size_t n = 0;
  /// Failure probability of the bound. Distinct from the local radius.
  double conf_delta = 0.05;
  double log_v_theta = 0.0;
  /// ln of the lower bound on sqrt(det F) over the region.
  double log_m = 0.0;
  /// Bound on the gradient norm of the noisy model.
  double lipschitz = 1.0;
  double empirical_risk = 0.0;

  void validate() const;
};

/// Region-specific replacements for the global constants.
struct LocalConstants {
  double log_v_loc = 0.0;
  double log_m_loc = 0.0;
  double lipschitz_loc = 1.0;
};

enum class BoundVariant { Global, Local, EffectiveDimension };
std::string_view to_string(BoundVariant v);

struct BoundReport {
  BoundVariant variant = BoundVariant::Global;
  double c_prime = 0.0;
  double complexity_term = 0.0;
  double confidence_term = 0.0;
  double empirical_risk = 0.0;
  double bound = 0.0;
};

/// R_hat + 12 sqrt(pi d) exp(C'/d) / sqrt(N) + 3 sqrt(ln(2/delta) / 2N).
BoundReport generalization_bound(const BoundInputs& in);

/// Same decomposition with C_loc built from the local constants.
BoundReport local_bound(const BoundInputs& in, const LocalConstants& local);

/// Complexity term evaluated at d_eff in place of d, with the supplied C_loc.
/// Throws when d_eff lies outside [1, d].
BoundReport effdim_bound(const BoundInputs& in, double d_eff, double c_loc);

/// sqrt(d) exp(C'/d).
double k_complexity(double d, double c_prime);

/// Samples needed to bring the complexity term down to 12 sqrt(pi): k^2
/// reported at one decimal, rounded up to an integer.
std::size_t required_samples(double d, double c_prime);

/// int_0^1 sqrt(C' - d ln eps) d eps by adaptive Gauss-Kronrod quadrature
/// (after eps = exp(-t)). Requires C' >= 0.
double dudley_integral(double d, double c_prime);

/// 12 / sqrt(N) times dudley_integral.
double dudley_numeric(double d, double c_prime, std::size_t n);

}  // namespace qgen
