#include "qgen/bounds.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qgen {

BallVolume unit_ball_volume(std::size_t d) {
  if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
  const double half = 0.5 * static_cast<double>(d);
  const double log_v = half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
  return {log_v, std::exp(log_v)};
}

double covering_log_bound(double epsilon, std::size_t d, double log_v_theta, double log_m) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("covering_log_bound: epsilon must be positive");
  const double c = log_v_theta - unit_ball_volume(d).log_value - log_m;
  return c - static_cast<double>(d) * std::log(epsilon);
}

double complexity_constant(std::size_t d, double log_v_theta, double log_m, double lipschitz) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("complexity_constant: Lipschitz bound must be positive");
  return log_v_theta - unit_ball_volume(d).log_value - log_m + static_cast<double>(d) * std::log(lipschitz);
}

double rademacher_bound(double d, std::size_t n, double c_prime) {
  if (n < 1) throw std::invalid_argument("rademacher_bound: N must be >= 1");
  return 6.0 * std::sqrt(std::numbers::pi * d) * std::exp(c_prime / d) / std::sqrt(static_cast<double>(n));
}

double confidence_term(std::size_t n, double conf_delta) {
  return 3.0 * std::sqrt(std::log(2.0 / conf_delta) / (2.0 * static_cast<double>(n)));
}

void BoundInputs::validate() const {
  if (d < 1) throw std::invalid_argument("BoundInputs: d must be >= 1");
  if (n < 1) throw std::invalid_argument("BoundInputs: N must be >= 1");
  if (!(conf_delta > 0.0 && conf_delta < 1.0)) throw std::invalid_argument("BoundInputs: delta must lie in (0, 1)");
  if (!(lipschitz > 0.0)) throw std::invalid_argument("BoundInputs: Lipschitz bound must be positive");
}

std::string_view to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::Global: return "global";
    case BoundVariant::Local: return "local";
    case BoundVariant::EffectiveDimension: return "effective_dimension";
  }
  return "unknown";
}

namespace {

BoundReport assemble(BoundVariant variant, const BoundInputs& in, double dim, double c) {
  BoundReport r;
  r.variant = variant;
  r.c_prime = c;
  r.complexity_term = 2.0 * rademacher_bound(dim, in.n, c);
  r.confidence_term = confidence_term(in.n, in.conf_delta);
  r.empirical_risk = in.empirical_risk;
  r.bound = in.empirical_risk + r.complexity_term + r.confidence_term;
  return r;
}

}  // namespace

BoundReport generalization_bound(const BoundInputs& in) {
  in.validate();
  const double c = complexity_constant(in.d, in.log_v_theta, in.log_m, in.lipschitz);
  return assemble(BoundVariant::Global, in, static_cast<double>(in.d), c);
}

BoundReport local_bound(const BoundInputs& in, const LocalConstants& local) {
  in.validate();
  const double c = complexity_constant(in.d, local.log_v_loc, local.log_m_loc, local.lipschitz_loc);
  return assemble(BoundVariant::Local, in, static_cast<double>(in.d), c);
}

BoundReport effdim_bound(const BoundInputs& in, double d_eff, double c_loc) {
  in.validate();
  if (!(d_eff >= 1.0 && d_eff <= static_cast<double>(in.d))) {
    throw std::invalid_argument("effdim_bound: effective dimension " + std::to_string(d_eff) +
                                " outside [1, " + std::to_string(in.d) + "]");
  }
  return assemble(BoundVariant::EffectiveDimension, in, d_eff, c_loc);
}

double k_complexity(double d, double c_prime) {
  if (!(d >= 1.0)) throw std::invalid_argument("k_complexity: d must be >= 1");
  return std::sqrt(d) * std::exp(c_prime / d);
}

std::size_t required_samples(double d, double c_prime) {
  const double k = k_complexity(d, c_prime);
  const double k2 = std::round(k * k * 10.0) / 10.0;
  return static_cast<std::size_t>(std::ceil(k2));
}

double dudley_integral(double d, double c_prime) {
  if (!(c_prime >= 0.0)) throw std::invalid_argument("dudley_integral: C' must be nonnegative");
  if (!(d > 0.0)) throw std::invalid_argument("dudley_integral: d must be positive");
  // eps = e^{-t} maps (0, 1] onto [0, inf): int_0^inf sqrt(C' + d t) e^{-t} dt.
  auto integrand = [&](double t) { return std::sqrt(c_prime + d * t) * std::exp(-t); };
  // exp-sinh copes with the sqrt endpoint singularity at C' = 0.
  boost::math::quadrature::exp_sinh<double> quad;
  double error = 0.0, l1 = 0.0;
  const double value = quad.integrate(integrand, 1e-14, &error, &l1);
  if (!(error <= 1e-9)) throw std::runtime_error("dudley_integral: quadrature did not converge");
  return value;
}

double dudley_numeric(double d, double c_prime, std::size_t n) {
  if (n < 1) throw std::invalid_argument("dudley_numeric: N must be >= 1");
  return 12.0 / std::sqrt(static_cast<double>(n)) * dudley_integral(d, c_prime);
}

}  // namespace qgen
