#include "qgen/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qgen/fisher.hpp"
#include "qgen/gradients.hpp"

namespace qgen {

namespace {

constexpr double kRadiusOffset = 1e-3;

}  // namespace

bool LocalRegion::valid() const { return radius_delta > alpha && radius_delta <= kTwoPi; }

std::vector<double> sample_in_cube(std::span<const double> center, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> p(center.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::clamp(center[i] + u(rng), ParameterSpace::kLower, ParameterSpace::kUpper);
  return p;
}

std::vector<double> sample_on_cube_boundary(std::span<const double> center, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::uniform_int_distribution<std::size_t> pick(0, center.size() - 1);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> offset(center.size());
  for (double& o : offset) o = u(rng);
  offset[pick(rng)] = sign(rng) ? radius : -radius;
  std::vector<double> p(center.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::clamp(center[i] + offset[i], ParameterSpace::kLower, ParameterSpace::kUpper);
  return p;
}

LocalRegion local_region_search(std::span<const double> center, double alpha, const RegionLandscape& landscape,
                                const RegionSearchOptions& options) {
  if (center.empty()) throw std::invalid_argument("local_region_search: empty centre");
  if (!(alpha > 0.0 && alpha + kRadiusOffset <= kTwoPi))
    throw std::invalid_argument("local_region_search: alpha must lie in (0, 2 pi)");
  std::mt19937_64 rng(options.seed);
  const double threshold = std::log(alpha) + landscape.criterion(center);

  LocalRegion region;
  region.center.values.assign(center.begin(), center.end());
  region.alpha = alpha;

  double radius = alpha + kRadiusOffset;
  double accepted = 0.0;
  while (true) {
    bool ok = true;
    for (std::size_t s = 0; s < options.boundary_samples && ok; ++s)
      ok = landscape.criterion(sample_on_cube_boundary(center, radius, rng)) >= threshold;
    if (!ok) break;
    accepted = radius;
    if (radius >= kTwoPi) break;
    radius = std::min(2.0 * radius, kTwoPi);
  }
  region.degenerate = accepted == 0.0;
  region.radius_delta = region.degenerate ? alpha + kRadiusOffset : accepted;
  region.log_v_loc = static_cast<double>(center.size()) * std::log(2.0 * region.radius_delta);

  double log_m = landscape.log_sqrt_det(center);
  for (std::size_t s = 0; s < options.interior_samples; ++s)
    log_m = std::min(log_m, landscape.log_sqrt_det(sample_in_cube(center, region.radius_delta, rng)));
  region.log_m_loc = log_m;
  return region;
}

RegionLandscape qfim_landscape(const Circuit& circuit, const Batch& batch, RegionCriterion criterion) {
  RegionLandscape l;
  l.log_sqrt_det = [&circuit, &batch](std::span<const double> theta) {
    return qfim_batch(circuit, batch.features, theta).log_sqrt_det(kProbabilityFloor);
  };
  if (criterion == RegionCriterion::LogSqrtDet) {
    l.criterion = l.log_sqrt_det;
  } else {
    l.criterion = [&circuit, &batch](std::span<const double> theta) {
      const auto ev = qfim_batch(circuit, batch.features, theta).eigenvalues();
      return std::log(std::max(ev.front(), kProbabilityFloor));
    };
  }
  return l;
}

LocalRegion local_region_search(std::span<const double> center, const Circuit& circuit, const Batch& batch,
                                double alpha, RegionCriterion criterion, const RegionSearchOptions& options) {
  return local_region_search(center, alpha, qfim_landscape(circuit, batch, criterion), options);
}

double max_gradient_norm(const Circuit& circuit, std::span<const double> theta, const Batch& batch) {
  double best = 0.0;
  for (const auto& x : batch.features) best = std::max(best, param_shift_gradient(circuit, x, theta).norm());
  return best;
}

double local_lipschitz(std::span<const double> center, double radius, const Circuit& circuit, const Batch& batch,
                       std::size_t k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("local_lipschitz: need at least one sample");
  std::mt19937_64 rng(seed);
  double best = max_gradient_norm(circuit, center, batch);
  for (std::size_t s = 1; s < k; ++s)
    best = std::max(best, max_gradient_norm(circuit, sample_in_cube(center, radius, rng), batch));
  return best;
}

}  // namespace qgen
