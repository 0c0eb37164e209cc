#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "qgen/circuit.hpp"
#include "qgen/training.hpp"

namespace qgen {

/// Which scalar summary of the batch-averaged QFIM must stay above alpha
/// times its value at the centre.
enum class RegionCriterion { LogSqrtDet, MinEigenvalue };

/// Hypercube {theta : |theta - centre|_inf <= radius} intersected with Theta.
struct LocalRegion {
  ParameterVector center;
  double radius_delta = 0.0;
  double log_v_loc = 0.0;   // d ln(2 radius)
  double log_m_loc = 0.0;   // min ln sqrt(det F) over the sampled region
  double lipschitz_loc = 0.0;
  double alpha = 0.5;
  /// True when even the smallest radius failed the criterion.
  bool degenerate = false;

  bool valid() const;
};

struct RegionSearchOptions {
  std::size_t boundary_samples = 16;
  std::size_t interior_samples = 32;
  std::uint64_t seed = 0;
};

/// Log-space landscape probed by the search: `criterion` is compared against
/// ln(alpha) + criterion(centre); `log_sqrt_det` supplies ln m_loc.
struct RegionLandscape {
  std::function<double(std::span<const double>)> criterion;
  std::function<double(std::span<const double>)> log_sqrt_det;
};

/// Doubling search starting at alpha + 1e-3: the radius grows while every
/// sampled boundary point keeps the criterion above the threshold, capped
/// at 2 pi. Leaves lipschitz_loc at zero.
LocalRegion local_region_search(std::span<const double> center, double alpha, const RegionLandscape& landscape,
                                const RegionSearchOptions& options = {});

/// Landscape of the batch-averaged QFIM of `circuit` (eigenvalue floor 1e-12).
RegionLandscape qfim_landscape(const Circuit& circuit, const Batch& batch, RegionCriterion criterion);

/// Convenience overload over the circuit's QFIM landscape.
LocalRegion local_region_search(std::span<const double> center, const Circuit& circuit, const Batch& batch,
                                double alpha, RegionCriterion criterion = RegionCriterion::LogSqrtDet,
                                const RegionSearchOptions& options = {});

/// Points of the region: a uniform interior draw, or a boundary draw with one
/// random coordinate pinned to +-radius. Coordinates are clamped into Theta.
std::vector<double> sample_in_cube(std::span<const double> center, double radius, std::mt19937_64& rng);
std::vector<double> sample_on_cube_boundary(std::span<const double> center, double radius, std::mt19937_64& rng);

/// max_{theta, x} |grad_theta f(x)| over the batch, with f the noisy model.
double max_gradient_norm(const Circuit& circuit, std::span<const double> theta, const Batch& batch);

/// Max gradient norm over k samples of the region (the centre first, then
/// k - 1 uniform draws).
double local_lipschitz(std::span<const double> center, double radius, const Circuit& circuit, const Batch& batch,
                       std::size_t k = 32, std::uint64_t seed = 0);

}  // namespace qgen
