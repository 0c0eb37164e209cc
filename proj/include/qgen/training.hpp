#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qgen/circuit.hpp"
#include "qgen/fisher.hpp"
#include "qgen/gradients.hpp"

namespace qgen {

/// Feature rows with +-1 labels.
struct Batch {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  void validate() const;
};

/// A train/test partition. The row indices refer to the source dataset and
/// are used to check that the two sides are disjoint.
struct DataSplit {
  Batch train;
  Batch test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;

  void validate() const;
};

struct TrainConfig {
  std::size_t epochs = 20;
  double learning_rate = 0.1;
  double pinv_cutoff = 1e-8;
  std::size_t n_runs = 3;
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct RunResult {
  std::uint64_t seed = 0;
  ParameterVector theta_hat;
  std::vector<double> loss_curve;  // MSE after each epoch's step
  double train_risk = 0.0;         // bounded loss
  double test_risk = 0.0;
  double gap = 0.0;                // |test - train|
};

struct TrainResult {
  std::vector<RunResult> runs;
};

/// Mean of (y - f)^2 over the batch.
double mse_loss(const Circuit& circuit, std::span<const double> theta, const Batch& batch);

/// Mean of ((y - f) / 2)^2, which lies in [0, 1] and is 1-Lipschitz in f.
double bounded_loss(const Circuit& circuit, std::span<const double> theta, const Batch& batch);

/// Gradient of mse_loss, mean of 2 (f - y) grad f with parameter-shift grad f.
GradientVector loss_gradient(const Circuit& circuit, std::span<const double> theta, const Batch& batch);

/// theta - lr * pinv(F) * grad, clamped into [-2pi, 2pi].
ParameterVector natural_gradient_step(std::span<const double> theta, const GradientVector& grad,
                                      const FisherMatrix& fisher, double learning_rate, double cutoff);

/// Uniform draw from [-2pi, 2pi]^d.
ParameterVector random_parameters(std::size_t d, std::uint64_t seed);

/// Full-batch natural-gradient training, n_runs independent restarts seeded
/// base_seed + r. theta_hat is the lowest-training-loss iterate.
TrainResult train(const DataSplit& split, const Circuit& circuit, const TrainConfig& config);

/// One run of train().
RunResult train_run(const DataSplit& split, const Circuit& circuit, const TrainConfig& config,
                    std::uint64_t seed);

}  // namespace qgen
