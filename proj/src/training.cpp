#include "qgen/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace qgen {

void Batch::validate() const {
  if (features.size() != labels.size()) throw std::invalid_argument("Batch: feature/label count mismatch");
  for (int y : labels)
    if (y != 1 && y != -1) throw std::invalid_argument("Batch: labels must be -1 or +1");
}

void DataSplit::validate() const {
  train.validate();
  test.validate();
  if (train.empty()) throw std::invalid_argument("DataSplit: empty training set");
  if (test.empty()) throw std::invalid_argument("DataSplit: empty test set");
  if (!train_rows.empty() || !test_rows.empty()) {
    if (train_rows.size() != train.size() || test_rows.size() != test.size())
      throw std::invalid_argument("DataSplit: row indices do not match batch sizes");
    const std::set<std::size_t> seen(train_rows.begin(), train_rows.end());
    for (std::size_t r : test_rows)
      if (seen.count(r)) throw std::invalid_argument("DataSplit: row " + std::to_string(r) + " in both splits");
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (n_runs < 1) throw std::invalid_argument("TrainConfig: n_runs must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning rate must be positive");
  if (!(pinv_cutoff > 0.0)) throw std::invalid_argument("TrainConfig: pinv cutoff must be positive");
}

namespace {

void require_nonempty(const Batch& batch) {
  if (batch.empty()) throw std::invalid_argument("loss: empty batch");
  batch.validate();
}

}  // namespace

double mse_loss(const Circuit& circuit, std::span<const double> theta, const Batch& batch) {
  require_nonempty(batch);
  double s = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double r = batch.labels[i] - circuit.model_value(batch.features[i], theta);
    s += r * r;
  }
  return s / static_cast<double>(batch.size());
}

double bounded_loss(const Circuit& circuit, std::span<const double> theta, const Batch& batch) {
  return 0.25 * mse_loss(circuit, theta, batch);
}

GradientVector loss_gradient(const Circuit& circuit, std::span<const double> theta, const Batch& batch) {
  require_nonempty(batch);
  GradientVector g{std::vector<double>(circuit.parameter_count(), 0.0)};
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double residual = circuit.model_value(batch.features[i], theta) - batch.labels[i];
    const GradientVector df = param_shift_gradient(circuit, batch.features[i], theta);
    for (std::size_t j = 0; j < g.values.size(); ++j) g.values[j] += 2.0 * residual * df.values[j];
  }
  for (double& v : g.values) v /= static_cast<double>(batch.size());
  return g;
}

ParameterVector natural_gradient_step(std::span<const double> theta, const GradientVector& grad,
                                      const FisherMatrix& fisher, double learning_rate, double cutoff) {
  const std::size_t d = theta.size();
  if (grad.size() != d || fisher.d != d)
    throw std::invalid_argument("natural_gradient_step: dimension mismatch");
  const ComplexMatrix pinv = pseudo_inverse(fisher.as_matrix(), cutoff);
  ParameterVector next{std::vector<double>(theta.begin(), theta.end())};
  for (std::size_t i = 0; i < d; ++i) {
    double step = 0.0;
    for (std::size_t j = 0; j < d; ++j) step += pinv(i, j).real() * grad.values[j];
    next.values[i] = std::clamp(theta[i] - learning_rate * step, ParameterSpace::kLower, ParameterSpace::kUpper);
  }
  return next;
}

ParameterVector random_parameters(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(ParameterSpace::kLower, ParameterSpace::kUpper);
  ParameterVector theta{std::vector<double>(d)};
  for (double& v : theta.values) v = u(rng);
  return theta;
}

RunResult train_run(const DataSplit& split, const Circuit& circuit, const TrainConfig& config,
                    std::uint64_t seed) {
  split.validate();
  config.validate();
  RunResult run;
  run.seed = seed;
  ParameterVector theta = random_parameters(circuit.parameter_count(), seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const GradientVector grad = loss_gradient(circuit, theta.values, split.train);
    const FisherMatrix fisher = qfim_batch(circuit, split.train.features, theta.values);
    theta = natural_gradient_step(theta.values, grad, fisher, config.learning_rate, config.pinv_cutoff);
    const double loss = mse_loss(circuit, theta.values, split.train);
    run.loss_curve.push_back(loss);
    if (loss < best) {
      best = loss;
      run.theta_hat = theta;
    }
  }
  if (run.theta_hat.values.empty()) run.theta_hat = theta;  // every epoch produced NaN
  run.train_risk = bounded_loss(circuit, run.theta_hat.values, split.train);
  run.test_risk = bounded_loss(circuit, run.theta_hat.values, split.test);
  run.gap = std::abs(run.test_risk - run.train_risk);
  return run;
}

TrainResult train(const DataSplit& split, const Circuit& circuit, const TrainConfig& config) {
  config.validate();
  TrainResult result;
  for (std::size_t r = 0; r < config.n_runs; ++r)
    result.runs.push_back(train_run(split, circuit, config, config.base_seed + r));
  return result;
}

}  // namespace qgen
