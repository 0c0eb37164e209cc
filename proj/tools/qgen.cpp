// qgen: command-line front end for the noisy-circuit generalization toolkit.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qgen/bounds.hpp"
#include "qgen/errors.hpp"
#include "qgen/experiment.hpp"
#include "qgen/fisher.hpp"

#ifndef QGEN_DEFAULT_DATA_DIR
#define QGEN_DEFAULT_DATA_DIR "data"
#endif

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

std::vector<double> parse_angles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw CLI::ValidationError("--point", "cannot parse angle '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::filesystem::path& data_dir) {
  const qgen::ExperimentConfig config = qgen::load_config(config_path);
  const auto rows = qgen::run_experiment(config, data_dir);
  qgen::emit_results(rows, config.out_dir);
  std::size_t errors = 0;
  for (const auto& r : rows) errors += r.status != "ok";
  std::cout << "wrote " << rows.size() << " rows to " << (config.out_dir / "results.csv").string();
  if (errors) std::cout << " (" << errors << " error rows, see notes.csv)";
  std::cout << '\n';
  return errors == rows.size() ? kNumeric : kOk;
}

int cmd_bounds(std::size_t d, std::size_t n, double c_prime, double delta, double risk) {
  if (d < 1 || n < 1 || !(delta > 0.0 && delta < 1.0)) throw CLI::ValidationError("bounds", "need d >= 1, n >= 1, 0 < delta < 1");
  const double complexity = 2.0 * qgen::rademacher_bound(static_cast<double>(d), n, c_prime);
  const double confidence = qgen::confidence_term(n, delta);
  std::cout << "empirical_risk  " << qgen::format_float(risk) << '\n'
            << "complexity_term " << qgen::format_float(complexity) << '\n'
            << "confidence_term " << qgen::format_float(confidence) << '\n'
            << "bound           " << qgen::format_float(risk + complexity + confidence) << '\n';
  return kOk;
}

int cmd_table1(double c_prime) {
  std::cout << "d,k,N,third_term\n";
  for (const auto& r : qgen::table1(c_prime)) {
    char k[32], t[32];
    std::snprintf(k, sizeof k, "%.2f", r.k);
    std::snprintf(t, sizeof t, "%.4f", r.third_term);
    std::cout << r.d << ',' << k << ',' << r.n << ',' << t << '\n';
  }
  return kOk;
}

int cmd_qfim(const std::string& config_path, const std::string& point, const std::filesystem::path& data_dir) {
  const qgen::ExperimentConfig config = qgen::load_config(config_path);
  const std::vector<double> theta = parse_angles(point);
  const qgen::Dataset data = qgen::load_dataset(config.dataset, data_dir);
  const qgen::DataSplit split = qgen::prepare_split(data, config.dataset, config.train_sizes.front(),
                                                    qgen::run_seed(config, 0), config.pca_components);
  qgen::CircuitSpec spec;
  spec.n_qubits = config.n_qubits;
  spec.n_layers = config.layers.front();
  spec.noise_rate = config.noise_rates.front();
  spec.noise_model = config.noise_model;
  const qgen::Circuit circuit(spec);
  if (theta.size() != circuit.parameter_count())
    throw CLI::ValidationError("--point", "expected " + std::to_string(circuit.parameter_count()) + " angles");

  const qgen::FisherMatrix f = qgen::qfim_batch(circuit, split.train.features, theta);
  std::cout << "# batch-averaged QFIM, d = " << f.d << ", N = " << split.train.size() << ", p = "
            << qgen::format_float(spec.noise_rate) << '\n';
  for (std::size_t i = 0; i < f.d; ++i) {
    for (std::size_t j = 0; j < f.d; ++j) std::cout << (j ? "," : "") << qgen::format_float(f(i, j));
    std::cout << '\n';
  }
  const auto spectrum = f.spectrum_descending();
  std::cout << "# eigenvalues";
  for (double v : spectrum) std::cout << ' ' << qgen::format_float(v);
  std::cout << '\n';
  const auto eff = qgen::effective_dimension(f, config.alpha);
  std::cout << "# d_eff rank " << eff.rank_based << ", ipr " << qgen::format_float(eff.ipr_based) << ", threshold(alpha="
            << qgen::format_float(config.alpha) << ") " << eff.threshold_based << '\n'
            << "# log sqrt det " << qgen::format_float(f.log_sqrt_det()) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy parameterized-circuit Fisher geometry and generalization bounds"};
  app.require_subcommand(1);
  std::string data_dir = QGEN_DEFAULT_DATA_DIR;
  app.add_option("--data-dir", data_dir, "Directory holding iris.csv and digits.csv");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment grid and write CSV results");
  run->add_option("--config", config_path, "Experiment JSON config")->required();

  std::size_t d = 0, n = 0;
  double c_prime = 0.0, delta = 0.05, risk = 0.0;
  auto* bounds = app.add_subcommand("bounds", "Print the three-term generalization bound");
  bounds->add_option("--d", d, "Parameter dimension")->required();
  bounds->add_option("--n", n, "Training-set size")->required();
  bounds->add_option("--cprime", c_prime, "Complexity constant C'")->required();
  bounds->add_option("--delta", delta, "Confidence parameter")->required();
  bounds->add_option("--risk", risk, "Empirical risk (default 0)");

  double table_cprime = 1.0;
  auto* t1 = app.add_subcommand("table1", "Print the k(d) / sample-size scaling table");
  t1->add_option("--cprime", table_cprime, "Complexity constant C' (default 1)");

  std::string point;
  auto* qfim = app.add_subcommand("qfim", "Batch-averaged QFIM at a parameter point");
  qfim->add_option("--config", config_path, "Experiment JSON config")->required();
  qfim->add_option("--point", point, "Comma-separated angles")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, data_dir);
    if (*bounds) return cmd_bounds(d, n, c_prime, delta, risk);
    if (*t1) return cmd_table1(table_cprime);
    if (*qfim) return cmd_qfim(config_path, point, data_dir);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const qgen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const qgen::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
