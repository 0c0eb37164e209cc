#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qgen/circuit.hpp"
#include "qgen/dataset.hpp"
#include "qgen/region.hpp"
#include "qgen/training.hpp"

namespace qgen {

enum class DatasetKind { Iris, Digits };

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::Iris;
  std::size_t n_qubits = 2;
  std::vector<std::size_t> layers{2};
  std::vector<double> noise_rates{0.05, 0.1, 0.5};
  std::vector<std::size_t> train_sizes{20, 40, 60, 80};
  std::size_t epochs = 20;
  std::size_t n_runs = 3;
  std::uint64_t base_seed = 0;
  double conf_delta = 0.05;
  double alpha = 0.5;
  double learning_rate = 0.1;
  double pinv_cutoff = 1e-8;
  std::filesystem::path out_dir = "results";

  // Optional extras.
  std::size_t global_samples = 64;
  std::size_t lipschitz_samples = 32;
  RegionCriterion local_criterion = RegionCriterion::LogSqrtDet;
  NoiseModel noise_model = NoiseModel::Register;
  std::size_t pca_components = 8;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Parses the JSON config. Unknown keys, wrong types and invalid values
/// raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string to_string(DatasetKind kind);

/// One (dataset, layers, p, N_train, run) cell.
struct ResultRow {
  std::string dataset;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t n_layers = 0;
  double p = 0.0;
  std::size_t n_train = 0;
  double train_risk = 0.0;
  double test_risk = 0.0;
  double gap = 0.0;
  double global_bound = 0.0;
  double local_bound = 0.0;
  double effdim_bound = 0.0;
  double radius_delta = 0.0;
  double log_m_loc = 0.0;
  double L_loc = 0.0;
  double d_eff_ipr = 0.0;

  // Diagnostics kept out of results.csv (written to notes.csv).
  std::string status = "ok";
  std::string detail;
  double log_m = 0.0;
  double L_global = 0.0;
  std::size_t d_eff_rank = 0;
  bool region_degenerate = false;
  std::vector<double> theta_hat_spectrum;  // QFIM eigenvalues at theta_hat, descending
  // Effective-dimension audit over every QFIM the cell computed at global
  // samples and at theta_hat.
  std::size_t qfim_audited = 0;
  double min_ipr = 0.0;
  double max_ipr = 0.0;
  double worst_ipr_excess = 0.0;  // max of ipr - rank
};

/// Dataset files resolved from a directory holding iris.csv / digits.csv.
Dataset load_dataset(DatasetKind kind, const std::filesystem::path& data_dir);

/// Scaled train/test batches for one cell: PCA (digits only) and min-max
/// scaling are fitted on the training rows and applied to the test rows.
DataSplit prepare_split(const Dataset& data, DatasetKind kind, std::size_t n_train, std::uint64_t seed,
                        std::size_t pca_components = 8);

/// Seed of run r: base_seed + r.
std::uint64_t run_seed(const ExperimentConfig& config, std::size_t run);

/// Runs one cell end to end.
ResultRow run_cell(const ExperimentConfig& config, const Dataset& data, std::size_t n_layers, double p,
                   std::size_t n_train, std::size_t run);

/// Every cell of the grid, ordered layers > p > N_train > run. A failing cell
/// becomes an error row (status != "ok", numeric fields NaN).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const Dataset& data);
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const std::filesystem::path& data_dir);

/// results.csv column order.
const std::vector<std::string>& result_columns();

/// Writes results.csv, notes.csv, figure_<dataset>.csv (mean and sample std
/// over runs per (layers, p, N_train)) and table1.csv into out_dir.
void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& out_dir);

struct Table1Row {
  std::size_t d;
  double k;
  std::size_t n;
  double third_term;
};

inline constexpr double kTable1Delta = 0.005;

/// The k(d) / required-sample table for d in {1, 10, ..., 100000}.
std::vector<Table1Row> table1(double c_prime = 1.0, double conf_delta = kTable1Delta);
void write_table1(const std::vector<Table1Row>& rows, const std::filesystem::path& path);

/// printf("%.9g").
std::string format_float(double v);

}  // namespace qgen
