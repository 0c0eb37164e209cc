#include "qgen/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "qgen/bounds.hpp"
#include "qgen/errors.hpp"
#include "qgen/fisher.hpp"

namespace qgen {

using nlohmann::json;

std::string to_string(DatasetKind kind) { return kind == DatasetKind::Iris ? "iris" : "digits"; }

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (n_qubits < 2 || n_qubits > 6) fail("n_qubits must be in [2, 6]");
  if (layers.empty() || noise_rates.empty() || train_sizes.empty()) fail("layers, noise_rates and train_sizes must be non-empty");
  for (auto l : layers)
    if (l < 1) fail("layers entries must be >= 1");
  for (double p : noise_rates)
    if (!(p >= 0.0 && p < 1.0)) fail("noise_rates entries must lie in [0, 1)");
  for (auto n : train_sizes)
    if (n < 2) fail("train_sizes entries must be >= 2");
  if (epochs < 1) fail("epochs must be >= 1");
  if (n_runs < 1) fail("n_runs must be >= 1");
  if (!(conf_delta > 0.0 && conf_delta < 1.0)) fail("conf_delta must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < kTwoPi)) fail("alpha must lie in (0, 2 pi)");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(pinv_cutoff > 0.0)) fail("pinv_cutoff must be positive");
  if (global_samples < 1 || lipschitz_samples < 1) fail("sample counts must be >= 1");
  if (out_dir.empty()) fail("out_dir must be non-empty");
}

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("config key '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<std::size_t> get_counts(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<long long>() < 0)
      throw ConfigError("config key '" + key + "' must hold non-negative integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> required{"dataset",   "n_qubits", "layers",     "noise_rates",   "train_sizes",
                                              "epochs",    "n_runs",   "base_seed",  "conf_delta",    "alpha",
                                              "learning_rate", "pinv_cutoff", "out_dir"};
  static const std::set<std::string> optional{"global_samples", "lipschitz_samples", "local_criterion",
                                              "noise_model",    "pca_components",    "threads"};
  for (const auto& [key, _] : j.items())
    if (!required.count(key) && !optional.count(key)) throw ConfigError("unknown config key '" + key + "'");
  for (const auto& key : required)
    if (!j.contains(key)) throw ConfigError("missing config key '" + key + "'");

  ExperimentConfig c;
  const auto dataset = get_as<std::string>(j, "dataset");
  if (dataset == "iris") c.dataset = DatasetKind::Iris;
  else if (dataset == "digits") c.dataset = DatasetKind::Digits;
  else throw ConfigError("dataset must be \"iris\" or \"digits\"");
  c.n_qubits = get_count(j, "n_qubits");
  c.layers = get_counts(j, "layers");
  c.noise_rates = get_as<std::vector<double>>(j, "noise_rates");
  c.train_sizes = get_counts(j, "train_sizes");
  c.epochs = get_count(j, "epochs");
  c.n_runs = get_count(j, "n_runs");
  c.base_seed = get_count(j, "base_seed");
  c.conf_delta = get_as<double>(j, "conf_delta");
  c.alpha = get_as<double>(j, "alpha");
  c.learning_rate = get_as<double>(j, "learning_rate");
  c.pinv_cutoff = get_as<double>(j, "pinv_cutoff");
  c.out_dir = get_as<std::string>(j, "out_dir");

  if (j.contains("global_samples")) c.global_samples = get_count(j, "global_samples");
  if (j.contains("lipschitz_samples")) c.lipschitz_samples = get_count(j, "lipschitz_samples");
  if (j.contains("pca_components")) c.pca_components = get_count(j, "pca_components");
  if (j.contains("threads")) c.threads = get_count(j, "threads");
  if (j.contains("local_criterion")) {
    const auto v = get_as<std::string>(j, "local_criterion");
    if (v == "determinant") c.local_criterion = RegionCriterion::LogSqrtDet;
    else if (v == "min_eigenvalue") c.local_criterion = RegionCriterion::MinEigenvalue;
    else throw ConfigError("local_criterion must be \"determinant\" or \"min_eigenvalue\"");
  }
  if (j.contains("noise_model")) {
    const auto v = get_as<std::string>(j, "noise_model");
    if (v == "register") c.noise_model = NoiseModel::Register;
    else if (v == "per_qubit") c.noise_model = NoiseModel::PerQubit;
    else throw ConfigError("noise_model must be \"register\" or \"per_qubit\"");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Dataset load_dataset(DatasetKind kind, const std::filesystem::path& data_dir) {
  return kind == DatasetKind::Iris ? load_iris(data_dir / "iris.csv") : load_digits(data_dir / "digits.csv");
}

DataSplit prepare_split(const Dataset& data, DatasetKind kind, std::size_t n_train, std::uint64_t seed,
                        std::size_t pca_components) {
  const SplitIndices idx = stratified_split(data.labels, n_train, seed);
  DataSplit split;
  split.train = select_rows(data.features, data.labels, idx.train);
  split.test = select_rows(data.features, data.labels, idx.test);
  split.train_rows = idx.train;
  split.test_rows = idx.test;
  if (kind == DatasetKind::Digits) {
    const PcaResult pca = pca_reduce(split.train.features, std::min(pca_components, split.train.size()));
    split.test.features = pca.model.transform(split.test.features);
    split.train.features = pca.projected;
  }
  const MinMaxScaler scaler = MinMaxScaler::fit(split.train.features);
  split.train.features = scaler.transform(split.train.features);
  split.test.features = scaler.transform(split.test.features);
  return split;
}

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t run) { return config.base_seed + run; }

namespace {

// Independent stream per (seed, purpose).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SpectrumAudit {
  std::size_t count = 0;
  double min_ipr = std::numeric_limits<double>::infinity();
  double max_ipr = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();

  void add(std::span<const double> eigenvalues) {
    const double ipr = effective_dim_ipr(eigenvalues);
    const auto rank = std::count_if(eigenvalues.begin(), eigenvalues.end(), [](double v) { return v > kSldFloor; });
    ++count;
    min_ipr = std::min(min_ipr, ipr);
    max_ipr = std::max(max_ipr, ipr);
    worst_excess = std::max(worst_excess, ipr - static_cast<double>(rank));
  }
};

double log_sqrt_det_of(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double v : eigenvalues) s += std::log(std::max(v, kProbabilityFloor));
  return 0.5 * s;
}

}  // namespace

ResultRow run_cell(const ExperimentConfig& config, const Dataset& data, std::size_t n_layers, double p,
                   std::size_t n_train, std::size_t run) {
  ResultRow row;
  row.dataset = to_string(config.dataset);
  row.run = run;
  row.seed = run_seed(config, run);
  row.n_layers = n_layers;
  row.p = p;
  row.n_train = n_train;

  const DataSplit split = prepare_split(data, config.dataset, n_train, row.seed, config.pca_components);
  CircuitSpec spec;
  spec.n_qubits = config.n_qubits;
  spec.n_layers = n_layers;
  spec.noise_rate = p;
  spec.noise_model = config.noise_model;
  const Circuit circuit(spec);
  const std::size_t d = circuit.parameter_count();

  TrainConfig tc;
  tc.epochs = config.epochs;
  tc.learning_rate = config.learning_rate;
  tc.pinv_cutoff = config.pinv_cutoff;
  tc.n_runs = 1;
  tc.base_seed = row.seed;
  const RunResult trained = train_run(split, circuit, tc, row.seed);
  row.train_risk = trained.train_risk;
  row.test_risk = trained.test_risk;
  row.gap = trained.gap;

  // Global constants from uniform samples of Theta.
  const RegionLandscape landscape = qfim_landscape(circuit, split.train, config.local_criterion);
  std::mt19937_64 global_rng(derive_seed(row.seed, 1));
  SpectrumAudit audit;
  double log_m = std::numeric_limits<double>::infinity();
  double lipschitz = 0.0;
  for (std::size_t s = 0; s < config.global_samples; ++s) {
    const std::vector<double> theta = sample_in_cube(std::vector<double>(d, 0.0), kTwoPi, global_rng);
    const std::vector<double> ev = qfim_batch(circuit, split.train.features, theta).eigenvalues();
    audit.add(ev);
    log_m = std::min(log_m, log_sqrt_det_of(ev));
    lipschitz = std::max(lipschitz, max_gradient_norm(circuit, theta, split.train));
  }

  RegionSearchOptions opts;
  opts.seed = derive_seed(row.seed, 2);
  LocalRegion region = local_region_search(trained.theta_hat.values, config.alpha, landscape, opts);
  region.lipschitz_loc = local_lipschitz(trained.theta_hat.values, region.radius_delta, circuit, split.train,
                                         config.lipschitz_samples, derive_seed(row.seed, 3));
  row.radius_delta = region.radius_delta;
  row.log_m_loc = region.log_m_loc;
  row.L_loc = region.lipschitz_loc;
  row.region_degenerate = region.degenerate;

  // The local region is a subset of Theta, so its samples also bound the
  // global infimum / supremum.
  std::string flags;
  if (region.log_m_loc < log_m) flags += "log_m lowered by local samples;";
  if (region.lipschitz_loc > lipschitz) flags += "L raised by local samples;";
  if (region.degenerate) flags += "local region degenerate;";
  log_m = std::min(log_m, region.log_m_loc);
  lipschitz = std::max(lipschitz, region.lipschitz_loc);
  row.log_m = log_m;
  row.L_global = lipschitz;

  BoundInputs in;
  in.d = d;
  in.n = n_train;
  in.conf_delta = config.conf_delta;
  in.log_v_theta = ParameterSpace{d}.log_volume();
  in.log_m = log_m;
  in.lipschitz = lipschitz;
  in.empirical_risk = row.train_risk;
  const BoundReport global = generalization_bound(in);
  const BoundReport local = local_bound(in, {region.log_v_loc, region.log_m_loc, region.lipschitz_loc});
  row.global_bound = global.bound;
  row.local_bound = local.bound;

  const FisherMatrix f_hat = qfim_batch(circuit, split.train.features, trained.theta_hat.values);
  row.theta_hat_spectrum = f_hat.spectrum_descending();
  audit.add(f_hat.eigenvalues());
  row.qfim_audited = audit.count;
  row.min_ipr = audit.min_ipr;
  row.max_ipr = audit.max_ipr;
  row.worst_ipr_excess = audit.worst_excess;
  row.d_eff_rank = effective_dim_rank(f_hat, kSldFloor);
  row.d_eff_ipr = std::clamp(effective_dim_ipr(row.theta_hat_spectrum), 1.0, static_cast<double>(d));
  row.effdim_bound = effdim_bound(in, row.d_eff_ipr, local.c_prime).bound;

  if (region.log_v_loc > in.log_v_theta) flags += "local volume exceeds global;";
  if (!(local.bound <= global.bound)) flags += "local bound above global;";
  row.detail = flags;
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const Dataset& data) {
  config.validate();
  struct Cell {
    std::size_t layers;
    double p;
    std::size_t n_train;
    std::size_t run;
  };
  std::vector<Cell> cells;
  for (auto l : config.layers)
    for (double p : config.noise_rates)
      for (auto n : config.train_sizes)
        for (std::size_t r = 0; r < config.n_runs; ++r) cells.push_back({l, p, n, r});

  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      try {
        rows[i] = run_cell(config, data, c.layers, c.p, c.n_train, c.run);
      } catch (const std::exception& e) {
        ResultRow err;
        err.dataset = to_string(config.dataset);
        err.run = c.run;
        err.seed = run_seed(config, c.run);
        err.n_layers = c.layers;
        err.p = c.p;
        err.n_train = c.n_train;
        for (double* f : {&err.train_risk, &err.test_risk, &err.gap, &err.global_bound, &err.local_bound,
                          &err.effdim_bound, &err.radius_delta, &err.log_m_loc, &err.L_loc, &err.d_eff_ipr})
          *f = kNaN;
        err.status = "error";
        err.detail = e.what();
        rows[i] = std::move(err);
      }
    }
  };
  std::size_t n_threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const std::filesystem::path& data_dir) {
  return run_experiment(config, load_dataset(config.dataset, data_dir));
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "dataset",      "run",         "seed",         "n_layers",     "p",         "N_train",
      "train_risk",   "test_risk",   "gap",          "global_bound", "local_bound", "effdim_bound",
      "radius_delta", "log_m_loc",   "L_loc",        "d_eff_ipr"};
  return cols;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  if (v.size() < 2) return {m, 0.0};
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, std::sqrt(s / static_cast<double>(v.size() - 1))};
}

}  // namespace

void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& out_dir) {
  if (rows.empty()) throw std::invalid_argument("emit_results: no rows");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

  {
    auto out = open_for_write(out_dir / "results.csv");
    out << join(result_columns()) << '\n';
    for (const auto& r : rows) {
      out << r.dataset << ',' << r.run << ',' << r.seed << ',' << r.n_layers << ',' << format_float(r.p) << ','
          << r.n_train;
      for (double v : {r.train_risk, r.test_risk, r.gap, r.global_bound, r.local_bound, r.effdim_bound,
                       r.radius_delta, r.log_m_loc, r.L_loc, r.d_eff_ipr})
        out << ',' << format_float(v);
      out << '\n';
    }
  }
  {
    auto out = open_for_write(out_dir / "notes.csv");
    out << "dataset,run,seed,n_layers,p,N_train,status,log_m,L_global,d_eff_rank,region_degenerate,qfim_audited,"
           "min_ipr,max_ipr,worst_ipr_excess,detail\n";
    for (const auto& r : rows) {
      out << r.dataset << ',' << r.run << ',' << r.seed << ',' << r.n_layers << ',' << format_float(r.p) << ','
          << r.n_train << ',' << r.status << ',' << format_float(r.log_m) << ',' << format_float(r.L_global) << ','
          << r.d_eff_rank << ',' << (r.region_degenerate ? 1 : 0) << ',' << r.qfim_audited << ','
          << format_float(r.min_ipr) << ',' << format_float(r.max_ipr) << ',' << format_float(r.worst_ipr_excess) << ','
          << csv_escape(r.detail) << '\n';
    }
  }
  {
    using Key = std::tuple<std::string, std::size_t, double, std::size_t>;
    std::map<Key, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows)
      if (r.status == "ok") groups[{r.dataset, r.n_layers, r.p, r.n_train}].push_back(&r);
    std::set<std::string> datasets;
    for (const auto& r : rows) datasets.insert(r.dataset);
    const std::vector<std::pair<std::string, double ResultRow::*>> metrics{
        {"train_risk", &ResultRow::train_risk},     {"test_risk", &ResultRow::test_risk},
        {"gap", &ResultRow::gap},                   {"global_bound", &ResultRow::global_bound},
        {"local_bound", &ResultRow::local_bound},   {"effdim_bound", &ResultRow::effdim_bound},
        {"d_eff_ipr", &ResultRow::d_eff_ipr}};
    for (const auto& ds : datasets) {
      auto out = open_for_write(out_dir / ("figure_" + ds + ".csv"));
      out << "dataset,n_layers,p,N_train,runs";
      for (const auto& [name, _] : metrics) out << ',' << name << "_mean," << name << "_std";
      out << '\n';
      for (auto& [key, members] : groups) {
        if (std::get<0>(key) != ds) continue;
        std::sort(members.begin(), members.end(), [](auto* a, auto* b) { return a->run < b->run; });
        out << ds << ',' << std::get<1>(key) << ',' << format_float(std::get<2>(key)) << ',' << std::get<3>(key) << ','
            << members.size();
        for (const auto& [name, field] : metrics) {
          std::vector<double> v;
          for (const auto* m : members) v.push_back(m->*field);
          const auto [mean, sd] = mean_std(v);
          out << ',' << format_float(mean) << ',' << format_float(sd);
        }
        out << '\n';
      }
    }
  }
  write_table1(table1(), out_dir / "table1.csv");
}

std::vector<Table1Row> table1(double c_prime, double conf_delta) {
  std::vector<Table1Row> rows;
  for (std::size_t d : {1, 10, 100, 1000, 10000, 50000, 100000}) {
    const std::size_t n = required_samples(static_cast<double>(d), c_prime);
    rows.push_back({d, k_complexity(static_cast<double>(d), c_prime), n, confidence_term(n, conf_delta)});
  }
  return rows;
}

void write_table1(const std::vector<Table1Row>& rows, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "d,k,N,third_term\n";
  for (const auto& r : rows)
    out << r.d << ',' << format_float(r.k) << ',' << r.n << ',' << format_float(r.third_term) << '\n';
}

}  // namespace qgen
