#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qgen/errors.hpp"
#include "qgen/experiment.hpp"

using namespace qgen;
namespace fs = std::filesystem;

namespace {

const fs::path kData = QGEN_TEST_DATA_DIR;

std::string base_config(const std::string& extra = "") {
  return R"({"dataset":"iris","n_qubits":2,"layers":[1],"noise_rates":[0.1],"train_sizes":[10,20],
             "epochs":2,"n_runs":2,"base_seed":3,"conf_delta":0.05,"alpha":0.5,"learning_rate":0.1,
             "pinv_cutoff":1e-8,"out_dir":"unused","global_samples":4,"lipschitz_samples":4)" +
         extra + "}";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(base_config());
  CHECK(c.dataset == DatasetKind::Iris);
  CHECK(c.layers == std::vector<std::size_t>{1});
  CHECK(c.global_samples == 4);
  CHECK(c.noise_model == NoiseModel::Register);

  CHECK_THROWS_AS(parse_config(base_config(R"(,"surprise":1)")), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dataset":"iris"})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(base_config(R"(,"noise_model":"bogus")")), ConfigError);

  auto replaced = [](std::string s, const std::string& from, const std::string& to) {
    return s.replace(s.find(from), from.size(), to);
  };
  CHECK_THROWS_AS(parse_config(replaced(base_config(), R"("layers":[1])", R"("layers":[])")), ConfigError);
  CHECK_THROWS_AS(parse_config(replaced(base_config(), R"("noise_rates":[0.1])", R"("noise_rates":[1.0])")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(replaced(base_config(), R"("epochs":2)", R"("epochs":0)")), ConfigError);
  CHECK_THROWS_AS(parse_config(replaced(base_config(), R"("dataset":"iris")", R"("dataset":"mnist")")), ConfigError);
  CHECK_THROWS_AS(parse_config(replaced(base_config(), R"("n_runs":2)", R"("n_runs":"two")")), ConfigError);
}

TEST_CASE("prepare_split fits scaling on the training rows") {
  const Dataset iris = load_dataset(DatasetKind::Iris, kData);
  const DataSplit s = prepare_split(iris, DatasetKind::Iris, 20, 0);
  s.validate();
  CHECK(s.train.size() == 20);
  CHECK(s.test.size() == 80);
  for (std::size_t j = 0; j < 4; ++j) {
    double lo = 10, hi = -10;
    for (const auto& r : s.train.features) lo = std::min(lo, r[j]), hi = std::max(hi, r[j]);
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(M_PI));
  }
  const Dataset digits = load_dataset(DatasetKind::Digits, kData);
  const DataSplit d = prepare_split(digits, DatasetKind::Digits, 40, 1, 8);
  CHECK(d.train.features.front().size() == 8);
  CHECK(d.test.features.front().size() == 8);
}

TEST_CASE("small grid end to end") {
  const ExperimentConfig c = parse_config(base_config());
  const auto rows = run_experiment(c, kData);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.status == "ok");
    CHECK(r.seed == 3 + r.run);
    CHECK(r.gap >= 0.0);
    CHECK(r.global_bound >= r.gap);
    CHECK(r.local_bound >= r.gap);
    CHECK(r.radius_delta > c.alpha);
    CHECK(r.radius_delta <= kTwoPi);
    CHECK(r.d_eff_ipr >= 1.0);
    CHECK(r.d_eff_ipr <= 6.0);
    CHECK(r.qfim_audited == c.global_samples + 1);
    CHECK(r.worst_ipr_excess <= 1e-9);
  }
  CHECK(rows[0].n_train == 10);
  CHECK(rows[2].n_train == 20);

  const fs::path a = fs::temp_directory_path() / "qgen_grid_a", b = fs::temp_directory_path() / "qgen_grid_b";
  fs::remove_all(a);
  fs::remove_all(b);
  emit_results(rows, a);
  emit_results(run_experiment(c, kData), b);
  for (const char* f : {"results.csv", "notes.csv", "figure_iris.csv", "table1.csv"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string results = slurp(a / "results.csv");
  CHECK(results.rfind("dataset,run,seed,n_layers,p,N_train,train_risk,test_risk,gap,global_bound,local_bound,"
                      "effdim_bound,radius_delta,log_m_loc,L_loc,d_eff_ipr\n",
                      0) == 0);
  CHECK(count_lines(results) == 5);
  CHECK(count_lines(slurp(a / "figure_iris.csv")) == 3);

  // Thread count does not change the output.
  ExperimentConfig serial = c;
  serial.threads = 1;
  const fs::path s = fs::temp_directory_path() / "qgen_grid_serial";
  emit_results(run_experiment(serial, kData), s);
  CHECK(slurp(s / "results.csv") == results);
}

TEST_CASE("cell failures become error rows") {
  ExperimentConfig c = parse_config(base_config());
  c.train_sizes = {10, 120};  // more rows than the dataset holds
  const auto rows = run_experiment(c, kData);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].status == "ok");
  CHECK(rows[2].status == "error");
  CHECK(std::isnan(rows[2].gap));
  CHECK_FALSE(rows[2].detail.empty());
}

TEST_CASE("emit_results errors and table1") {
  CHECK_THROWS(emit_results({}, fs::temp_directory_path() / "qgen_empty"));
  const fs::path file = fs::temp_directory_path() / "qgen_not_a_dir";
  std::ofstream(file) << "x";
  ResultRow r;
  r.dataset = "iris";
  CHECK_THROWS_AS(emit_results({r}, file / "sub"), DataError);

  const auto t = table1();
  REQUIRE(t.size() == 7);
  CHECK(t[3].d == 1000);
  CHECK(t[3].k == doctest::Approx(31.65).epsilon(2e-4));
  CHECK(t[3].n == 1002);
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(1.0 / 3.0) == "0.333333333");
}
