#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pconf/dataset_io.hpp"
#include "pconf/errors.hpp"
#include "pconf/harness.hpp"

using pconf::Method;
using pconf::StudyConfig;
using pconf::Vec;

namespace {

StudyConfig tiny_config() {
  StudyConfig cfg;
  cfg.mu_minus_list = {(Vec(2) << 2.0, 2.0).finished(),
                       (Vec(2) << 3.0, 3.0).finished()};
  cfg.trials = 3;
  cfg.n_pos_train = 120;
  cfg.n_neg_train = 120;
  // 500 test samples: accuracies k/500 have short decimal expansions, so the
  // 9-significant-digit CSV representation is exact and summaries recompute.
  cfg.n_pos_test = 250;
  cfg.n_neg_test = 250;
  cfg.base_seed = 77;
  cfg.optimizer.max_epochs = 800;
  return cfg;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name) {
    path = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("overlap study is deterministic and internally consistent") {
  const StudyConfig cfg = tiny_config();
  const auto run1 = pconf::run_overlap_study(cfg);
  const auto run2 = pconf::run_overlap_study(cfg);

  const std::string csv1 = pconf::trials_to_csv(run1.trials);
  CHECK(csv1 == pconf::trials_to_csv(run2.trials));
  CHECK(pconf::summary_to_csv(run1.summary) == pconf::summary_to_csv(run2.summary));

  // 2 cells x 4 methods x 3 trials
  CHECK(run1.trials.size() == 24);
  CHECK(run1.summary.size() == 8);
  for (const auto& t : run1.trials) {
    CHECK(t.ok);
    CHECK(t.test_accuracy >= 0.0);
    CHECK(t.test_accuracy <= 1.0);
    if (t.method != Method::Regression) CHECK(t.epochs_run == 800);
    CHECK(t.uniform_dev_bound > 0.0);
    CHECK(t.est_error_bound == 2.0 * t.uniform_dev_bound);
  }

  // summary means/stds recompute from the per-trial CSV (9 significant
  // digits) to 1e-12
  std::istringstream in(csv1);
  std::string line;
  std::getline(in, line);  // header
  std::map<std::string, std::vector<double>> acc;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() == 18);
    acc[fields[0] + "/" + fields[3]].push_back(std::stod(fields[8]));
  }
  for (const auto& row : run1.summary) {
    char mu1[32];
    std::snprintf(mu1, sizeof(mu1), "%.9g", row.mu_minus[0]);
    const auto& xs = acc[std::string(mu1) + "/" + pconf::to_string(row.method)];
    REQUIRE(static_cast<int>(xs.size()) == row.trials_ok);
    CHECK(std::abs(pconf::mean(xs) - row.mean_accuracy) <= 1e-12);
    CHECK(std::abs(pconf::sample_stddev(xs) - row.std_accuracy) <= 1e-12);
  }

  // Welch columns: present for the non-pconf methods
  for (const auto& row : run1.summary) {
    if (row.method == Method::Pconf) {
      CHECK_FALSE(row.vs_pconf.has_value());
    } else {
      REQUIRE(row.vs_pconf.has_value());
      CHECK(row.vs_pconf->p_value >= 0.0);
      CHECK(row.vs_pconf->p_value <= 1.0);
    }
  }
}

TEST_CASE("parallel and serial study execution agree") {
  StudyConfig cfg = tiny_config();
  cfg.mu_minus_list = {(Vec(2) << 2.5, 2.5).finished()};
  cfg.trials = 4;
  const auto serial_cfg = [&] {
    StudyConfig c = cfg;
    c.parallel = false;
    return c;
  }();
  const auto par = pconf::run_overlap_study(cfg);
  const auto ser = pconf::run_overlap_study(serial_cfg);
  CHECK(pconf::trials_to_csv(par.trials) == pconf::trials_to_csv(ser.trials));
}

TEST_CASE("study writes trials.csv and summary.csv") {
  TempDir tmp("pconf_study_out");
  StudyConfig cfg = tiny_config();
  cfg.mu_minus_list = {(Vec(2) << 2.0, 2.0).finished()};
  cfg.trials = 2;
  cfg.methods = {Method::Pconf, Method::Regression};
  cfg.out_dir = tmp.file("run1");
  const auto result = pconf::run_overlap_study(cfg);

  std::ifstream trials(cfg.out_dir + "/trials.csv", std::ios::binary);
  REQUIRE(trials.good());
  std::string body((std::istreambuf_iterator<char>(trials)),
                   std::istreambuf_iterator<char>());
  CHECK(body == pconf::trials_to_csv(result.trials));
}

TEST_CASE("noise study shape and noisy confidences") {
  StudyConfig cfg = tiny_config();
  cfg.mu_minus_list = {(Vec(2) << 3.0, 3.0).finished()};
  cfg.m_list = {50};
  cfg.trials = 2;
  const auto result = pconf::run_noise_study(cfg);
  CHECK(result.trials.size() == 4);  // 1 cell x default {pconf, weighted} x 2
  for (const auto& t : result.trials) {
    CHECK(t.m == 50);
    CHECK(t.ok);
    CHECK((t.method == Method::Pconf || t.method == Method::Weighted));
  }
}

TEST_CASE("train_single round-trips through files") {
  TempDir tmp("pconf_single");

  // small synthetic datasets on disk
  pconf::TwoGaussianSpec spec;
  spec.mu_minus = (Vec(2) << 3.0, 3.0).finished();
  spec.seed = 11;
  auto train = pconf::sample_pconf_dataset(spec, 150);
  pconf::write_pconf_csv(tmp.file("train.csv"), train);
  spec.seed = 12;
  const auto test = pconf::sample_labeled_dataset(spec, 200, 200);
  pconf::write_labeled_csv(tmp.file("test.csv"), test);

  pconf::SingleConfig cfg;
  cfg.method = Method::Pconf;
  cfg.train_csv = tmp.file("train.csv");
  cfg.test_csv = tmp.file("test.csv");
  cfg.model_out = tmp.file("model.txt");
  cfg.lambda = 0.001;
  cfg.confidence_floor = 0.02;
  cfg.optimizer.max_epochs = 600;

  const auto result = pconf::train_single(cfg);
  CHECK(result.chosen_lambda == 0.001);
  CHECK(result.confidence_floor == 0.02);
  REQUIRE(result.test_accuracy.has_value());
  CHECK(*result.test_accuracy > 0.9);

  // reloading the persisted model reproduces the recorded accuracy exactly
  const auto reloaded = pconf::load_model(tmp.file("model.txt"));
  CHECK(pconf::accuracy(test, reloaded) == *result.test_accuracy);

  // pconf training on a labeled file names the missing column
  pconf::SingleConfig wrong = cfg;
  wrong.train_csv = tmp.file("test.csv");
  CHECK_THROWS_WITH_AS((void)pconf::train_single(wrong), doctest::Contains("'r'"),
                       pconf::InputFormatError);
}

TEST_CASE("train_single lambda grid selects by validation score") {
  TempDir tmp("pconf_grid");
  pconf::TwoGaussianSpec spec;
  spec.mu_minus = (Vec(2) << 2.5, 2.5).finished();
  spec.seed = 21;
  auto train = pconf::sample_pconf_dataset(spec, 120);
  pconf::write_pconf_csv(tmp.file("train.csv"), train);
  spec.seed = 22;
  auto val = pconf::sample_pconf_dataset(spec, 120);
  pconf::write_pconf_csv(tmp.file("val.csv"), val);

  pconf::SingleConfig cfg;
  cfg.method = Method::Pconf;
  cfg.train_csv = tmp.file("train.csv");
  cfg.val_csv = tmp.file("val.csv");
  // lambda 1e50 freezes alpha at zero, every margin ties to -1, and the
  // validation surrogate is exactly 1; the unregularized fit scores lower
  cfg.lambda_grid = {0.0, 1e50};
  cfg.optimizer.max_epochs = 800;
  const auto result = pconf::train_single(cfg);
  CHECK(result.chosen_lambda == 0.0);
  REQUIRE(result.grid_val_score.has_value());
  CHECK(*result.grid_val_score < 1.0);

  pconf::SingleConfig no_val = cfg;
  no_val.val_csv.clear();
  CHECK_THROWS_AS((void)pconf::train_single(no_val), std::invalid_argument);
}

TEST_CASE("supervised single training reads labeled data") {
  TempDir tmp("pconf_single_sup");
  pconf::TwoGaussianSpec spec;
  spec.mu_minus = (Vec(2) << 3.0, 3.0).finished();
  spec.seed = 31;
  const auto train = pconf::sample_labeled_dataset(spec, 150, 150);
  pconf::write_labeled_csv(tmp.file("train.csv"), train);

  pconf::SingleConfig cfg;
  cfg.method = Method::Supervised;
  cfg.train_csv = tmp.file("train.csv");
  cfg.optimizer.max_epochs = 500;
  const auto result = pconf::train_single(cfg);
  CHECK(result.validation_score < 0.1);  // training zero-one error
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Pconf, Method::Weighted, Method::Regression,
                   Method::Supervised}) {
    CHECK(pconf::method_from_string(pconf::to_string(m)) == m);
  }
  CHECK_THROWS_AS((void)pconf::method_from_string("osvm"), std::domain_error);
}
