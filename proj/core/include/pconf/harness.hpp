#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pconf/data.hpp"
#include "pconf/optim.hpp"
#include "pconf/stats.hpp"
#include "pconf/theory.hpp"

namespace pconf {

enum class Method { Pconf, Weighted, Regression, Supervised };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

// One replication study. A cell is a (mu_minus, m) pair; each cell runs
// `trials` independent trials. m = 0 means exact analytic confidence
// (overlap study); m > 0 trains a noisy-confidence model on m positives
// and m negatives per trial.
//
// Per-trial protocol: draw n_pos_train positives; pair them with
// confidences to form the Pconf training set (clamped at
// confidence_floor); the same positives plus n_neg_train fresh negatives
// form the labeled set for the supervised baseline; the test set is an
// independent draw. Train / negative / test / confidence draws use
// disjoint derived seed streams.
struct StudyConfig {
  std::vector<Vec> mu_minus_list;  // empty -> [2,2], [2.5,2.5], ..., [4.5,4.5]
  std::vector<int> m_list;         // noise study only; empty -> {1000, 500, 100}
  int trials = 10;
  int n_pos_train = 1000;
  int n_neg_train = 1000;
  int n_pos_test = 1000;
  int n_neg_test = 1000;
  std::vector<Method> methods;  // empty -> study default
  std::uint64_t base_seed = 1;
  OptimizerConfig optimizer = study_optimizer_defaults();
  double confidence_floor = 0.01;
  double lambda = 0.0;
  LossKind loss = LossKind::Logistic;
  double pi_plus = 0.5;
  std::string out_dir;  // when set, trials.csv and summary.csv are written
  bool parallel = true;

  // The paper fixes 10k full-batch epochs but not the step size; 6e-4
  // reproduces its reported accuracy tables (see README).
  static OptimizerConfig study_optimizer_defaults() {
    OptimizerConfig c;
    c.step_size = 6e-4;
    return c;
  }
};

struct TrialResult {
  Method method = Method::Pconf;
  Vec mu_minus;
  int m = 0;  // 0 = exact confidence
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  bool degenerate_confidences = false;  // every r_i == 1 after clamping
  double test_accuracy = 0.0;
  double train_objective = 0.0;
  double validation_score = 0.0;
  int epochs_run = 0;
  // Bound diagnostics at delta = 0.05, computed from the trained model and
  // the Pconf training set.
  double c_w = 0.0;
  double c_phi = 0.0;
  double c_r = 0.0;
  double rademacher = 0.0;
  double uniform_dev_bound = 0.0;
  double est_error_bound = 0.0;
};

struct SummaryRow {
  Vec mu_minus;
  int m = 0;
  Method method = Method::Pconf;
  int trials_ok = 0;
  bool flagged = false;  // at least half the trials failed
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  // Welch test against the Pconf rows of the same cell (empty for Pconf).
  std::optional<WelchResult> vs_pconf;
  // Paper-style bolding: best confidence-only method of the cell plus any
  // method statistically indistinguishable from it at the 5% level.
  bool best_equivalent = false;
};

struct StudyResult {
  std::vector<TrialResult> trials;
  std::vector<SummaryRow> summary;
};

// Exact-confidence replication across mu_minus values (Table 1 shape).
// Default methods: Pconf, Weighted, Regression, Supervised.
StudyResult run_overlap_study(const StudyConfig& config);

// Noisy-confidence replication across (mu_minus, m) cells (Table 2 shape).
// Default methods: Pconf, Weighted.
StudyResult run_noise_study(const StudyConfig& config);

// Serializations used both by the study writers and the CLI; floats carry
// 9 significant digits.
std::string trials_to_csv(const std::vector<TrialResult>& trials);
std::string summary_to_csv(const std::vector<SummaryRow>& summary);

// Single training run from datasets on disk.
struct SingleConfig {
  Method method = Method::Pconf;
  std::string train_csv;
  std::string test_csv;   // optional; labeled
  std::string val_csv;    // optional; enables lambda_grid selection
  std::string model_out;  // optional
  LossKind loss = LossKind::Logistic;
  double lambda = 0.0;
  std::vector<double> lambda_grid;  // tried in order; best validation score wins
  double confidence_floor = 0.01;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
};

struct SingleResult {
  LinearModel model;
  TrainReport report;
  Method method = Method::Pconf;
  double chosen_lambda = 0.0;
  double confidence_floor = 0.0;
  bool degenerate_confidences = false;
  double train_objective = 0.0;
  double validation_score = 0.0;         // on train set (zero-one surrogate)
  std::optional<double> grid_val_score;  // on val set when a grid was used
  std::optional<double> test_accuracy;
  EmpiricalConstants constants{};
  double rademacher = 0.0;
  double uniform_dev_bound = 0.0;
  double est_error_bound = 0.0;
};

SingleResult train_single(const SingleConfig& config);

}  // namespace pconf
