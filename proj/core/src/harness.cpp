#include "pconf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "pconf/dataset_io.hpp"
#include "pconf/errors.hpp"
#include "pconf/rng.hpp"

namespace pconf {

std::string to_string(Method method) {
  switch (method) {
    case Method::Pconf: return "pconf";
    case Method::Weighted: return "weighted";
    case Method::Regression: return "regression";
    case Method::Supervised: return "supervised";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "pconf") return Method::Pconf;
  if (name == "weighted") return Method::Weighted;
  if (name == "regression") return Method::Regression;
  if (name == "supervised") return Method::Supervised;
  throw std::domain_error("unknown method: " + name);
}

namespace {

std::vector<Vec> default_mu_list() {
  std::vector<Vec> out;
  for (double v = 2.0; v <= 4.51; v += 0.5) out.push_back((Vec(2) << v, v).finished());
  return out;
}

// Seed streams: one sub-stream per (cell, trial, purpose). Purposes:
// 0 positives, 1 negatives, 2 test, 3 confidence model.
std::uint64_t trial_stream(std::size_t mu_idx, std::size_t m_idx, int trial,
                           int purpose) {
  return (((static_cast<std::uint64_t>(mu_idx) * 64 + m_idx) * 4096 +
           static_cast<std::uint64_t>(trial)) *
          8) +
         static_cast<std::uint64_t>(purpose);
}

struct TrialContext {
  const StudyConfig* config;
  Vec mu_minus;
  std::size_t mu_idx;
  int m;  // 0 = exact confidence
  std::size_t m_idx;
  int trial;
};

double regression_objective(const LinearModel& model,
                            std::span<const PconfSample> samples, double lambda) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double fitted = model.alpha.dot(model.basis.featurize(s.x));
    total += (fitted - s.r) * (fitted - s.r);
  }
  return total + lambda * model.alpha.squaredNorm();
}

void fill_bound_diagnostics(TrialResult& out, const LinearModel& model,
                            std::span<const PconfSample> pconf_train,
                            LossKind loss, double floor, double pi_plus) {
  const double c_w = model.alpha.norm();
  if (!(c_w > 0.0)) return;  // all-zero model; bounds undefined
  const auto ec =
      empirical_constants(model.basis, c_w, pconf_train, loss, floor);
  const double n = static_cast<double>(pconf_train.size());
  const double rn = rademacher_linear(c_w, ec.c_phi, n);
  BoundInputs b{n, pi_plus, ec.c_r, ec.c_ell, ec.l_ell, rn, 0.05};
  out.c_w = c_w;
  out.c_phi = ec.c_phi;
  out.c_r = ec.c_r;
  out.rademacher = rn;
  out.uniform_dev_bound = uniform_deviation_bound(b);
  out.est_error_bound = estimation_error_bound(b);
}

std::vector<TrialResult> run_trial(const TrialContext& ctx) {
  const StudyConfig& cfg = *ctx.config;

  TwoGaussianSpec gauss;
  gauss.dim = static_cast<int>(ctx.mu_minus.size());
  gauss.mu_plus = Vec::Zero(gauss.dim);
  gauss.mu_minus = ctx.mu_minus;
  gauss.pi_plus = cfg.pi_plus;

  const auto stream = [&](int purpose) {
    return derive_seed(cfg.base_seed,
                       trial_stream(ctx.mu_idx, ctx.m_idx, ctx.trial, purpose));
  };

  // Positive training patterns; shared between the Pconf set and the
  // supervised baseline (the paper's negatives exist only for the latter).
  gauss.seed = stream(0);
  std::vector<PconfSample> pconf_train;
  if (ctx.m == 0) {
    pconf_train = sample_pconf_dataset(gauss, cfg.n_pos_train);
  } else {
    NoisySpec noisy;
    noisy.m = ctx.m;
    noisy.seed = stream(3);
    const auto confidence = noisy_confidence_model(gauss, noisy);
    pconf_train = sample_pconf_dataset_with(gauss, cfg.n_pos_train, confidence);
  }
  clamp_confidences(pconf_train, cfg.confidence_floor);
  const bool degenerate =
      std::all_of(pconf_train.begin(), pconf_train.end(),
                  [](const PconfSample& s) { return s.r == 1.0; });

  std::vector<LabeledSample> labeled_train;
  labeled_train.reserve(
      static_cast<std::size_t>(cfg.n_pos_train + cfg.n_neg_train));
  for (const auto& s : pconf_train) labeled_train.push_back({s.x, +1});
  {
    TwoGaussianSpec neg = gauss;
    neg.seed = stream(1);
    for (auto& s : sample_labeled_dataset(neg, 0, cfg.n_neg_train))
      labeled_train.push_back(std::move(s));
  }

  TwoGaussianSpec test_spec = gauss;
  test_spec.seed = stream(2);
  const auto test_set =
      sample_labeled_dataset(test_spec, cfg.n_pos_test, cfg.n_neg_test);

  const Basis basis = Basis::affine(gauss.dim);
  const Regularizer reg =
      cfg.lambda > 0.0 ? Regularizer(cfg.lambda, RegKind::IdentityExceptBias)
                       : Regularizer();

  std::vector<TrialResult> results;
  for (Method method : cfg.methods) {
    TrialResult out;
    out.method = method;
    out.mu_minus = ctx.mu_minus;
    out.m = ctx.m;
    out.trial = ctx.trial;
    out.seed = stream(0);
    out.degenerate_confidences = degenerate;
    try {
      LinearModel model;
      switch (method) {
        case Method::Pconf: {
          auto [trained, report] =
              minimize(RiskObjective{RiskKind::Pconf, cfg.loss, reg},
                       std::span<const PconfSample>(pconf_train), basis,
                       cfg.optimizer);
          model = std::move(trained);
          out.train_objective = report.final_objective;
          out.epochs_run = report.epochs_run;
          out.validation_score = pconf_validation_score(pconf_train, model);
          break;
        }
        case Method::Weighted: {
          auto [trained, report] =
              minimize(RiskObjective{RiskKind::Weighted, cfg.loss, reg},
                       std::span<const PconfSample>(pconf_train), basis,
                       cfg.optimizer);
          model = std::move(trained);
          out.train_objective = report.final_objective;
          out.epochs_run = report.epochs_run;
          out.validation_score = weighted_validation_score(pconf_train, model);
          break;
        }
        case Method::Regression: {
          model = ridge_regression_fit(pconf_train, basis, cfg.lambda);
          out.train_objective =
              regression_objective(model, pconf_train, cfg.lambda);
          out.validation_score = weighted_validation_score(pconf_train, model);
          break;
        }
        case Method::Supervised: {
          auto [trained, report] =
              minimize(RiskObjective{RiskKind::Supervised, cfg.loss, reg},
                       std::span<const LabeledSample>(labeled_train), basis,
                       cfg.optimizer);
          model = std::move(trained);
          out.train_objective = report.final_objective;
          out.epochs_run = report.epochs_run;
          out.validation_score = 1.0 - accuracy(labeled_train, model);
          break;
        }
      }
      out.test_accuracy = accuracy(test_set, model);
      fill_bound_diagnostics(out, model, pconf_train, cfg.loss,
                             cfg.confidence_floor, cfg.pi_plus);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    results.push_back(std::move(out));
  }
  return results;
}

std::vector<SummaryRow> summarize(const StudyConfig& cfg,
                                  const std::vector<TrialResult>& trials) {
  // Group accuracies per cell and method, preserving configuration order.
  struct CellKey {
    std::size_t mu_idx;
    std::size_t m_idx;
  };
  std::vector<SummaryRow> summary;

  auto cell_rows = [&](const Vec& mu, int m) {
    std::map<Method, std::vector<double>> acc;
    std::map<Method, int> failed;
    for (const auto& t : trials) {
      if (t.m != m || t.mu_minus != mu) continue;
      if (t.ok)
        acc[t.method].push_back(t.test_accuracy);
      else
        failed[t.method] += 1;
    }
    std::vector<SummaryRow> rows;
    for (Method method : cfg.methods) {
      SummaryRow row;
      row.mu_minus = mu;
      row.m = m;
      row.method = method;
      const auto& xs = acc[method];
      row.trials_ok = static_cast<int>(xs.size());
      row.flagged = failed[method] * 2 >= cfg.trials;
      if (!xs.empty()) row.mean_accuracy = mean(xs);
      if (xs.size() >= 2) row.std_accuracy = sample_stddev(xs);
      rows.push_back(std::move(row));
    }
    // Welch tests against Pconf.
    const auto& pconf_acc = acc[Method::Pconf];
    for (auto& row : rows) {
      if (row.method == Method::Pconf) continue;
      const auto& xs = acc[row.method];
      if (pconf_acc.size() >= 2 && xs.size() >= 2)
        row.vs_pconf = welch_t_test(xs, pconf_acc);
    }
    // Paper-style bolding among the confidence-only methods: best mean,
    // plus anything not significantly different from the best.
    const Method* best = nullptr;
    double best_mean = -1.0;
    for (const auto& row : rows) {
      if (row.method == Method::Supervised || row.trials_ok < 2) continue;
      if (row.mean_accuracy > best_mean) {
        best_mean = row.mean_accuracy;
        best = &row.method;
      }
    }
    if (best) {
      const auto& best_acc = acc[*best];
      for (auto& row : rows) {
        if (row.method == Method::Supervised || row.trials_ok < 2) continue;
        if (row.method == *best) {
          row.best_equivalent = true;
        } else {
          row.best_equivalent =
              !welch_t_test(acc[row.method], best_acc).significant_5pct;
        }
      }
    }
    return rows;
  };

  if (cfg.m_list.empty()) {
    for (const auto& mu : cfg.mu_minus_list)
      for (auto& row : cell_rows(mu, 0)) summary.push_back(std::move(row));
  } else {
    for (const auto& mu : cfg.mu_minus_list)
      for (int m : cfg.m_list)
        for (auto& row : cell_rows(mu, m)) summary.push_back(std::move(row));
  }
  return summary;
}

void append_g9(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

StudyResult run_study(StudyConfig cfg, bool noise) {
  if (cfg.trials < 1) throw std::domain_error("study: trials must be >= 1");
  if (cfg.mu_minus_list.empty()) cfg.mu_minus_list = default_mu_list();
  if (noise && cfg.m_list.empty()) cfg.m_list = {1000, 500, 100};
  if (!noise) cfg.m_list.clear();
  if (cfg.methods.empty()) {
    cfg.methods = noise ? std::vector<Method>{Method::Pconf, Method::Weighted}
                        : std::vector<Method>{Method::Pconf, Method::Weighted,
                                              Method::Regression,
                                              Method::Supervised};
  }

  std::vector<TrialContext> contexts;
  for (std::size_t mi = 0; mi < cfg.mu_minus_list.size(); ++mi) {
    const std::vector<int> ms = noise ? cfg.m_list : std::vector<int>{0};
    for (std::size_t ki = 0; ki < ms.size(); ++ki)
      for (int t = 0; t < cfg.trials; ++t)
        contexts.push_back({&cfg, cfg.mu_minus_list[mi], mi, ms[ki], ki, t});
  }

  std::vector<std::vector<TrialResult>> per_context(contexts.size());
  if (cfg.parallel && contexts.size() > 1) {
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(contexts.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= contexts.size()) return;
          per_context[i] = run_trial(contexts[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < contexts.size(); ++i)
      per_context[i] = run_trial(contexts[i]);
  }

  StudyResult result;
  // Output order: (mu, m, method, trial), independent of completion order.
  for (std::size_t mi = 0; mi < cfg.mu_minus_list.size(); ++mi) {
    const std::vector<int> ms = noise ? cfg.m_list : std::vector<int>{0};
    for (std::size_t ki = 0; ki < ms.size(); ++ki) {
      for (Method method : cfg.methods) {
        for (std::size_t c = 0; c < contexts.size(); ++c) {
          if (contexts[c].mu_idx != mi || contexts[c].m_idx != ki) continue;
          for (const auto& r : per_context[c])
            if (r.method == method) result.trials.push_back(r);
        }
      }
    }
  }
  result.summary = summarize(cfg, result.trials);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto write = [&](const std::string& name, const std::string& body) {
      const auto path = std::filesystem::path(cfg.out_dir) / name;
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot open for writing: " + path.string());
      out << body;
      if (!out) throw IoError("failed writing: " + path.string());
    };
    write("trials.csv", trials_to_csv(result.trials));
    write("summary.csv", summary_to_csv(result.summary));
  }
  return result;
}

}  // namespace

StudyResult run_overlap_study(const StudyConfig& config) {
  return run_study(config, /*noise=*/false);
}

StudyResult run_noise_study(const StudyConfig& config) {
  return run_study(config, /*noise=*/true);
}

std::string trials_to_csv(const std::vector<TrialResult>& trials) {
  std::string out =
      "mu1,mu2,m,method,trial,seed,status,degenerate,test_accuracy,"
      "train_objective,validation_score,epochs_run,c_w,c_phi,c_r,"
      "rademacher,uniform_dev_bound,est_error_bound\n";
  for (const auto& t : trials) {
    append_g9(out, t.mu_minus[0]);
    out += ',';
    append_g9(out, t.mu_minus.size() > 1 ? t.mu_minus[1] : 0.0);
    out += ',' + std::to_string(t.m) + ',' + to_string(t.method) + ',' +
           std::to_string(t.trial) + ',' + std::to_string(t.seed) + ',';
    out += t.ok ? "ok" : "failed";
    out += ',';
    out += t.degenerate_confidences ? "1" : "0";
    out += ',';
    append_g9(out, t.test_accuracy);
    out += ',';
    append_g9(out, t.train_objective);
    out += ',';
    append_g9(out, t.validation_score);
    out += ',' + std::to_string(t.epochs_run) + ',';
    append_g9(out, t.c_w);
    out += ',';
    append_g9(out, t.c_phi);
    out += ',';
    append_g9(out, t.c_r);
    out += ',';
    append_g9(out, t.rademacher);
    out += ',';
    append_g9(out, t.uniform_dev_bound);
    out += ',';
    append_g9(out, t.est_error_bound);
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "mu1,mu2,m,method,trials_ok,flagged,mean_accuracy,std_accuracy,"
      "t_vs_pconf,dof_vs_pconf,p_vs_pconf,significant_5pct,best_equivalent\n";
  for (const auto& row : summary) {
    append_g9(out, row.mu_minus[0]);
    out += ',';
    append_g9(out, row.mu_minus.size() > 1 ? row.mu_minus[1] : 0.0);
    out += ',' + std::to_string(row.m) + ',' + to_string(row.method) + ',' +
           std::to_string(row.trials_ok) + ',';
    out += row.flagged ? "1" : "0";
    out += ',';
    append_g9(out, row.mean_accuracy);
    out += ',';
    append_g9(out, row.std_accuracy);
    out += ',';
    if (row.vs_pconf) {
      append_g9(out, row.vs_pconf->t);
      out += ',';
      append_g9(out, row.vs_pconf->dof);
      out += ',';
      append_g9(out, row.vs_pconf->p_value);
      out += ',';
      out += row.vs_pconf->significant_5pct ? "1" : "0";
    } else {
      out += ",,,";
    }
    out += ',';
    out += row.best_equivalent ? "1" : "0";
    out += '\n';
  }
  return out;
}

namespace {

double single_validation_score(Method method, const LinearModel& model,
                               std::span<const PconfSample> pconf_samples,
                               std::span<const LabeledSample> labeled_samples) {
  switch (method) {
    case Method::Pconf:
      return pconf_validation_score(pconf_samples, model);
    case Method::Weighted:
      return weighted_validation_score(pconf_samples, model);
    case Method::Regression: {
      double total = 0.0;
      for (const auto& s : pconf_samples) {
        const double fitted = model.alpha.dot(model.basis.featurize(s.x));
        total += (fitted - s.r) * (fitted - s.r);
      }
      return total / static_cast<double>(pconf_samples.size());
    }
    case Method::Supervised:
      return 1.0 - accuracy(labeled_samples, model);
  }
  return 0.0;
}

}  // namespace

SingleResult train_single(const SingleConfig& config) {
  const bool needs_pconf_data = config.method != Method::Supervised;

  std::vector<PconfSample> pconf_train;
  std::vector<LabeledSample> labeled_train;
  int dim = 0;
  if (needs_pconf_data) {
    pconf_train = read_pconf_csv(config.train_csv);
    if (pconf_train.empty())
      throw InputFormatError(config.train_csv + ": no samples");
    clamp_confidences(pconf_train, config.confidence_floor);
    dim = static_cast<int>(pconf_train.front().x.size());
  } else {
    labeled_train = read_labeled_csv(config.train_csv);
    if (labeled_train.empty())
      throw InputFormatError(config.train_csv + ": no samples");
    dim = static_cast<int>(labeled_train.front().x.size());
  }

  std::vector<PconfSample> val_pconf;
  std::vector<LabeledSample> val_labeled;
  if (!config.val_csv.empty()) {
    if (needs_pconf_data) {
      val_pconf = read_pconf_csv(config.val_csv);
      clamp_confidences(val_pconf, config.confidence_floor);
    } else {
      val_labeled = read_labeled_csv(config.val_csv);
    }
  }

  const Basis basis = Basis::affine(dim);
  std::vector<double> lambdas = config.lambda_grid;
  if (lambdas.empty()) lambdas = {config.lambda};
  if (lambdas.size() > 1 && config.val_csv.empty())
    throw std::invalid_argument("train_single: a lambda grid needs --val data");

  SingleResult best;
  double best_score = std::numeric_limits<double>::infinity();
  bool have_best = false;

  for (double lambda : lambdas) {
    SingleResult candidate;
    candidate.method = config.method;
    candidate.chosen_lambda = lambda;
    candidate.confidence_floor = config.confidence_floor;

    const Regularizer reg = lambda > 0.0
                                ? Regularizer(lambda, RegKind::IdentityExceptBias)
                                : Regularizer();
    OptimizerConfig opt = config.optimizer;
    opt.seed = config.seed;

    switch (config.method) {
      case Method::Pconf: {
        auto [model, report] =
            minimize(RiskObjective{RiskKind::Pconf, config.loss, reg},
                     std::span<const PconfSample>(pconf_train), basis, opt);
        candidate.model = std::move(model);
        candidate.report = std::move(report);
        break;
      }
      case Method::Weighted: {
        auto [model, report] =
            minimize(RiskObjective{RiskKind::Weighted, config.loss, reg},
                     std::span<const PconfSample>(pconf_train), basis, opt);
        candidate.model = std::move(model);
        candidate.report = std::move(report);
        break;
      }
      case Method::Regression: {
        candidate.model = ridge_regression_fit(pconf_train, basis, lambda);
        candidate.report.final_alpha = candidate.model.alpha;
        candidate.report.final_objective =
            regression_objective(candidate.model, pconf_train, lambda);
        break;
      }
      case Method::Supervised: {
        auto [model, report] =
            minimize(RiskObjective{RiskKind::Supervised, config.loss, reg},
                     std::span<const LabeledSample>(labeled_train), basis, opt);
        candidate.model = std::move(model);
        candidate.report = std::move(report);
        break;
      }
    }
    candidate.train_objective = candidate.report.final_objective;
    candidate.validation_score = single_validation_score(
        config.method, candidate.model, pconf_train, labeled_train);

    double score = candidate.validation_score;
    if (!config.val_csv.empty()) {
      score = single_validation_score(config.method, candidate.model, val_pconf,
                                      val_labeled);
      candidate.grid_val_score = score;
    }
    if (!have_best || score < best_score) {
      best = std::move(candidate);
      best_score = score;
      have_best = true;
    }
  }

  if (needs_pconf_data) {
    best.degenerate_confidences =
        std::all_of(pconf_train.begin(), pconf_train.end(),
                    [](const PconfSample& s) { return s.r == 1.0; });
    const double c_w = best.model.alpha.norm();
    if (c_w > 0.0) {
      best.constants = empirical_constants(basis, c_w, pconf_train, config.loss,
                                           config.confidence_floor);
      const double n = static_cast<double>(pconf_train.size());
      best.rademacher = rademacher_linear(c_w, best.constants.c_phi, n);
      BoundInputs b{n,
                    0.5,
                    best.constants.c_r,
                    best.constants.c_ell,
                    best.constants.l_ell,
                    best.rademacher,
                    0.05};
      best.uniform_dev_bound = uniform_deviation_bound(b);
      best.est_error_bound = estimation_error_bound(b);
    }
  }

  if (!config.test_csv.empty()) {
    const auto test_set = read_labeled_csv(config.test_csv);
    best.test_accuracy = accuracy(test_set, best.model);
  }
  if (!config.model_out.empty()) save_model(best.model, config.model_out);
  return best;
}

}  // namespace pconf
