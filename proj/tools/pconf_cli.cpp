// pconf: generate synthetic Pconf datasets, train/evaluate classifiers, run
// the replication studies, and evaluate the theoretical bounds.
//
// Exit codes: 0 success, 2 input-format error, 3 numerical/divergence
// error, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pconf/dataset_io.hpp"
#include "pconf/errors.hpp"
#include "pconf/harness.hpp"
#include "pconf/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputFormat = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty()) out.push_back(std::stod(field));
  }
  return out;
}

// Flat key=value file; '#' starts a comment. Keys mirror the long flag
// names of the generate subcommand.
std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pconf::IoError("cannot open spec file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw pconf::InputFormatError(path + ":" + std::to_string(lineno) +
                                    ": expected key=value");
    kv[line.substr(start, eq - start)] = line.substr(eq + 1);
  }
  return kv;
}

// Applies config-file values for every flag the user did not pass on the
// command line. Keys mirror the long flag names without the leading dashes.
void apply_config(
    CLI::App* cmd, const std::string& path,
    const std::map<std::string, std::function<void(const std::string&)>>& setters) {
  for (const auto& [key, value] : read_kv_file(path)) {
    const auto it = setters.find(key);
    if (it == setters.end())
      throw pconf::InputFormatError(path + ": unknown config key '" + key + "'");
    if (cmd->count("--" + key) == 0) it->second(value);
  }
}

struct GenerateArgs {
  std::string spec_path;
  std::string out_path;
};

int run_generate(const GenerateArgs& args) {
  auto kv = read_kv_file(args.spec_path);
  const auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };

  const std::string kind = get("kind", "pconf");
  pconf::TwoGaussianSpec spec;
  spec.dim = std::stoi(get("dim", "2"));
  spec.mu_plus = pconf::Vec::Zero(spec.dim);
  spec.mu_minus = pconf::Vec::Zero(spec.dim);
  const auto mu = parse_double_list(get("mu-minus", "2.0,2.0"));
  if (static_cast<int>(mu.size()) != spec.dim)
    throw pconf::InputFormatError(args.spec_path +
                                  ": mu-minus dimension does not match dim");
  for (int i = 0; i < spec.dim; ++i) spec.mu_minus[i] = mu[static_cast<std::size_t>(i)];
  spec.pi_plus = std::stod(get("pi-plus", "0.5"));
  spec.seed = std::stoull(get("seed", "1"));
  const int n_pos = std::stoi(get("n-pos", "1000"));
  const int n_neg = std::stoi(get("n-neg", "1000"));

  if (kind == "pconf") {
    const int noisy_m = std::stoi(get("noisy-m", "0"));
    std::vector<pconf::PconfSample> samples;
    if (noisy_m > 0) {
      pconf::NoisySpec noisy;
      noisy.m = noisy_m;
      noisy.seed = pconf::derive_seed(spec.seed, 0xC0FF1DE);
      const auto confidence = pconf::noisy_confidence_model(spec, noisy);
      samples = pconf::sample_pconf_dataset_with(spec, n_pos, confidence);
    } else {
      samples = pconf::sample_pconf_dataset(spec, n_pos);
    }
    pconf::write_pconf_csv(args.out_path, samples);
    std::cout << "wrote " << samples.size() << " pconf samples to "
              << args.out_path << "\n";
  } else if (kind == "labeled") {
    const auto samples = pconf::sample_labeled_dataset(spec, n_pos, n_neg);
    pconf::write_labeled_csv(args.out_path, samples);
    std::cout << "wrote " << samples.size() << " labeled samples to "
              << args.out_path << "\n";
  } else {
    throw pconf::InputFormatError(args.spec_path +
                                  ": kind must be 'pconf' or 'labeled'");
  }
  return kExitOk;
}

void print_single_result(const pconf::SingleResult& r) {
  std::cout << "method=" << pconf::to_string(r.method) << "\n";
  std::cout << "lambda=" << fmt9(r.chosen_lambda) << "\n";
  std::cout << "floor=" << fmt9(r.confidence_floor) << "\n";
  std::cout << "epochs_run=" << r.report.epochs_run << "\n";
  std::cout << "train_objective=" << fmt9(r.train_objective) << "\n";
  std::cout << "final_grad_norm=" << fmt9(r.report.final_grad_norm) << "\n";
  std::cout << "validation_score=" << fmt9(r.validation_score) << "\n";
  if (r.grid_val_score)
    std::cout << "grid_val_score=" << fmt9(*r.grid_val_score) << "\n";
  if (r.degenerate_confidences)
    std::cout << "warning=all confidences equal 1; dataset carries no negative "
                 "information\n";
  if (r.test_accuracy) std::cout << "test_accuracy=" << fmt9(*r.test_accuracy) << "\n";
  if (r.rademacher > 0.0) {
    std::cout << "c_w=" << fmt9(r.model.alpha.norm()) << "\n";
    std::cout << "c_phi=" << fmt9(r.constants.c_phi) << "\n";
    std::cout << "c_r=" << fmt9(r.constants.c_r) << "\n";
    std::cout << "rademacher=" << fmt9(r.rademacher) << "\n";
    std::cout << "uniform_dev_bound=" << fmt9(r.uniform_dev_bound) << "\n";
    std::cout << "est_error_bound=" << fmt9(r.est_error_bound) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-confidence (Pconf) classification toolkit"};
  app.require_subcommand(1);

  // generate
  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Emit a Pconf or labeled CSV");
  generate->add_option("--spec", gen.spec_path, "key=value generation spec file")
      ->required();
  generate->add_option("--out", gen.out_path, "output CSV path")->required();

  // train
  pconf::SingleConfig train_cfg;
  std::string train_method = "pconf";
  std::string train_loss = "logistic";
  std::string lambda_grid_csv;
  std::string train_config_path;
  auto* train = app.add_subcommand("train", "Train one model from a CSV dataset");
  train->add_option("--config", train_config_path,
                    "key=value config file (flags override)");
  train->add_option("--method", train_method,
                    "pconf|weighted|regression|supervised");
  train->add_option("--train", train_cfg.train_csv, "training CSV");
  train->add_option("--test", train_cfg.test_csv, "labeled test CSV (optional)");
  train->add_option("--val", train_cfg.val_csv, "validation CSV (optional)");
  train->add_option("--loss", train_loss, "logistic|squared|hinge|ramp");
  train->add_option("--lambda", train_cfg.lambda, "l2 regularization strength");
  train->add_option("--lambda-grid", lambda_grid_csv,
                    "comma-separated lambda grid, selected on --val");
  train->add_option("--floor", train_cfg.confidence_floor, "confidence clamp floor");
  train->add_option("--epochs", train_cfg.optimizer.max_epochs, "full-batch epochs");
  train->add_option("--lr", train_cfg.optimizer.step_size, "optimizer step size");
  train->add_option("--seed", train_cfg.seed, "training seed");
  train->add_option("--model-out", train_cfg.model_out, "model output path");

  // eval
  std::string eval_model, eval_test;
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a labeled CSV");
  eval->add_option("--model", eval_model, "model file")->required();
  eval->add_option("--test", eval_test, "labeled test CSV")->required();

  // study
  auto* study = app.add_subcommand("study", "Replication studies");
  study->require_subcommand(1);
  pconf::StudyConfig study_cfg;
  std::string study_mus, study_ms, study_methods, study_loss = "logistic";
  std::string study_config_path;
  const auto add_study_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", study_config_path,
                    "key=value config file (flags override)");
    cmd->add_option("--trials", study_cfg.trials, "trials per cell");
    cmd->add_option("--seed", study_cfg.base_seed, "base seed");
    cmd->add_option("--out", study_cfg.out_dir, "output directory");
    cmd->add_option("--mus", study_mus,
                    "comma-separated diagonal means, e.g. 2.0,2.5");
    cmd->add_option("--methods", study_methods, "comma-separated method names");
    cmd->add_option("--n-train", study_cfg.n_pos_train,
                    "positive (and negative) training samples");
    cmd->add_option("--n-test", study_cfg.n_pos_test,
                    "positive (and negative) test samples");
    cmd->add_option("--epochs", study_cfg.optimizer.max_epochs, "full-batch epochs");
    cmd->add_option("--lr", study_cfg.optimizer.step_size, "optimizer step size");
    cmd->add_option("--lambda", study_cfg.lambda, "l2 regularization strength");
    cmd->add_option("--floor", study_cfg.confidence_floor, "confidence clamp floor");
    cmd->add_option("--loss", study_loss, "training loss");
    cmd->add_flag("!--no-parallel", study_cfg.parallel, "disable trial parallelism");
  };
  auto* overlap = study->add_subcommand("overlap", "Exact-confidence study");
  add_study_flags(overlap);
  auto* noise = study->add_subcommand("noise", "Noisy-confidence study");
  add_study_flags(noise);
  noise->add_option("--ms", study_ms, "comma-separated m values, e.g. 1000,500,100");

  // bound
  double b_n = 1000, b_pi = 0.5, b_cr = 0.01, b_cw = 1.0, b_cphi = 1.0,
         b_delta = 0.05;
  std::string bound_loss = "logistic";
  auto* bound = app.add_subcommand("bound", "Evaluate the deviation bounds");
  bound->add_option("--n", b_n, "sample count")->required();
  bound->add_option("--pi-plus", b_pi, "class prior");
  bound->add_option("--c-r", b_cr, "confidence floor");
  bound->add_option("--loss", bound_loss, "loss name");
  bound->add_option("--c-w", b_cw, "weight norm bound");
  bound->add_option("--c-phi", b_cphi, "feature norm bound");
  bound->add_option("--delta", b_delta, "confidence level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputFormat;
  }

  try {
    if (*generate) return run_generate(gen);

    if (*train) {
      if (!train_config_path.empty()) {
        const auto set_str = [](std::string* out) {
          return [out](const std::string& v) { *out = v; };
        };
        apply_config(
            train, train_config_path,
            {{"method", set_str(&train_method)},
             {"train", set_str(&train_cfg.train_csv)},
             {"test", set_str(&train_cfg.test_csv)},
             {"val", set_str(&train_cfg.val_csv)},
             {"loss", set_str(&train_loss)},
             {"lambda", [&](const std::string& v) { train_cfg.lambda = std::stod(v); }},
             {"lambda-grid", set_str(&lambda_grid_csv)},
             {"floor",
              [&](const std::string& v) { train_cfg.confidence_floor = std::stod(v); }},
             {"epochs",
              [&](const std::string& v) { train_cfg.optimizer.max_epochs = std::stoi(v); }},
             {"lr",
              [&](const std::string& v) { train_cfg.optimizer.step_size = std::stod(v); }},
             {"seed", [&](const std::string& v) { train_cfg.seed = std::stoull(v); }},
             {"model-out", set_str(&train_cfg.model_out)}});
      }
      if (train_cfg.train_csv.empty())
        throw pconf::InputFormatError("train: --train is required");
      train_cfg.method = pconf::method_from_string(train_method);
      train_cfg.loss = pconf::loss_from_string(train_loss);
      if (!lambda_grid_csv.empty())
        train_cfg.lambda_grid = parse_double_list(lambda_grid_csv);
      print_single_result(pconf::train_single(train_cfg));
      return kExitOk;
    }

    if (*eval) {
      const auto model = pconf::load_model(eval_model);
      const auto test_set = pconf::read_labeled_csv(eval_test);
      if (test_set.empty())
        throw pconf::InputFormatError(eval_test + ": no samples");
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      double sum = 0.0, sq = 0.0;
      for (const auto& s : test_set) {
        const double z = model.margin(s.x);
        lo = std::min(lo, z);
        hi = std::max(hi, z);
        sum += z;
        sq += z * z;
      }
      const double n = static_cast<double>(test_set.size());
      const double mean_margin = sum / n;
      const double var = std::max(0.0, sq / n - mean_margin * mean_margin);
      std::cout << "n=" << test_set.size() << "\n";
      std::cout << "accuracy=" << fmt9(pconf::accuracy(test_set, model)) << "\n";
      std::cout << "margin_mean=" << fmt9(mean_margin) << "\n";
      std::cout << "margin_std=" << fmt9(std::sqrt(var)) << "\n";
      std::cout << "margin_min=" << fmt9(lo) << "\n";
      std::cout << "margin_max=" << fmt9(hi) << "\n";
      return kExitOk;
    }

    if (*study) {
      CLI::App* active = *overlap ? static_cast<CLI::App*>(overlap)
                                  : static_cast<CLI::App*>(noise);
      if (!study_config_path.empty()) {
        const auto set_str = [](std::string* out) {
          return [out](const std::string& v) { *out = v; };
        };
        std::map<std::string, std::function<void(const std::string&)>> setters = {
            {"trials", [&](const std::string& v) { study_cfg.trials = std::stoi(v); }},
            {"seed",
             [&](const std::string& v) { study_cfg.base_seed = std::stoull(v); }},
            {"out", set_str(&study_cfg.out_dir)},
            {"mus", set_str(&study_mus)},
            {"methods", set_str(&study_methods)},
            {"n-train",
             [&](const std::string& v) { study_cfg.n_pos_train = std::stoi(v); }},
            {"n-test",
             [&](const std::string& v) { study_cfg.n_pos_test = std::stoi(v); }},
            {"epochs",
             [&](const std::string& v) { study_cfg.optimizer.max_epochs = std::stoi(v); }},
            {"lr",
             [&](const std::string& v) { study_cfg.optimizer.step_size = std::stod(v); }},
            {"lambda", [&](const std::string& v) { study_cfg.lambda = std::stod(v); }},
            {"floor",
             [&](const std::string& v) { study_cfg.confidence_floor = std::stod(v); }},
            {"loss", set_str(&study_loss)}};
        if (*noise) setters.emplace("ms", set_str(&study_ms));
        apply_config(active, study_config_path, setters);
      }
      if (study_cfg.out_dir.empty())
        throw pconf::InputFormatError("study: --out is required");
      if (!study_mus.empty()) {
        study_cfg.mu_minus_list.clear();
        for (double v : parse_double_list(study_mus))
          study_cfg.mu_minus_list.push_back((pconf::Vec(2) << v, v).finished());
      }
      if (!study_methods.empty()) {
        std::istringstream ss(study_methods);
        std::string name;
        while (std::getline(ss, name, ','))
          if (!name.empty())
            study_cfg.methods.push_back(pconf::method_from_string(name));
      }
      study_cfg.loss = pconf::loss_from_string(study_loss);
      study_cfg.n_neg_train = study_cfg.n_pos_train;
      study_cfg.n_neg_test = study_cfg.n_pos_test;
      pconf::StudyResult result;
      if (*overlap) {
        result = pconf::run_overlap_study(study_cfg);
      } else {
        if (!study_ms.empty()) {
          study_cfg.m_list.clear();
          for (double v : parse_double_list(study_ms))
            study_cfg.m_list.push_back(static_cast<int>(v));
        }
        result = pconf::run_noise_study(study_cfg);
      }
      std::cout << pconf::summary_to_csv(result.summary);
      std::cout << "wrote trials.csv and summary.csv to " << study_cfg.out_dir
                << "\n";
      return kExitOk;
    }

    if (*bound) {
      const auto kind = pconf::loss_from_string(bound_loss);
      const double c_g = b_cw * b_cphi;
      const auto lb = pconf::loss_constants(kind, c_g);
      const double rn = pconf::rademacher_linear(b_cw, b_cphi, b_n);
      pconf::BoundInputs b{b_n, b_pi, b_cr, lb.c_ell, lb.l_ell, rn, b_delta};
      std::cout << "c_g=" << fmt9(c_g) << "\n";
      std::cout << "c_ell=" << fmt9(lb.c_ell) << "\n";
      std::cout << "l_ell=" << fmt9(lb.l_ell) << "\n";
      std::cout << "rademacher=" << fmt9(rn) << "\n";
      std::cout << "uniform_dev_bound=" << fmt9(pconf::uniform_deviation_bound(b))
                << "\n";
      std::cout << "est_error_bound=" << fmt9(pconf::estimation_error_bound(b))
                << "\n";
      return kExitOk;
    }
  } catch (const pconf::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pconf::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pconf::InputFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputFormat;
  } catch (const pconf::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputFormat;
  }
  return kExitOk;
}
