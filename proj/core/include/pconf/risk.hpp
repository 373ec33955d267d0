#pragma once

#include <span>
#include <vector>

#include "pconf/loss.hpp"
#include "pconf/model.hpp"

namespace pconf {

// A positive pattern with its positive-confidence value r = p(y=+1|x).
struct PconfSample {
  Vec x;
  double r;
};

// A hard-labeled pattern, y in {+1, -1}.
struct LabeledSample {
  Vec x;
  int y;
};

// Which empirical risk a trainer minimizes.
enum class RiskKind { Pconf, Weighted, Supervised };

struct RiskObjective {
  RiskKind kind = RiskKind::Pconf;
  LossKind loss = LossKind::Logistic;
  Regularizer reg;
};

// max(r_raw, floor). Enforces the positive lower bound the theory needs;
// r_raw must lie in [0,1] and floor in (0,1).
double clamp_confidence(double r_raw, double floor);

// Clamps every confidence in place; applied once at dataset load.
void clamp_confidences(std::vector<PconfSample>& samples, double floor);

struct RiskEval {
  double value;
  Vec grad;
};

// Positive-confidence risk, the sum form
//   sum_i [ l(g(x_i)) + ((1-r_i)/r_i) l(-g(x_i)) ] + (lambda/2) a^T R a.
// The class prior is a dropped proportional constant; divide by n and
// multiply by pi_plus when an estimate of the classification risk is
// wanted (see pconf_risk_mean_value). Requires every r_i > 0.
RiskEval pconf_risk(std::span<const PconfSample> samples, const LinearModel& model,
                    LossKind loss, const Regularizer& reg);

// Unregularized mean of the Pconf objective; multiplied by pi_plus this is
// the unbiased estimate of the classification risk.
double pconf_risk_mean_value(std::span<const PconfSample> samples,
                             const LinearModel& model, LossKind loss);

// Naive confidence-weighted risk,
//   sum_i [ r_i l(g(x_i)) + (1-r_i) l(-g(x_i)) ] + regularization.
RiskEval weighted_risk(std::span<const PconfSample> samples, const LinearModel& model,
                       LossKind loss, const Regularizer& reg);

double weighted_risk_mean_value(std::span<const PconfSample> samples,
                                const LinearModel& model, LossKind loss);

// Fully supervised empirical risk, (1/n) sum_i l(y_i g(x_i)) + regularization.
RiskEval supervised_risk(std::span<const LabeledSample> samples,
                         const LinearModel& model, LossKind loss,
                         const Regularizer& reg);

// Zero-one surrogates used for model selection when no negative validation
// data exists. Lower is better.
double pconf_validation_score(std::span<const PconfSample> samples,
                              const LinearModel& model);
double weighted_validation_score(std::span<const PconfSample> samples,
                                 const LinearModel& model);

// Fraction of samples with predict_label(x) == y.
double accuracy(std::span<const LabeledSample> samples, const LinearModel& model);

// Pre-featurized objective: the feature matrix and per-sample coefficients
// are built once so an optimizer pays only two matrix-vector products per
// evaluation. Per-sample terms are reduced in sample order, which keeps
// results bit-reproducible.
class CompiledObjective {
 public:
  CompiledObjective(const RiskObjective& objective,
                    std::span<const PconfSample> samples, const Basis& basis);
  CompiledObjective(const RiskObjective& objective,
                    std::span<const LabeledSample> samples, const Basis& basis);

  int dim() const { return static_cast<int>(phi_.cols()); }
  Eigen::Index sample_count() const { return phi_.rows(); }

  // Objective value at alpha; fills grad (resized as needed).
  double value_and_grad(const Vec& alpha, Vec& grad) const;
  double value(const Vec& alpha) const;

 private:
  Mat phi_;        // n x feature_dim
  Vec pos_coeff_;  // weight on l(+g_i)
  Vec neg_coeff_;  // weight on l(-g_i)
  LossKind loss_;
  Regularizer reg_;
};

}  // namespace pconf
