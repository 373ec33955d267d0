#pragma once

#include <cstdint>
#include <vector>

#include "pconf/optim.hpp"
#include "pconf/risk.hpp"

namespace pconf {

// Two isotropic unit-variance Gaussians: positives at mu_plus, negatives at
// mu_minus, class prior pi_plus. All sampling is driven by Rng (see
// rng.hpp) so datasets reproduce bit-for-bit across platforms.
struct TwoGaussianSpec {
  int dim = 2;
  Vec mu_plus = Vec::Zero(2);
  Vec mu_minus = (Vec(2) << 2.0, 2.0).finished();
  double pi_plus = 0.5;
  std::uint64_t seed = 0;
};

// Exact posterior r(x) = pi+ N(x; mu+, I) / (pi+ N(x; mu+, I) + pi- N(x; mu-, I)),
// evaluated in log space as a logistic of the log-density difference, so it
// underflows to zero only when the log-odds exceed ~745.
double analytic_confidence(const TwoGaussianSpec& spec, const Vec& x);

// n_pos draws from N(mu_plus, I), each paired with its exact analytic
// confidence (no clamping here; clamp at load).
std::vector<PconfSample> sample_pconf_dataset(const TwoGaussianSpec& spec, int n_pos);

// n_pos positives followed by n_neg negatives.
std::vector<LabeledSample> sample_labeled_dataset(const TwoGaussianSpec& spec,
                                                  int n_pos, int n_neg);

// Noisy-confidence generator: an l2-regularized affine logistic regression
// is fit on m fresh positives and m fresh negatives (penalty off the bias
// coordinate), and x -> sigmoid(g(x)) is used as the confidence. The 2m
// samples exist only inside this call.
struct NoisySpec {
  int m = 1000;
  double l2_coefficient = 1e-3;
  std::uint64_t seed = 0;
};

struct ConfidenceModel {
  LinearModel model;
  TrainReport report;
  double operator()(const Vec& x) const;  // sigmoid(margin), always in (0,1)
};

ConfidenceModel noisy_confidence_model(const TwoGaussianSpec& spec,
                                       const NoisySpec& noisy);

// Positives from N(mu_plus, I) with confidences drawn through an arbitrary
// confidence function; used by the noise study.
std::vector<PconfSample> sample_pconf_dataset_with(const TwoGaussianSpec& spec,
                                                   int n_pos,
                                                   const ConfidenceModel& confidence);

}  // namespace pconf
