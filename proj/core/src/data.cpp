#include "pconf/data.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pconf/rng.hpp"

namespace pconf {

namespace {

// Kept strictly inside (0,1): the low end avoids exp underflow to exactly
// zero, the high end avoids rounding up to exactly one.
double open_unit_sigmoid(double t) {
  double p;
  if (t >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-t));
  } else {
    const double e = std::exp(t);
    p = e / (1.0 + e);
  }
  p = std::max(p, std::numeric_limits<double>::denorm_min());
  return std::min(p, std::nextafter(1.0, 0.0));
}

void check_spec(const TwoGaussianSpec& spec) {
  if (spec.dim < 1) throw std::domain_error("TwoGaussianSpec: dim must be >= 1");
  if (spec.mu_plus.size() != spec.dim || spec.mu_minus.size() != spec.dim)
    throw std::invalid_argument("TwoGaussianSpec: mean dimension mismatch");
  if (!(spec.pi_plus > 0.0 && spec.pi_plus < 1.0))
    throw std::domain_error("TwoGaussianSpec: pi_plus must be in (0,1)");
}

}  // namespace

double analytic_confidence(const TwoGaussianSpec& spec, const Vec& x) {
  check_spec(spec);
  if (x.size() != spec.dim)
    throw std::invalid_argument("analytic_confidence: pattern dimension mismatch");
  if (!x.allFinite())
    throw std::domain_error("analytic_confidence: non-finite pattern");
  // log odds = log(pi+/pi-) + (||x - mu-||^2 - ||x - mu+||^2) / 2
  const double log_odds =
      std::log(spec.pi_plus / (1.0 - spec.pi_plus)) +
      0.5 * ((x - spec.mu_minus).squaredNorm() - (x - spec.mu_plus).squaredNorm());
  return open_unit_sigmoid(log_odds);
}

std::vector<PconfSample> sample_pconf_dataset(const TwoGaussianSpec& spec, int n_pos) {
  check_spec(spec);
  if (n_pos < 1) throw std::domain_error("sample_pconf_dataset: n_pos must be >= 1");
  Rng rng(spec.seed);
  std::vector<PconfSample> out;
  out.reserve(static_cast<std::size_t>(n_pos));
  for (int i = 0; i < n_pos; ++i) {
    PconfSample s;
    s.x = spec.mu_plus + rng.normal_vec(spec.dim);
    s.r = analytic_confidence(spec, s.x);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PconfSample> sample_pconf_dataset_with(const TwoGaussianSpec& spec,
                                                   int n_pos,
                                                   const ConfidenceModel& confidence) {
  check_spec(spec);
  if (n_pos < 1) throw std::domain_error("sample_pconf_dataset_with: n_pos must be >= 1");
  Rng rng(spec.seed);
  std::vector<PconfSample> out;
  out.reserve(static_cast<std::size_t>(n_pos));
  for (int i = 0; i < n_pos; ++i) {
    PconfSample s;
    s.x = spec.mu_plus + rng.normal_vec(spec.dim);
    s.r = confidence(s.x);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LabeledSample> sample_labeled_dataset(const TwoGaussianSpec& spec,
                                                  int n_pos, int n_neg) {
  check_spec(spec);
  if (n_pos < 0 || n_neg < 0 || n_pos + n_neg < 1)
    throw std::domain_error("sample_labeled_dataset: need at least one sample");
  Rng rng(spec.seed);
  std::vector<LabeledSample> out;
  out.reserve(static_cast<std::size_t>(n_pos + n_neg));
  for (int i = 0; i < n_pos; ++i)
    out.push_back({spec.mu_plus + rng.normal_vec(spec.dim), +1});
  for (int i = 0; i < n_neg; ++i)
    out.push_back({spec.mu_minus + rng.normal_vec(spec.dim), -1});
  return out;
}

double ConfidenceModel::operator()(const Vec& x) const {
  return open_unit_sigmoid(model.margin(x));
}

ConfidenceModel noisy_confidence_model(const TwoGaussianSpec& spec,
                                       const NoisySpec& noisy) {
  check_spec(spec);
  if (noisy.m < 1) throw std::domain_error("noisy_confidence_model: m must be >= 1");

  TwoGaussianSpec draw = spec;
  draw.seed = noisy.seed;
  const auto train = sample_labeled_dataset(draw, noisy.m, noisy.m);

  RiskObjective objective;
  objective.kind = RiskKind::Supervised;
  objective.loss = LossKind::Logistic;
  objective.reg = Regularizer(noisy.l2_coefficient, RegKind::IdentityExceptBias);

  // Trained until the gradient is flat; the epoch cap is generous because
  // well-separated means put the optimum far from the origin.
  OptimizerConfig config;
  config.step_size = 1e-3;
  config.max_epochs = 50000;
  config.grad_tolerance = 1e-6;

  auto [model, report] =
      minimize(objective, std::span<const LabeledSample>(train),
               Basis::affine(spec.dim), config);
  return ConfidenceModel{std::move(model), std::move(report)};
}

}  // namespace pconf
