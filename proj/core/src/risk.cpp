#include "pconf/risk.hpp"

#include <cmath>
#include <stdexcept>

namespace pconf {

double clamp_confidence(double r_raw, double floor) {
  if (!(r_raw >= 0.0 && r_raw <= 1.0))
    throw std::domain_error("clamp_confidence: raw confidence must be in [0,1]");
  if (!(floor > 0.0 && floor < 1.0))
    throw std::domain_error("clamp_confidence: floor must be in (0,1)");
  return std::max(r_raw, floor);
}

void clamp_confidences(std::vector<PconfSample>& samples, double floor) {
  for (auto& s : samples) s.r = clamp_confidence(s.r, floor);
}

namespace {

Mat featurize_all(const Basis& basis, std::span<const PconfSample> samples) {
  Mat phi(static_cast<Eigen::Index>(samples.size()), basis.feature_dim());
  for (Eigen::Index i = 0; i < phi.rows(); ++i)
    phi.row(i) = basis.featurize(samples[static_cast<std::size_t>(i)].x).transpose();
  return phi;
}

Mat featurize_all(const Basis& basis, std::span<const LabeledSample> samples) {
  Mat phi(static_cast<Eigen::Index>(samples.size()), basis.feature_dim());
  for (Eigen::Index i = 0; i < phi.rows(); ++i)
    phi.row(i) = basis.featurize(samples[static_cast<std::size_t>(i)].x).transpose();
  return phi;
}

}  // namespace

CompiledObjective::CompiledObjective(const RiskObjective& objective,
                                     std::span<const PconfSample> samples,
                                     const Basis& basis)
    : loss_(objective.loss), reg_(objective.reg) {
  if (samples.empty()) throw std::invalid_argument("risk: empty dataset");
  if (objective.loss == LossKind::ZeroOne)
    throw std::domain_error("risk: zero-one loss cannot be a training objective");
  if (objective.kind == RiskKind::Supervised)
    throw std::invalid_argument("risk: supervised objective needs labeled samples");

  const auto n = static_cast<Eigen::Index>(samples.size());
  pos_coeff_.resize(n);
  neg_coeff_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = samples[static_cast<std::size_t>(i)].r;
    if (objective.kind == RiskKind::Pconf) {
      if (!(r > 0.0))
        throw std::domain_error(
            "pconf risk: confidence <= 0; clamp_confidence the dataset first");
      pos_coeff_[i] = 1.0;
      neg_coeff_[i] = (1.0 - r) / r;
    } else {
      if (!(r >= 0.0 && r <= 1.0))
        throw std::domain_error("weighted risk: confidence must be in [0,1]");
      pos_coeff_[i] = r;
      neg_coeff_[i] = 1.0 - r;
    }
  }
  phi_ = featurize_all(basis, samples);
}

CompiledObjective::CompiledObjective(const RiskObjective& objective,
                                     std::span<const LabeledSample> samples,
                                     const Basis& basis)
    : loss_(objective.loss), reg_(objective.reg) {
  if (samples.empty()) throw std::invalid_argument("risk: empty dataset");
  if (objective.loss == LossKind::ZeroOne)
    throw std::domain_error("risk: zero-one loss cannot be a training objective");
  if (objective.kind != RiskKind::Supervised)
    throw std::invalid_argument("risk: Pconf/weighted objectives need Pconf samples");

  const auto n = static_cast<Eigen::Index>(samples.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  pos_coeff_.resize(n);
  neg_coeff_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = samples[static_cast<std::size_t>(i)].y;
    if (y != 1 && y != -1)
      throw std::domain_error("supervised risk: labels must be +1 or -1");
    pos_coeff_[i] = y > 0 ? inv_n : 0.0;
    neg_coeff_[i] = y > 0 ? 0.0 : inv_n;
  }
  phi_ = featurize_all(basis, samples);
}

double CompiledObjective::value_and_grad(const Vec& alpha, Vec& grad) const {
  if (alpha.size() != phi_.cols())
    throw std::invalid_argument("risk: alpha dimension mismatch");
  const Vec z = phi_ * alpha;
  double value = 0.0;
  Vec coeff(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    double c = 0.0;
    if (pos_coeff_[i] != 0.0) {
      value += pos_coeff_[i] * loss_value(loss_, z[i]);
      c += pos_coeff_[i] * loss_grad(loss_, z[i]);
    }
    if (neg_coeff_[i] != 0.0) {
      value += neg_coeff_[i] * loss_value(loss_, -z[i]);
      c -= neg_coeff_[i] * loss_grad(loss_, -z[i]);
    }
    coeff[i] = c;
  }
  grad = phi_.transpose() * coeff;
  value += reg_.value(alpha);
  grad += reg_.grad(alpha);
  return value;
}

double CompiledObjective::value(const Vec& alpha) const {
  if (alpha.size() != phi_.cols())
    throw std::invalid_argument("risk: alpha dimension mismatch");
  const Vec z = phi_ * alpha;
  double value = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (pos_coeff_[i] != 0.0) value += pos_coeff_[i] * loss_value(loss_, z[i]);
    if (neg_coeff_[i] != 0.0) value += neg_coeff_[i] * loss_value(loss_, -z[i]);
  }
  return value + reg_.value(alpha);
}

namespace {

RiskEval eval_with(const CompiledObjective& obj, const LinearModel& model) {
  RiskEval out;
  out.value = 0.0;
  out.value = obj.value_and_grad(model.alpha, out.grad);
  return out;
}

}  // namespace

RiskEval pconf_risk(std::span<const PconfSample> samples, const LinearModel& model,
                    LossKind loss, const Regularizer& reg) {
  RiskObjective obj{RiskKind::Pconf, loss, reg};
  return eval_with(CompiledObjective(obj, samples, model.basis), model);
}

RiskEval weighted_risk(std::span<const PconfSample> samples, const LinearModel& model,
                       LossKind loss, const Regularizer& reg) {
  RiskObjective obj{RiskKind::Weighted, loss, reg};
  return eval_with(CompiledObjective(obj, samples, model.basis), model);
}

RiskEval supervised_risk(std::span<const LabeledSample> samples,
                         const LinearModel& model, LossKind loss,
                         const Regularizer& reg) {
  RiskObjective obj{RiskKind::Supervised, loss, reg};
  return eval_with(CompiledObjective(obj, samples, model.basis), model);
}

double pconf_risk_mean_value(std::span<const PconfSample> samples,
                             const LinearModel& model, LossKind loss) {
  RiskObjective obj{RiskKind::Pconf, loss, Regularizer()};
  CompiledObjective compiled(obj, samples, model.basis);
  return compiled.value(model.alpha) / static_cast<double>(samples.size());
}

double weighted_risk_mean_value(std::span<const PconfSample> samples,
                                const LinearModel& model, LossKind loss) {
  RiskObjective obj{RiskKind::Weighted, loss, Regularizer()};
  CompiledObjective compiled(obj, samples, model.basis);
  return compiled.value(model.alpha) / static_cast<double>(samples.size());
}

double pconf_validation_score(std::span<const PconfSample> samples,
                              const LinearModel& model) {
  if (samples.empty()) throw std::invalid_argument("validation score: empty dataset");
  double total = 0.0;
  for (const auto& s : samples) {
    if (!(s.r > 0.0))
      throw std::domain_error(
          "pconf validation: confidence <= 0; clamp_confidence the dataset first");
    const double z = model.margin(s.x);
    total += loss_value(LossKind::ZeroOne, z) +
             (1.0 - s.r) / s.r * loss_value(LossKind::ZeroOne, -z);
  }
  return total / static_cast<double>(samples.size());
}

double weighted_validation_score(std::span<const PconfSample> samples,
                                 const LinearModel& model) {
  if (samples.empty()) throw std::invalid_argument("validation score: empty dataset");
  double total = 0.0;
  for (const auto& s : samples) {
    const double z = model.margin(s.x);
    total += s.r * loss_value(LossKind::ZeroOne, z) +
             (1.0 - s.r) * loss_value(LossKind::ZeroOne, -z);
  }
  return total / static_cast<double>(samples.size());
}

double accuracy(std::span<const LabeledSample> samples, const LinearModel& model) {
  if (samples.empty()) throw std::invalid_argument("accuracy: empty dataset");
  Eigen::Index correct = 0;
  for (const auto& s : samples)
    if (model.predict(s.x) == s.y) ++correct;
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace pconf
