#include "pconf/optim.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "pconf/errors.hpp"

namespace pconf {

namespace {

void check_config(const OptimizerConfig& c) {
  if (!(c.step_size > 0.0)) throw std::domain_error("optimizer: step_size must be > 0");
  if (!(c.beta1 >= 0.0 && c.beta1 < 1.0))
    throw std::domain_error("optimizer: beta1 must be in [0,1)");
  if (!(c.beta2 >= 0.0 && c.beta2 < 1.0))
    throw std::domain_error("optimizer: beta2 must be in [0,1)");
  if (!(c.epsilon > 0.0)) throw std::domain_error("optimizer: epsilon must be > 0");
  if (c.max_epochs < 1) throw std::domain_error("optimizer: max_epochs must be >= 1");
  if (!(c.grad_tolerance >= 0.0))
    throw std::domain_error("optimizer: grad_tolerance must be >= 0");
}

}  // namespace

TrainReport minimize_compiled(const CompiledObjective& objective,
                              const OptimizerConfig& config) {
  check_config(config);
  const int dim = objective.dim();

  Vec alpha = Vec::Zero(dim);
  Vec grad(dim);
  Vec m = Vec::Zero(dim);
  Vec v = Vec::Zero(dim);

  TrainReport report;
  double value = objective.value_and_grad(alpha, grad);
  double grad_norm = grad.norm();
  if (!std::isfinite(value) || !std::isfinite(grad_norm))
    throw DivergenceError(0, "optimizer: non-finite objective at initialization");

  double best_value = value;
  double best_grad_norm = grad_norm;
  Vec best_alpha = alpha;
  if (config.trace_stride > 0) report.objective_trace.push_back(value);

  int epoch = 0;
  while (epoch < config.max_epochs && grad_norm > config.grad_tolerance) {
    ++epoch;
    if (config.algorithm == Algorithm::AdaptiveMoment) {
      m = config.beta1 * m + (1.0 - config.beta1) * grad;
      v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
      const double m_corr = 1.0 - std::pow(config.beta1, epoch);
      const double v_corr = 1.0 - std::pow(config.beta2, epoch);
      alpha -= (config.step_size / m_corr) *
               (m.array() / ((v / v_corr).array().sqrt() + config.epsilon)).matrix();
    } else {
      alpha -= config.step_size * grad;
    }

    if (!alpha.allFinite())
      throw DivergenceError(
          epoch, "optimizer diverged at epoch " + std::to_string(epoch) +
                     " (weights non-finite); try a smaller step size");
    try {
      value = objective.value_and_grad(alpha, grad);
    } catch (const std::domain_error&) {
      throw DivergenceError(
          epoch, "optimizer diverged at epoch " + std::to_string(epoch) +
                     " (margins non-finite); try a smaller step size");
    }
    grad_norm = grad.norm();
    if (!std::isfinite(value) || !std::isfinite(grad_norm))
      throw DivergenceError(
          epoch, "optimizer diverged at epoch " + std::to_string(epoch) +
                     " (objective or gradient non-finite); try a smaller step size");

    if (value < best_value) {
      best_value = value;
      best_grad_norm = grad_norm;
      best_alpha = alpha;
    }
    if (config.trace_stride > 0 && epoch % config.trace_stride == 0)
      report.objective_trace.push_back(value);
  }

  report.epochs_run = epoch;
  report.final_alpha = std::move(best_alpha);
  report.final_objective = best_value;
  report.final_grad_norm = best_grad_norm;
  return report;
}

std::pair<LinearModel, TrainReport> minimize(const RiskObjective& objective,
                                             std::span<const PconfSample> samples,
                                             const Basis& basis,
                                             const OptimizerConfig& config) {
  CompiledObjective compiled(objective, samples, basis);
  TrainReport report = minimize_compiled(compiled, config);
  LinearModel model{basis, report.final_alpha, 0.0};
  return {std::move(model), std::move(report)};
}

std::pair<LinearModel, TrainReport> minimize(const RiskObjective& objective,
                                             std::span<const LabeledSample> samples,
                                             const Basis& basis,
                                             const OptimizerConfig& config) {
  CompiledObjective compiled(objective, samples, basis);
  TrainReport report = minimize_compiled(compiled, config);
  LinearModel model{basis, report.final_alpha, 0.0};
  return {std::move(model), std::move(report)};
}

LinearModel ridge_regression_fit(std::span<const PconfSample> samples,
                                 const Basis& basis, double lambda) {
  if (samples.empty()) throw std::invalid_argument("ridge fit: empty dataset");
  if (lambda < 0.0) throw std::domain_error("ridge fit: lambda must be >= 0");

  const auto n = static_cast<Eigen::Index>(samples.size());
  const int dim = basis.feature_dim();
  Mat phi(n, dim);
  Vec targets(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    phi.row(i) = basis.featurize(s.x).transpose();
    targets[i] = s.r;
  }

  Mat normal = phi.transpose() * phi;
  normal.diagonal().array() += lambda;
  const Vec rhs = phi.transpose() * targets;

  Vec alpha;
  if (lambda > 0.0) {
    alpha = Eigen::LLT<Mat>(normal).solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<Mat> qr(normal);
    if (qr.rank() < dim)
      throw NumericalError(
          "ridge fit: singular normal matrix at lambda = 0; use lambda > 0");
    alpha = qr.solve(rhs);
  }
  return LinearModel{basis, std::move(alpha), 0.5};
}

}  // namespace pconf
