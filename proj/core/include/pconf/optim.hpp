#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pconf/risk.hpp"

namespace pconf {

enum class Algorithm { AdaptiveMoment, GradientDescent };

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::AdaptiveMoment;
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_epochs = 10000;
  double grad_tolerance = 1e-8;
  std::uint64_t seed = 0;  // reserved for stochastic init; alpha starts at 0
  int trace_stride = 0;    // 0 disables the objective trace
};

struct TrainReport {
  Vec final_alpha;
  int epochs_run = 0;
  double final_objective = 0.0;
  double final_grad_norm = 0.0;
  std::vector<double> objective_trace;
};

// Full-batch first-order minimization of a compiled objective. One update
// per epoch; stops at max_epochs or when the gradient norm falls to
// grad_tolerance. Returns the iterate with the lowest recorded objective,
// which for convex objectives is a free safeguard against late
// oscillation. Throws DivergenceError (naming the epoch) if the objective
// or gradient goes non-finite.
TrainReport minimize_compiled(const CompiledObjective& objective,
                              const OptimizerConfig& config);

// Convenience wrappers that compile the objective and wrap the result in a
// LinearModel over the given basis.
std::pair<LinearModel, TrainReport> minimize(const RiskObjective& objective,
                                             std::span<const PconfSample> samples,
                                             const Basis& basis,
                                             const OptimizerConfig& config);
std::pair<LinearModel, TrainReport> minimize(const RiskObjective& objective,
                                             std::span<const LabeledSample> samples,
                                             const Basis& basis,
                                             const OptimizerConfig& config);

// Least-squares fit of the confidence values,
//   argmin_a sum_i (a . phi(x_i) - r_i)^2 + lambda ||a||^2,
// solved directly. The returned model carries margin_offset = 0.5 so its
// sign rule classifies by "fitted confidence > 1/2". With lambda = 0 a
// rank-deficient normal matrix raises NumericalError.
LinearModel ridge_regression_fit(std::span<const PconfSample> samples,
                                 const Basis& basis, double lambda);

}  // namespace pconf
