#include <benchmark/benchmark.h>

#include <vector>

#include "pconf/data.hpp"
#include "pconf/optim.hpp"
#include "pconf/rng.hpp"
#include "pconf/stats.hpp"
#include "pconf/theory.hpp"

namespace {

using pconf::Basis;
using pconf::LossKind;
using pconf::Vec;

std::vector<pconf::PconfSample> make_dataset(int n) {
  pconf::TwoGaussianSpec spec;
  spec.mu_minus = (Vec(2) << 3.0, 3.0).finished();
  spec.seed = 12345;
  auto data = pconf::sample_pconf_dataset(spec, n);
  pconf::clamp_confidences(data, 0.01);
  return data;
}

void BM_PconfRiskEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto data = make_dataset(n);
  const pconf::RiskObjective obj{pconf::RiskKind::Pconf, LossKind::Logistic, {}};
  const pconf::CompiledObjective compiled(obj, std::span<const pconf::PconfSample>(data),
                                          Basis::affine(2));
  Vec alpha = (Vec(3) << -1.0, -1.0, 2.0).finished();
  Vec grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compiled.value_and_grad(alpha, grad));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PconfRiskEval)->Arg(100)->Arg(1000)->Arg(10000);

void BM_AdamTraining(benchmark::State& state) {
  const auto data = make_dataset(1000);
  const pconf::RiskObjective obj{pconf::RiskKind::Pconf, LossKind::Logistic, {}};
  pconf::OptimizerConfig config;
  config.max_epochs = static_cast<int>(state.range(0));
  config.grad_tolerance = 0.0;
  for (auto _ : state) {
    auto result = minimize(obj, std::span<const pconf::PconfSample>(data),
                           Basis::affine(2), config);
    benchmark::DoNotOptimize(result.second.final_objective);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AdamTraining)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SamplePconfDataset(benchmark::State& state) {
  pconf::TwoGaussianSpec spec;
  spec.mu_minus = (Vec(2) << 3.0, 3.0).finished();
  for (auto _ : state) {
    spec.seed += 1;
    benchmark::DoNotOptimize(
        pconf::sample_pconf_dataset(spec, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePconfDataset)->Arg(1000)->Arg(10000);

void BM_RidgeRegressionFit(benchmark::State& state) {
  const auto data = make_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pconf::ridge_regression_fit(data, Basis::affine(2), 1e-3));
  }
}
BENCHMARK(BM_RidgeRegressionFit)->Arg(1000)->Arg(10000);

void BM_WelchTTest(benchmark::State& state) {
  pconf::Rng rng(1);
  std::vector<double> a(32), b(32);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = 0.3 + rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pconf::welch_t_test(a, b));
  }
}
BENCHMARK(BM_WelchTTest);

void BM_UniformDeviationBound(benchmark::State& state) {
  pconf::BoundInputs b{1000, 0.5, 0.01, 1.31, 1.0, 0.05, 0.05};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pconf::uniform_deviation_bound(b));
  }
}
BENCHMARK(BM_UniformDeviationBound);

}  // namespace

BENCHMARK_MAIN();
