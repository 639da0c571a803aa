// SPDX-License-Identifier: Apache-2.0

// Serial reference versus OpenMP kernels. Arg 0 selects Exec::Serial,
// arg 1 Exec::Parallel.

#include <benchmark/benchmark.h>

#include "onebit/cme.hpp"
#include "onebit/gaussian.hpp"

using namespace onebit;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_OrthantProb(benchmark::State& state) {
  const RMatrix cov = real_stack_cov(random_channel_covariance(4, 1));
  const OrthantSpec orthant({1, -1, 1, 1, -1, 1, -1, -1});
  IntegrationBudget budget;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvn_orthant_prob(RVector::Zero(8), cov, orthant, budget, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_OrthantProb)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SampleGaussian(benchmark::State& state) {
  const HermitianPSD cov = random_channel_covariance(8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_complex_gaussian(cov, 50000, 3, exec_of(state)));
  label(state);
}
BENCHMARK(BM_SampleGaussian)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimulateTrials(benchmark::State& state) {
  SystemConfig cfg;
  cfg.n = 4;
  cfg.m = 4;
  cfg.snr_db = 10.0;
  cfg.channel_cov = random_channel_covariance(4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_trials(cfg, 20000, exec_of(state)));
  label(state);
}
BENCHMARK(BM_SimulateTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NoiselessCme(benchmark::State& state) {
  const HermitianPSD c_h = random_channel_covariance(3, 5);
  CVector v(3);
  v << Complex(1, 1), Complex(-1, 1), Complex(1, -1);
  const QuantizedObs r = quantize(v);
  CmeBudget budget;
  for (auto _ : state) benchmark::DoNotOptimize(cme_multivariate_noiseless(r, c_h, budget, exec_of(state)));
  label(state);
}
BENCHMARK(BM_NoiselessCme)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NumericCme(benchmark::State& state) {
  const CMatrix a = system_matrix(pilot_vector(PilotKind::optimal(), 8), 2);
  const NumericCme est(a, random_channel_covariance(2, 6), HermitianPSD::identity(16, 0.1), CmeBudget{},
                       exec_of(state));
  CVector v = CVector::Constant(16, Complex(1, -1));
  v(3) = Complex(-1, -1);
  const QuantizedObs r = quantize(v);
  for (auto _ : state) benchmark::DoNotOptimize(est.estimate(r));
  label(state);
}
BENCHMARK(BM_NumericCme)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
