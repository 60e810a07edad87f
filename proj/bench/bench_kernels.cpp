// Serial reference vs OpenMP kernels for the sampling and histogram paths.

#include <benchmark/benchmark.h>

#include "heavytail/cauchy.hpp"
#include "heavytail/density.hpp"
#include "heavytail/gauss.hpp"
#include "heavytail/stats.hpp"
#include "heavytail/transforms.hpp"

namespace {

using heavytail::Execution;
namespace tr = heavytail::transforms;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_RatioPM(benchmark::State& state) {
  const auto sigma = heavytail::gauss::theta_to_covariance(0.5);
  const tr::Weights w({0.3, 0.7});
  for (auto _ : state) {
    auto batch = tr::sample_ratio_pm(sigma, w, 1 << 20, 7, exec_of(state));
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_RatioPM)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StoppedBMPath(benchmark::State& state) {
  const auto sigma = heavytail::gauss::theta_to_covariance(0.5);
  const tr::Weights w({0.5, 0.5});
  for (auto _ : state) {
    auto batch = tr::sample_stopped_bm_path(sigma, w, 1 << 20, 7, exec_of(state));
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_StoppedBMPath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StoppedBMMixture(benchmark::State& state) {
  const heavytail::gauss::ThetaCovariance cov(0.5);
  const tr::Weights w({0.5, 0.5});
  for (auto _ : state) {
    auto batch = tr::sample_stopped_bm_mixture(cov, w, 1 << 20, 7, exec_of(state));
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_StoppedBMMixture)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Histogram(benchmark::State& state) {
  const auto batch = heavytail::cauchy::sample(1 << 22, heavytail::cauchy::CauchyScale(1.0), 3);
  for (auto _ : state) {
    auto bins = heavytail::stats::histogram_density(batch.values, 0.05, -5.0, 5.0,
                                                    exec_of(state));
    benchmark::DoNotOptimize(bins.data());
  }
  state.SetItemsProcessed(state.iterations() * (1 << 22));
}
BENCHMARK(BM_Histogram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DensityPoint(benchmark::State& state) {
  const heavytail::density::DensityModel model(
      state.range(0) == 0 ? heavytail::density::DensityKind::AbsRatio
                          : heavytail::density::DensityKind::StoppedBM,
      0.5, tr::Weights({0.3, 0.7}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(heavytail::density::gv(model, 1.5).value);
  }
}
BENCHMARK(BM_DensityPoint)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
