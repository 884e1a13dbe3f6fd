// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare
// thread counts, e.g. OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include <vector>

#include "tnorm/bounds.hpp"
#include "tnorm/kernels.hpp"
#include "tnorm/random_models.hpp"
#include "tnorm/spectral.hpp"

namespace {

using namespace tnorm;

DenseTensor cube(std::size_t n) {
  return sample_iid(Shape({n, n, n}), {LawKind::gaussian, 1.0}, 7);
}

template <auto Kernel>
void BM_Collapse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseTensor x = cube(n);
  const kernels::ModeSplit split = kernels::split_at(x.shape(), 1);
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(split.outer * split.inner);
  for (auto _ : state) {
    Kernel(x.entries(), split, v, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}

template <auto Kernel>
void BM_NetMax(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseTensor x = sample_iid(Shape({n, n, n}), {LawKind::gaussian, 1.0}, 11);
  const SphereCover cover = build_sphere_cover(n, kK0 / 3.0);
  std::vector<kernels::CoverView> views(3, {cover.points, cover.dim});
  for (auto _ : state) {
    auto best = Kernel(x, views);
    benchmark::DoNotOptimize(best.value);
  }
  const double tuples = static_cast<double>(cover.size());
  state.counters["tuples"] = tuples * tuples * tuples;
}

void BM_PowerIteration(benchmark::State& state) {
  const DenseTensor x = cube(static_cast<std::size_t>(state.range(0)));
  PowerIterConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 100;
  for (auto _ : state) benchmark::DoNotOptimize(power_iteration(x, cfg).value);
}

}  // namespace

BENCHMARK(BM_Collapse<tnorm::kernels::serial::collapse>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Collapse<tnorm::kernels::parallel::collapse>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_NetMax<tnorm::kernels::serial::net_max>)->Arg(2);
BENCHMARK(BM_NetMax<tnorm::kernels::parallel::net_max>)->Arg(2);
BENCHMARK(BM_PowerIteration)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
