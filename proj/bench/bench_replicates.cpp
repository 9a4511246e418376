// Serial reference driver vs the OpenMP block driver on the estimator kernels.

#include <benchmark/benchmark.h>

#include "rrt/rare_event.hpp"
#include "rrt/replicates.hpp"
#include "rrt/tree.hpp"

namespace {

rrt::Execution backend(const benchmark::State& state) {
  return state.range(0) == 0 ? rrt::Execution{rrt::Backend::serial, 1} : rrt::Execution{rrt::Backend::openmp, 0};
}

void BM_Height(benchmark::State& state) {
  const auto exec = backend(state);
  for (auto _ : state) {
    auto m = rrt::run_replicates<1>(
        2000, 7,
        [](rrt::Stream& s, std::uint64_t) {
          thread_local std::vector<std::uint32_t> depth;
          return std::array<double, 1>{static_cast<double>(rrt::sample_uniform_height(10000, s, depth))};
        },
        exec);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * 2000 * 10000);
}

void BM_PiTail(benchmark::State& state) {
  const auto exec = backend(state);
  for (auto _ : state) benchmark::DoNotOptimize(rrt::estimate_pi_tail(10000, 8, 3.0, 100000, 3, exec));
  state.SetItemsProcessed(state.iterations() * 100000);
}

void BM_TiltedWeight(benchmark::State& state) {
  const auto exec = backend(state);
  for (auto _ : state) benchmark::DoNotOptimize(rrt::estimate_height_at_most_is(64, 5, {0.6}, 20000, 5, exec));
  state.SetItemsProcessed(state.iterations() * 20000);
}

}  // namespace

BENCHMARK(BM_Height)->ArgName("openmp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PiTail)->ArgName("openmp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TiltedWeight)->ArgName("openmp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
