#include <benchmark/benchmark.h>

#include "octk/generators.hpp"
#include "octk/kernel.hpp"

using namespace octk;

static OctInstance instance(int n, int w, int k) {
  RandomSpec spec;
  spec.n = n;
  spec.w = w;
  spec.modulator_size = k;
  spec.edge_prob = 0.25;
  spec.budget = k / 2;
  return random_instance(static_cast<std::uint64_t>(n * 131 + w * 7 + k), spec);
}

static void BM_Kernelize(benchmark::State& state) {
  auto inst = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), static_cast<int>(state.range(2)));
  std::size_t out = 0;
  for (auto _ : state) {
    auto r = kernelize(inst, static_cast<int>(state.range(1)));
    out = static_cast<std::size_t>(r.instance.graph.num_vertices());
    benchmark::DoNotOptimize(out);
  }
  state.counters["kernel_vertices"] = static_cast<double>(out);
}
BENCHMARK(BM_Kernelize)
    ->ArgsProduct({{20, 40, 80}, {1, 2}, {3, 5}})
    ->Unit(benchmark::kMillisecond);

static void BM_HittingSet(benchmark::State& state) {
  auto inst = instance(static_cast<int>(state.range(0)), 1, static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto r = compute_hitting_set(inst.graph, inst.modulator, inst.budget);
    benchmark::DoNotOptimize(r.hitting_set.data());
  }
}
BENCHMARK(BM_HittingSet)->ArgsProduct({{40, 160, 640}, {3, 6}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
