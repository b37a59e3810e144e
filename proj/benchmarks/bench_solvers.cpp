#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "octk/generators.hpp"
#include "octk/solvers.hpp"
#include "octk/treewidth.hpp"

using namespace octk;

static Graph gnp(std::uint64_t seed, int n, double p) {
  Rng rng(seed);
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

static void BM_MinOct(benchmark::State& state) {
  Graph g = gnp(3, static_cast<int>(state.range(0)), 4.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_oct(g));
}
BENCHMARK(BM_MinOct)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

// random 2-tree, every edge kept with probability 0.8
static Graph partial_2tree(std::uint64_t seed, int n) {
  Rng rng(seed);
  Graph g(n);
  std::vector<std::pair<Vertex, Vertex>> faces{{0, 1}};
  g.add_edge(0, 1);
  for (Vertex v = 2; v < n; ++v) {
    auto [a, b] = faces[rng.below(faces.size())];
    if (rng.bernoulli(0.8)) g.add_edge(v, a);
    if (rng.bernoulli(0.8)) g.add_edge(v, b);
    faces.push_back({v, a});
    faces.push_back({v, b});
  }
  return g;
}

static void BM_OctDp(benchmark::State& state) {
  Graph g = partial_2tree(9, static_cast<int>(state.range(0)));
  auto td = decompose(g, 2);
  std::size_t size = 0;
  for (auto _ : state) {
    size = oct_dp(g, *td).size();
    benchmark::DoNotOptimize(size);
  }
  state.counters["oct"] = static_cast<double>(size);
}
BENCHMARK(BM_OctDp)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_ComposeAndSolve(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  std::vector<GraphBudget> in;
  for (int i = 0; i < t; ++i) in.push_back({gnp(static_cast<std::uint64_t>(i), 5, 0.5), 1});
  // compositions need equal edge counts
  for (auto& x : in) x.graph = in.front().graph;
  for (auto _ : state) {
    auto out = compose_cluster(in);
    benchmark::DoNotOptimize(solve_oct(out.instance.graph, out.instance.budget).has_value());
  }
}
BENCHMARK(BM_ComposeAndSolve)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
