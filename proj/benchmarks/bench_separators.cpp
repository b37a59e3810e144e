#include <benchmark/benchmark.h>

#include "octk/generators.hpp"
#include "octk/separators.hpp"

using namespace octk;

static Graph grid(int side) {
  Graph g(side * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) g.add_edge(r * side + c, r * side + c + 1);
      if (r + 1 < side) g.add_edge(r * side + c, (r + 1) * side + c);
    }
  return g;
}

static void BM_MinVertexCut(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Graph g = grid(side);
  for (auto _ : state) benchmark::DoNotOptimize(min_vertex_cut(g, 0, side * side - 1).cut.size());
}
BENCHMARK(BM_MinVertexCut)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

// complete binary tree, root 0
static Graph binary_tree(int depth) {
  Graph g((1 << (depth + 1)) - 1);
  for (Vertex v = 1; v < g.num_vertices(); ++v) g.add_edge(v, (v - 1) / 2);
  return g;
}

static void BM_ImportantSeparators(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  Graph g = binary_tree(depth);
  VertexSet x{0}, y;
  for (Vertex v = (1 << depth) - 1; v < g.num_vertices(); ++v) y.push_back(v);
  std::size_t count = 0;
  for (auto _ : state) {
    count = enumerate_important_separators(g, x, y, static_cast<int>(state.range(1))).size();
    benchmark::DoNotOptimize(count);
  }
  state.counters["separators"] = static_cast<double>(count);
}
BENCHMARK(BM_ImportantSeparators)->ArgsProduct({{3, 5, 7}, {2, 4, 6}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
