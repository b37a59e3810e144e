#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "octk/graph.hpp"
#include "octk/instances.hpp"

namespace octk {

struct SolverLimits {
  int max_vertices = 5000;
  std::uint64_t max_nodes = 5'000'000;  // search nodes before giving up
  int elimination_width = 8;            // largest factor scope for variable elimination
};

struct Solution {
  VertexSet deleted;
  std::int64_t cost = 0;
  Coloring coloring;  // id-indexed, kUncolored on deleted or absent vertices
};

// All solvers return a minimum solution when its cost is <= budget and
// nullopt otherwise. CeilingExceeded is thrown past the configured limits.
std::optional<Solution> solve_oct(const Graph& g, std::int64_t budget, const SolverLimits& lim = {});
std::optional<Solution> solve_weighted_oct(const Graph& g, std::int64_t budget, const SolverLimits& lim = {});
std::optional<Solution> solve_annotated(const AnnotatedInstance& inst, const SolverLimits& lim = {});
std::optional<Solution> solve_restricted(const RestrictedInstance& inst, const SolverLimits& lim = {});
std::optional<Solution> solve_vertex_cover(const Graph& g, std::int64_t budget, const SolverLimits& lim = {});

// Minimum costs, or nullopt when the instance has no solution at all.
std::optional<std::int64_t> min_oct(const Graph& g, const SolverLimits& lim = {});
std::optional<std::int64_t> min_weighted_oct(const Graph& g, const SolverLimits& lim = {});
std::optional<std::int64_t> min_vertex_cover(const Graph& g, const SolverLimits& lim = {});

// A 2-coloring of g - removed with c(p) = c(q) for every kept mono pair, if any.
std::optional<Coloring> annotated_coloring(const Graph& g, std::span<const VertexPair> mono,
                                           std::span<const Vertex> removed);

struct SolutionCheck {
  std::span<const VertexPair> mono;
  const VertexSet* deletable = nullptr;  // null: every vertex deletable
  bool weighted = false;
};
// Re-verifies a solution from scratch: deletions allowed, coloring proper on
// the residual graph, mono pairs respected, cost consistent.
bool check_solution(const Graph& g, const Solution& s, const SolutionCheck& how = {});

}  // namespace octk
