#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octk/graph.hpp"

namespace octk {

struct TreeDecomposition {
  std::vector<VertexSet> bags;  // node id -> bag
  std::vector<int> parent;      // -1 for the root

  int num_nodes() const { return static_cast<int>(bags.size()); }
  int width() const;
  int root() const;  // -1 when empty
  std::vector<std::vector<int>> children() const;

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

struct DecomposeOptions {
  // Largest residual graph (after reduction rules) handed to the exact subset search.
  int exact_vertex_ceiling = 22;
};

// A decomposition of width <= w, or nullopt if tw(g) > w. Throws CeilingExceeded
// when w >= 3 and the exact search would be too large.
std::optional<TreeDecomposition> decompose(const Graph& g, int w, const DecomposeOptions& opts = {});

// Decomposition induced by an elimination ordering of all vertices of g.
TreeDecomposition decomposition_from_ordering(const Graph& g, const std::vector<Vertex>& order);

// nullopt when valid, otherwise a short description of the first violation.
std::optional<std::string> validate(const Graph& g, const TreeDecomposition& td);

// Minimum-cardinality odd cycle transversal by dynamic programming over td.
VertexSet oct_dp(const Graph& g, const TreeDecomposition& td);

enum class DeletionMode { exact, greedy };

// X with g - X bipartite and of treewidth <= w.
VertexSet compute_deletion_set(const Graph& g, int w, DeletionMode mode, int exact_ceiling = 16);

std::string format_decomposition(const TreeDecomposition& td);
TreeDecomposition parse_decomposition(std::string_view text);

}  // namespace octk
