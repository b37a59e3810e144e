#pragma once

// Simple undirected graphs with stable vertex ids.
//
// Path length and parity count VERTICES, not edges: the path p-a-b-q with
// endpoints p, q has two internal vertices, and a path "of odd length" is one
// with an odd number of vertices. Everything in octk uses this convention.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace octk {

using Vertex = std::int32_t;
using VertexSet = std::vector<Vertex>;  // sorted, no duplicates
using VertexPair = std::pair<Vertex, Vertex>;  // first < second

inline VertexPair make_pair_sorted(Vertex a, Vertex b) {
  return a < b ? VertexPair{a, b} : VertexPair{b, a};
}

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  Vertex add_vertex(std::int64_t weight = 1);
  // Makes id v present (growing the id range if needed).
  void ensure_vertex(Vertex v);
  // Throws PreconditionError on self-loops or missing endpoints. Returns false
  // if the edge was already present.
  bool add_edge(Vertex u, Vertex v);
  bool remove_edge(Vertex u, Vertex v);
  void remove_vertex(Vertex v);

  bool has_vertex(Vertex v) const {
    return v >= 0 && v < id_bound() && present_[static_cast<std::size_t>(v)];
  }
  bool has_edge(Vertex u, Vertex v) const;

  // One past the largest id ever allocated.
  int id_bound() const { return static_cast<int>(present_.size()); }
  int num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

  std::int64_t weight(Vertex v) const { return weight_[static_cast<std::size_t>(v)]; }
  void set_weight(Vertex v, std::int64_t w);
  bool has_nonunit_weights() const;

  VertexSet vertices() const;
  std::vector<VertexPair> edges() const;  // sorted, u < v

  // G - s and G[s]; ids are preserved.
  Graph without(std::span<const Vertex> s) const;
  Graph induced(std::span<const Vertex> s) const;

  // Renumbers present vertices to 0..n-1 in ascending order. Returns the
  // old id of each new id.
  std::vector<Vertex> compact();

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<char> present_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::int64_t> weight_;
  int num_vertices_ = 0;
  std::size_t num_edges_ = 0;
};

// Per-id color: 0, 1 or kUncolored.
using Coloring = std::vector<std::int8_t>;
inline constexpr std::int8_t kUncolored = -1;

struct Bipartition {
  VertexSet side0;
  VertexSet side1;
};

struct OddCycle {
  std::vector<Vertex> cycle;  // closed: last vertex adjacent to first
};

std::variant<Bipartition, OddCycle> bipartition(const Graph& g, std::span<const Vertex> scope);
std::variant<Bipartition, OddCycle> bipartition(const Graph& g);
bool is_bipartite(const Graph& g);
bool is_bipartite_without(const Graph& g, std::span<const Vertex> removed);

// Coloring indexed by id, kUncolored outside the bipartition.
Coloring coloring_of(const Graph& g, const Bipartition& b);

struct ColoringConflict {
  VertexSet component;  // component of g - s holding the internal vertices
  Vertex p = -1;
  Vertex q = -1;
  std::vector<Vertex> path;  // p ... q, internal vertices uncolored
};

// c holds colors of the vertices of s (other entries ignored). Returns a
// proper coloring of all of g agreeing with c, or a conflict path.
std::variant<Coloring, ColoringConflict> extend_two_coloring(const Graph& g, std::span<const Vertex> s,
                                                             const Coloring& c);

std::vector<VertexSet> connected_components(const Graph& g, std::span<const Vertex> scope);
std::vector<VertexSet> connected_components(const Graph& g);

// Replaces every edge u-v (u < v, in sorted order) by u-x-y-v with fresh x, y.
Graph subdivide_edges_p2(const Graph& g);

// Set helpers on sorted vectors.
VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b);
VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b);
VertexSet set_intersection(std::span<const Vertex> a, std::span<const Vertex> b);
bool set_contains(std::span<const Vertex> a, Vertex v);
VertexSet normalized(VertexSet s);

}  // namespace octk
