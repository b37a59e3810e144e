#pragma once

// Exhaustive reference implementations. Test code only; everything here is
// exponential and meant for graphs of a dozen or so vertices.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "octk/graph.hpp"
#include "octk/instances.hpp"
#include "octk/separators.hpp"

namespace oracle {

using octk::Graph;
using octk::Vertex;
using octk::VertexPair;
using octk::VertexSet;

// Subsets of the given vertices as bitmasks over their positions.
VertexSet pick(std::span<const Vertex> pool, std::uint64_t mask);

// 2-colorable after removing `removed`, with c(p) = c(q) on surviving mono pairs.
bool colorable(const Graph& g, std::span<const VertexPair> mono, std::span<const Vertex> removed);

// Minimum cost over deletion sets drawn from `deletable` (all vertices when null).
std::optional<std::int64_t> min_deletion(const Graph& g, std::span<const VertexPair> mono,
                                         const VertexSet* deletable, bool weighted);
std::int64_t min_oct(const Graph& g);
std::int64_t min_weighted_oct(const Graph& g);
std::optional<std::int64_t> min_annotated(const octk::AnnotatedInstance& inst);
std::optional<std::int64_t> min_restricted(const octk::RestrictedInstance& inst);
std::int64_t min_vertex_cover(const Graph& g);

// All minimum odd cycle transversals.
std::vector<VertexSet> all_min_octs(const Graph& g);

bool connected_without(const Graph& g, std::span<const Vertex> from, std::span<const Vertex> to,
                       std::span<const Vertex> removed, const std::vector<char>* allowed = nullptr);

// Smallest subset of V - {s, t} separating s from t.
int min_vertex_cut(const Graph& g, Vertex s, Vertex t);
// Smallest Y inside P u Q such that g[P u Q] - Y has no path from N(u) on side_in to N(v) on side_out.
int min_typed_cut(const Graph& g, const octk::Bipartition& bip, Vertex u, Vertex v, octk::Side side_in,
                  octk::Side side_out);

// Important separators straight from the definition, sorted by size then lexicographically.
std::vector<VertexSet> important_separators(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y,
                                            int m);

// Exact treewidth by dynamic programming over vertex subsets.
int treewidth(const Graph& g);

// Branch-set search for a minor isomorphic to h.
bool has_minor(const Graph& g, const Graph& h);
bool outerplanar_by_minors(const Graph& g);
// Outerplanar iff planar after adding a vertex adjacent to everything.
bool outerplanar_by_apex(const Graph& g);

// Definition-level X-path check: simple path in G - X, attaching edges distinct,
// then the odd/even cases against M and E.
bool important_xpath(const octk::AnnotatedInstance& inst, Vertex p, Vertex q, std::span<const Vertex> path);

struct XPath {
  Vertex p, q;
  std::vector<Vertex> path;
};
// Every important X-path whose internal vertices avoid `avoid`; components of
// G - X larger than max_component are skipped.
std::vector<XPath> important_xpaths_avoiding(const octk::AnnotatedInstance& inst, std::span<const Vertex> avoid,
                                             int max_component, std::size_t limit = 1);

Graph random_graph(std::uint64_t seed, int n, double p);
// Random k-tree on n vertices with each edge kept with probability keep.
Graph random_partial_ktree(std::uint64_t seed, int n, int k, double keep);

}  // namespace oracle
