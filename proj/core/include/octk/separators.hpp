#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "octk/graph.hpp"

namespace octk {

struct VertexCutResult {
  VertexSet cut;
  std::vector<std::vector<Vertex>> paths;  // vertex-disjoint (internally, for s-t cuts)
  bool exceeds_bound = false;              // true: more than `bound` disjoint paths, cut left empty
};

// Minimum s-t vertex cut with a packing of internally disjoint s-t paths.
// With a bound, stops after bound+1 paths and reports exceeds_bound.
VertexCutResult min_vertex_cut(const Graph& g, Vertex s, Vertex t, std::optional<int> bound = std::nullopt);

enum class Side { p, q };

// Minimum set Y inside the bipartition's sides separating N(u) on side_in from
// N(v) on side_out in g[P u Q]. Neighbors themselves may be cut.
VertexCutResult vertex_cut_typed(const Graph& g, const Bipartition& bip, Vertex u, Vertex v, Side side_in,
                                 Side side_out, std::optional<int> bound = std::nullopt);

// Vertices reachable from x \ s in g - s.
VertexSet reach_from(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> s);
bool separates(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y, std::span<const Vertex> s);
// Minimal and not dominated by any separator of size <= |s|, checked by flow.
bool is_important_separator(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y,
                            std::span<const Vertex> s);

// All important (x, y)-separators of size <= m, sorted by size then lexicographically.
std::vector<VertexSet> enumerate_important_separators(const Graph& g, std::span<const Vertex> x,
                                                      std::span<const Vertex> y, int m);

// Label subsets as bitsets over 0..num_labels-1.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(int num_labels) : words_(static_cast<std::size_t>((num_labels + 63) / 64), 0) {}
  void insert(int label) { words_[static_cast<std::size_t>(label / 64)] |= std::uint64_t{1} << (label % 64); }
  bool contains(int label) const {
    auto w = static_cast<std::size_t>(label / 64);
    return w < words_.size() && ((words_[w] >> (label % 64)) & 1U);
  }
  LabelSet& operator|=(const LabelSet& o);
  std::vector<int> members() const;
  bool empty() const;
  friend bool operator==(const LabelSet&, const LabelSet&) = default;
  friend auto operator<=>(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

struct LabeledGraph {
  Graph graph;
  int num_labels = 0;
  std::vector<LabelSet> labeling;  // indexed by vertex id
};

using CutCharacteristic = std::vector<LabelSet>;

LabelSet reachable_labels(const LabeledGraph& lg, Vertex t, std::span<const Vertex> s);
CutCharacteristic cut_characteristic(const LabeledGraph& lg, std::span<const Vertex> terminals,
                                     std::span<const Vertex> s);

struct CharacteristicClass {
  CutCharacteristic key;
  VertexSet representative;  // minimum size, then lexicographically smallest
};

// Iterates all subsets of `candidates` of size <= m (by size, then lexicographically)
// and keeps the first separator of every characteristic class.
// Throws CeilingExceeded if more than `ceiling` subsets would be visited.
std::vector<CharacteristicClass> enumerate_characteristics(const LabeledGraph& lg, std::span<const Vertex> terminals,
                                                           std::span<const Vertex> candidates, int m,
                                                           std::uint64_t ceiling = 2'000'000);

// Number of subsets of size <= m of an n-set, saturating.
std::uint64_t binom_at_most(std::uint64_t n, std::uint64_t m);
// (binom(r, <= m(m+3)/2) * 4^m)^n, saturating at UINT64_MAX.
std::uint64_t kappa_bound(std::uint64_t n, std::uint64_t m, std::uint64_t r);

}  // namespace octk
