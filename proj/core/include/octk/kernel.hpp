#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "octk/graph.hpp"
#include "octk/instances.hpp"
#include "octk/separators.hpp"
#include "octk/treewidth.hpp"

namespace octk {

enum class XPathKind { important, not_important, not_an_xpath };

XPathKind classify_xpath(const AnnotatedInstance& inst, Vertex p, Vertex q, std::span<const Vertex> path);

// ell+1 vertex-disjoint X-paths of one parity between p and q (p == q allowed).
struct PathCertificate {
  Vertex p = -1;
  Vertex q = -1;
  bool odd = false;
  std::vector<std::vector<Vertex>> paths;  // internal vertices only
};

struct HittingSetResult {
  std::vector<VertexPair> forced_bichromatic;    // A
  std::vector<VertexPair> forced_monochromatic;  // B
  VertexSet forced_deletions;                    // C
  VertexSet hitting_set;                         // H
  std::vector<PathCertificate> certificates;     // one per entry of A, B and C
};

HittingSetResult compute_hitting_set(const Graph& g, std::span<const Vertex> x, std::int64_t ell);

// Deletes C (budget drops by |C|), turns A into edges and B into mono pairs.
// A negative budget yields the canonical NO instance.
AnnotatedInstance apply_annotations(const OctInstance& inst, const HittingSetResult& hsr);

// Superset of s such that every component of g - result has at most
// 2 * width(td) neighbors in it.
VertexSet protrusion_decompose(const Graph& g, const TreeDecomposition& td, std::span<const Vertex> s);

// Keeps, per pair of X u H and parity, the first ell+1 components of
// (G - X) - H providing such a path; deletes all others.
AnnotatedInstance prune_components(const AnnotatedInstance& inst, std::span<const Vertex> h);

// The labeled graph used to compare separators inside one component C of
// (G - X) - H. Labels 0..|X|-1 stand for X (sorted), |X|+i for terminal i.
// Terminals carry only their own label.
struct ComponentLabeling {
  LabeledGraph labeled;
  VertexSet component;
  VertexSet terminals;   // N(C) \ X
  VertexSet candidates;  // V(C) u terminals
};
ComponentLabeling component_labeling(const AnnotatedInstance& inst, std::span<const Vertex> component);

// Components of (G - X) - H in ascending order of their smallest vertex.
std::vector<VertexSet> residual_components(const AnnotatedInstance& inst, std::span<const Vertex> h);

RestrictedInstance restrict_deletable(const AnnotatedInstance& inst, std::span<const Vertex> h, int w,
                                      std::uint64_t enum_ceiling = 2'000'000);

// R' = (R \ V(C)) u s_new, refused unless R n V(C) and s_new share a cut characteristic.
VertexSet separator_replace(const AnnotatedInstance& inst, std::span<const Vertex> h, std::span<const Vertex> solution,
                            std::span<const Vertex> component, std::span<const Vertex> s_new);

OctInstance back_transform(const RestrictedInstance& inst);

struct TraceRecord {
  std::string stage;
  int vertices = 0;
  std::size_t edges = 0;
  std::size_t h_size = 0;
  std::size_t z_size = 0;
  std::string metric;
  std::uint64_t value = 0;
  std::uint64_t bound = 0;

  bool holds() const { return value <= bound; }
  std::string line() const;
};

enum class Fault { none, drop_budget };

struct KernelOptions {
  std::uint64_t enum_ceiling = 2'000'000;
  DecomposeOptions decompose;
  Fault fault = Fault::none;  // test hook: corrupts the output on purpose
};

struct KernelResult {
  OctInstance instance;
  std::vector<TraceRecord> trace;
  std::optional<bool> decided;  // set when the output is a canonical YES/NO
  bool bounds_hold() const;
};

KernelResult kernelize(const OctInstance& inst, int w, const KernelOptions& opts = {});

std::string format_trace(const std::vector<TraceRecord>& trace);

}  // namespace octk
