#pragma once

#include <cstdint>
#include <vector>

#include "octk/graph.hpp"
#include "octk/instance_io.hpp"

namespace octk {

struct OctInstance {
  Graph graph;
  VertexSet modulator;
  std::int64_t budget = 0;

  friend bool operator==(const OctInstance&, const OctInstance&) = default;
};

struct AnnotatedInstance {
  Graph graph;
  VertexSet modulator;
  std::vector<VertexPair> mono;  // sorted pairs over the modulator
  std::int64_t budget = 0;

  friend bool operator==(const AnnotatedInstance&, const AnnotatedInstance&) = default;
};

struct RestrictedInstance {
  AnnotatedInstance base;
  VertexSet deletable;

  friend bool operator==(const RestrictedInstance&, const RestrictedInstance&) = default;
};

// Smallest instances with a fixed verdict: one isolated vertex (YES) and a
// triangle with one modulator vertex and budget 0 (NO).
OctInstance canonical_yes();
OctInstance canonical_no();

AnnotatedInstance annotate(const OctInstance& inst);

InstanceFile to_file(const OctInstance& inst);
InstanceFile to_file(const AnnotatedInstance& inst);
InstanceFile to_file(const RestrictedInstance& inst);
OctInstance oct_from_file(const InstanceFile& f);
AnnotatedInstance annotated_from_file(const InstanceFile& f);
RestrictedInstance restricted_from_file(const InstanceFile& f);

}  // namespace octk
