#pragma once

// Line-oriented instance text format:
//   p oct <n> <m>     header, vertices are 0..n-1
//   e <u> <v>         edge
//   x <v>             modulator member
//   m <u> <v>         monochromatic pair
//   z <v>             deletable vertex (restricted instances)
//   w <v> <weight>    vertex weight (default 1)
//   l <ell>           budget
// '#' starts a comment line.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octk/graph.hpp"

namespace octk {

struct InstanceFile {
  Graph graph;
  VertexSet modulator;
  std::vector<VertexPair> mono;
  std::optional<VertexSet> deletable;
  std::optional<std::int64_t> budget;

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

InstanceFile parse_instance(std::string_view text);
InstanceFile read_instance(std::istream& in);
InstanceFile read_instance_file(const std::string& path);

// Requires dense ids 0..n-1 (see compact_instance).
std::string format_instance(const InstanceFile& inst);
void write_instance(std::ostream& out, const InstanceFile& inst);
void write_instance_file(const std::string& path, const InstanceFile& inst);

// Renumbers vertices densely, mapping modulator/mono/deletable along.
// Returns the old id of each new id.
std::vector<Vertex> compact_instance(InstanceFile& inst);

}  // namespace octk
