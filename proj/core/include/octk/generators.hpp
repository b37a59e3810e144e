#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "octk/graph.hpp"
#include "octk/instances.hpp"

namespace octk {

// std distributions differ between standard libraries; the engine does not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n), n > 0
  bool bernoulli(double p);
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

enum class ModulatorStrategy { planted, computed };

struct RandomSpec {
  int n = 12;
  double edge_prob = 0.3;
  ModulatorStrategy strategy = ModulatorStrategy::planted;
  int w = 1;
  int modulator_size = 3;             // planted only
  std::optional<std::int64_t> budget;  // default: uniform in [0, |X|)
};

// Valid (BIP n TW_w)-OCT instance; throws CeilingExceeded after too many retries.
OctInstance random_instance(std::uint64_t seed, const RandomSpec& spec);

struct K4Box {
  Graph graph;
  VertexSet zero_terminals;  // {a, c}
  VertexSet one_terminals;   // {b, d}
};
K4Box k4_in_a_box();

struct GraphBudget {
  Graph graph;  // ids 0..n-1
  std::int64_t budget = 0;
};

enum class GraphClass { outerplanar, cluster, cocluster, edgeless };

struct CompositionOutput {
  OctInstance instance;  // weighted for compose_weighted_vc
  GraphClass cls = GraphClass::edgeless;
  std::size_t declared_parameter = 0;
  std::map<std::string, VertexSet> roles;
  std::vector<std::string> modulator_roles;  // roles whose union is X
  int padded_count = 0;  // number of inputs after padding to a power of two
};

// Inputs must share n and m, with budget < n (cocluster: budget < n - 2).
CompositionOutput compose_outerplanar(const std::vector<GraphBudget>& vc_inputs);
CompositionOutput compose_cluster(const std::vector<GraphBudget>& inputs);
CompositionOutput compose_cocluster(const std::vector<GraphBudget>& inputs);
CompositionOutput compose_weighted_vc(const std::vector<GraphBudget>& inputs);

bool is_outerplanar(const Graph& g);
bool is_cluster(const Graph& g);
bool is_cocluster(const Graph& g);
bool is_edgeless(const Graph& g);
bool in_class(const Graph& g, GraphClass cls);
const char* class_name(GraphClass cls);

// Class membership of G - X plus consistency of X with the bookkeeping.
std::optional<std::string> validate_composition(const CompositionOutput& out);

// Bit `pos` (1-based) of the expansion of index i in 1..2^r; 2^r reads as all zeros.
int expansion_bit(int i, int pos);

}  // namespace octk
