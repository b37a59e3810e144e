#include "octk/generators.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "octk/errors.hpp"
#include "octk/treewidth.hpp"

namespace octk {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = eng_();
  while (x >= limit);
  return x % n;
}

bool Rng::bernoulli(double p) {
  // 53 random bits, as a double in [0, 1)
  double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  return u < p;
}

namespace {

// Random bipartite partial w-tree on vertices 0..m-1.
Graph bipartite_partial_ktree(Rng& rng, int m, int w) {
  Graph g(m);
  if (m == 0) return g;
  std::vector<int> color(static_cast<std::size_t>(m), 0);
  std::vector<std::vector<Vertex>> cliques;
  const int base = std::min(m, w + 1);
  for (int v = 0; v < base; ++v) color[static_cast<std::size_t>(v)] = static_cast<int>(rng.below(2));
  color[0] = 0;
  if (base > 1) color[1] = 1;
  VertexSet first;
  for (int v = 0; v < base; ++v) first.push_back(v);
  for (int v = 0; v < base; ++v) {
    VertexSet c;
    for (Vertex u : first)
      if (u != v) c.push_back(u);
    if (!c.empty()) cliques.push_back(c);
  }
  auto link = [&](Vertex a, Vertex b) {
    if (color[static_cast<std::size_t>(a)] != color[static_cast<std::size_t>(b)] && !rng.bernoulli(0.1)) g.add_edge(a, b);
  };
  for (int a = 0; a < base; ++a)
    for (int b = a + 1; b < base; ++b) link(a, b);
  for (int v = base; v < m; ++v) {
    if (cliques.empty()) cliques.push_back({0});
    auto c = cliques[rng.below(cliques.size())];
    color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(c[rng.below(c.size())])];
    for (Vertex u : c) link(u, v);
    for (std::size_t drop = 0; drop < c.size(); ++drop) {
      VertexSet nc{v};
      for (std::size_t i = 0; i < c.size(); ++i)
        if (i != drop) nc.push_back(c[i]);
      cliques.push_back(normalized(nc));
    }
    if (c.size() < static_cast<std::size_t>(w)) {
      auto nc = c;
      nc.push_back(v);
      cliques.push_back(normalized(nc));
    }
  }
  return g;
}

bool valid_modulator(const Graph& g, const VertexSet& x, int w) {
  Graph rest = g.without(x);
  return is_bipartite(rest) && decompose(rest, w).has_value();
}

std::int64_t pick_budget(Rng& rng, const RandomSpec& spec, std::size_t k) {
  if (spec.budget) return *spec.budget;
  return k == 0 ? 0 : static_cast<std::int64_t>(rng.below(k));
}

}  // namespace

OctInstance random_instance(std::uint64_t seed, const RandomSpec& spec) {
  if (spec.n < 1 || spec.w < 1 || spec.edge_prob < 0 || spec.edge_prob > 1)
    throw PreconditionError("bad random instance parameters");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    if (spec.strategy == ModulatorStrategy::computed) {
      Graph g(spec.n);
      for (int u = 0; u < spec.n; ++u)
        for (int v = u + 1; v < spec.n; ++v)
          if (rng.bernoulli(spec.edge_prob)) g.add_edge(u, v);
      auto x = compute_deletion_set(g, spec.w, spec.n <= 16 ? DeletionMode::exact : DeletionMode::greedy);
      if (!valid_modulator(g, x, spec.w)) continue;
      auto budget = pick_budget(rng, spec, x.size());
      return OctInstance{std::move(g), std::move(x), budget};
    }
    const int k = std::clamp(spec.modulator_size, 0, spec.n);
    Graph base = bipartite_partial_ktree(rng, spec.n - k, spec.w);
    std::vector<Vertex> perm(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rng.shuffle(perm);
    Graph g(spec.n);
    for (auto [u, v] : base.edges()) g.add_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
    VertexSet x;
    for (int i = spec.n - k; i < spec.n; ++i) x.push_back(perm[static_cast<std::size_t>(i)]);
    x = normalized(x);
    for (Vertex a : x)
      for (Vertex b = 0; b < spec.n; ++b)
        if (a != b && (!set_contains(x, b) || a < b) && rng.bernoulli(spec.edge_prob)) g.add_edge(a, b);
    if (!valid_modulator(g, x, spec.w)) continue;
    auto budget = pick_budget(rng, spec, x.size());
    return OctInstance{std::move(g), std::move(x), budget};
  }
  throw CeilingExceeded("random instance generation gave up after 100 attempts");
}

K4Box k4_in_a_box() {
  K4Box box{Graph(8), {0, 2}, {1, 3}};
  for (Vertex a = 0; a < 4; ++a)
    for (Vertex b = a + 1; b < 4; ++b) box.graph.add_edge(a, b);
  // a-b, b-c, c-d, d-a each get a private degree-2 vertex
  for (Vertex i = 0; i < 4; ++i) {
    box.graph.add_edge(4 + i, i);
    box.graph.add_edge(4 + i, (i + 1) % 4);
  }
  return box;
}

int expansion_bit(int i, int pos) { return (i >> (pos - 1)) & 1; }

namespace {

struct Padded {
  std::vector<const GraphBudget*> inputs;
  int t = 0;
  int r = 0;
  int n = 0;
  std::size_t m = 0;
  std::int64_t ell = 0;
};

Padded pad_inputs(const std::vector<GraphBudget>& in, int margin) {
  if (in.empty()) throw PreconditionError("composition needs at least one input");
  Padded p;
  p.n = in.front().graph.num_vertices();
  p.m = in.front().graph.num_edges();
  p.ell = in.front().budget;
  for (auto& x : in) {
    if (x.graph.num_vertices() != x.graph.id_bound()) throw PreconditionError("input ids must be dense");
    if (x.graph.num_vertices() != p.n || x.graph.num_edges() != p.m || x.budget != p.ell)
      throw PreconditionError("inputs are not equivalent: n, m and budget must agree");
  }
  if (p.ell < 0 || p.ell >= p.n - margin)
    throw PreconditionError("inputs are not equivalent: budget must be below n" +
                            (margin ? " - " + std::to_string(margin) : std::string()));
  for (auto& x : in) p.inputs.push_back(&x);
  p.t = 2;
  p.r = 1;
  while (p.t < static_cast<int>(in.size())) p.t *= 2, ++p.r;
  while (static_cast<int>(p.inputs.size()) < p.t) p.inputs.push_back(&in.back());
  return p;
}

class Builder {
 public:
  Vertex add(const std::string& role, std::int64_t weight = 1) {
    Vertex v = g.add_vertex(weight);
    roles[role].push_back(v);
    return v;
  }
  void edge(Vertex a, Vertex b) { g.add_edge(a, b); }
  // Copy of the K4 box; returns the new ids of (a, b, c, d).
  std::vector<Vertex> box(const std::string& role, std::int64_t weight = 1) {
    auto k = k4_in_a_box();
    std::vector<Vertex> id;
    for (int i = 0; i < 8; ++i) id.push_back(add(role, weight));
    for (auto [a, b] : k.graph.edges()) edge(id[static_cast<std::size_t>(a)], id[static_cast<std::size_t>(b)]);
    id.resize(4);
    return id;
  }
  CompositionOutput finish(GraphClass cls, std::vector<std::string> mod_roles, std::int64_t budget, int t) {
    CompositionOutput out;
    VertexSet x;
    for (auto& r : mod_roles) x = set_union(x, normalized(roles[r]));
    for (auto& [k, v] : roles) v = normalized(v);
    out.declared_parameter = x.size();
    out.instance = OctInstance{std::move(g), std::move(x), budget};
    out.cls = cls;
    out.roles = std::move(roles);
    out.modulator_roles = std::move(mod_roles);
    out.padded_count = t;
    return out;
  }

  Graph g;
  std::map<std::string, VertexSet> roles;
};

// Shared P2 blocks and numbered vertices: num[i][v] is vertex v of input i.
std::vector<std::vector<Vertex>> p2_identified(Builder& b, const Padded& p) {
  std::vector<std::pair<Vertex, Vertex>> blocks;
  for (std::size_t e = 0; e < p.m; ++e) {
    Vertex x = b.add("P2-block"), y = b.add("P2-block");
    b.edge(x, y);
    blocks.push_back({x, y});
  }
  std::vector<std::vector<Vertex>> num(static_cast<std::size_t>(p.t));
  for (int i = 0; i < p.t; ++i) {
    for (int v = 0; v < p.n; ++v) num[static_cast<std::size_t>(i)].push_back(b.add("numbered"));
    auto edges = p.inputs[static_cast<std::size_t>(i)]->graph.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      b.edge(num[static_cast<std::size_t>(i)][static_cast<std::size_t>(edges[e].first)], blocks[e].first);
      b.edge(blocks[e].second, num[static_cast<std::size_t>(i)][static_cast<std::size_t>(edges[e].second)]);
    }
  }
  return num;
}

}  // namespace

CompositionOutput compose_outerplanar(const std::vector<GraphBudget>& vc_inputs) {
  auto p = pad_inputs(vc_inputs, 0);
  Builder b;
  const int n = p.n, r = p.r;
  // sel[c][j] = {0-vertex, 1-vertex} of triangle j+1 in selector copy c
  std::vector<std::vector<std::array<Vertex, 2>>> sel(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < r; ++j) {
      Vertex z = b.add("instance-selector"), o = b.add("instance-selector"), third = b.add("instance-selector");
      b.edge(z, o);
      b.edge(o, third);
      b.edge(z, third);
      sel[static_cast<std::size_t>(c)].push_back({z, o});
    }
  std::vector<Vertex> s;
  for (int v = 0; v < n; ++v) s.push_back(b.add("solution-selector"));
  std::map<VertexPair, Vertex> sub;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      Vertex d = b.add("solution-selector");
      b.edge(s[static_cast<std::size_t>(u)], d);
      b.edge(d, s[static_cast<std::size_t>(v)]);
      sub[{u, v}] = d;
    }
  const int len = r % 2 == 0 ? r : r + 1;
  for (int i = 1; i <= p.t; ++i)
    for (auto [pu, qv] : p.inputs[static_cast<std::size_t>(i - 1)]->graph.edges())
      for (int c = 0; c < n; ++c) {
        std::vector<Vertex> path;
        for (int k = 0; k < len; ++k) {
          path.push_back(b.add("edge-checker"));
          if (k) b.edge(path[static_cast<std::size_t>(k - 1)], path[static_cast<std::size_t>(k)]);
        }
        for (int j = 1; j <= r; ++j) {
          Vertex v = path[static_cast<std::size_t>(j - 1)];
          Vertex a = b.add("edge-checker"), bb = b.add("edge-checker"), cc = b.add("edge-checker");
          b.edge(v, a);
          b.edge(v, bb);
          b.edge(a, bb);
          b.edge(bb, cc);
          int bit = expansion_bit(i, j);
          for (int copy = 0; copy < n; ++copy) {
            Vertex target = sel[static_cast<std::size_t>(copy)][static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(bit)];
            b.edge(bb, target);
            b.edge(cc, target);
          }
        }
        b.edge(path.front(), s[static_cast<std::size_t>(pu)]);
        b.edge(path.back(), s[static_cast<std::size_t>(qv)]);
      }
  const auto nn = static_cast<std::int64_t>(n), rr = static_cast<std::int64_t>(r);
  std::int64_t budget = nn * rr + nn * static_cast<std::int64_t>(p.m) * p.t * rr + p.ell;
  return b.finish(GraphClass::outerplanar, {"instance-selector", "solution-selector"}, budget, p.t);
}

CompositionOutput compose_cluster(const std::vector<GraphBudget>& inputs) {
  auto p = pad_inputs(inputs, 0);
  Builder b;
  auto num = p2_identified(b, p);
  for (int v = 0; v < p.n; ++v) {
    Vertex u = b.add("universal");
    for (int i = 0; i < p.t; ++i) {
      b.edge(u, num[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]);
      for (int j = i + 1; j < p.t; ++j)
        b.edge(num[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)], num[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)]);
    }
  }
  for (int pos = 1; pos <= p.r; ++pos)
    for (int c = 0; c < p.n; ++c) {
      auto t = b.box("K4-box");
      for (int i = 1; i <= p.t; ++i) {
        int bit = expansion_bit(i, pos);
        for (Vertex term : {t[static_cast<std::size_t>(bit)], t[static_cast<std::size_t>(bit + 2)]})
          for (Vertex u : num[static_cast<std::size_t>(i - 1)]) b.edge(term, u);
      }
    }
  std::int64_t budget = static_cast<std::int64_t>(p.t - 1) * p.n + 2LL * p.n * p.r + p.ell;
  return b.finish(GraphClass::cluster, {"P2-block", "K4-box"}, budget, p.t);
}

CompositionOutput compose_cocluster(const std::vector<GraphBudget>& inputs) {
  auto p = pad_inputs(inputs, 2);
  Builder b;
  auto num = p2_identified(b, p);
  for (int i = 0; i < p.t; ++i)
    for (int j = i + 1; j < p.t; ++j)
      for (Vertex u : num[static_cast<std::size_t>(i)])
        for (Vertex v : num[static_cast<std::size_t>(j)]) b.edge(u, v);
  for (int pos = 1; pos <= p.r; ++pos)
    for (int a = 0; a < p.n; ++a)
      for (int c = 0; c < p.n; ++c)
        for (int copy = 0; copy < 2 * p.n; ++copy) {
          Vertex s = b.add("instance-selector");
          for (int r = 1; r <= p.t; ++r) {
            int pick = expansion_bit(r, pos) == 0 ? a : c;
            b.edge(s, num[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(pick)]);
          }
        }
  std::int64_t budget = static_cast<std::int64_t>(p.t - 1) * p.n + p.ell;
  return b.finish(GraphClass::cocluster, {"P2-block", "instance-selector"}, budget, p.t);
}

CompositionOutput compose_weighted_vc(const std::vector<GraphBudget>& inputs) {
  auto p = pad_inputs(inputs, 0);
  Builder b;
  auto num = p2_identified(b, p);
  const std::int64_t heavy = static_cast<std::int64_t>(p.t) * p.n;
  for (int pos = 1; pos <= p.r; ++pos) {
    auto t = b.box("K4-box", heavy);
    for (int i = 1; i <= p.t; ++i) {
      int bit = expansion_bit(i, pos);
      for (Vertex term : {t[static_cast<std::size_t>(bit)], t[static_cast<std::size_t>(bit + 2)]})
        for (Vertex u : num[static_cast<std::size_t>(i - 1)]) b.edge(term, u);
    }
  }
  std::int64_t budget = 2 * heavy * p.r + static_cast<std::int64_t>(p.t - 1) * p.n + p.ell;
  return b.finish(GraphClass::edgeless, {"P2-block", "K4-box"}, budget, p.t);
}

// Outerplanar iff every biconnected block has a Hamiltonian cycle whose chords do not cross.
bool is_outerplanar(const Graph& g) {
  const int nv = g.num_vertices();
  if (nv >= 2 && g.num_edges() > static_cast<std::size_t>(2 * nv - 3)) return false;
  const auto n = static_cast<std::size_t>(g.id_bound());
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<VertexPair> stack;
  std::vector<std::vector<VertexPair>> blocks;
  int timer = 0;
  std::function<void(Vertex, Vertex)> dfs = [&](Vertex u, Vertex parent) {
    disc[static_cast<std::size_t>(u)] = low[static_cast<std::size_t>(u)] = timer++;
    for (Vertex v : g.neighbors(u)) {
      if (v == parent) continue;
      auto vi = static_cast<std::size_t>(v), ui = static_cast<std::size_t>(u);
      if (disc[vi] < 0) {
        stack.push_back({u, v});
        dfs(v, u);
        low[ui] = std::min(low[ui], low[vi]);
        if (low[vi] >= disc[ui]) {
          std::vector<VertexPair> blk;
          while (true) {
            auto e = stack.back();
            stack.pop_back();
            blk.push_back(e);
            if (e == VertexPair{u, v}) break;
          }
          blocks.push_back(std::move(blk));
        }
      } else if (disc[vi] < disc[ui]) {
        stack.push_back({u, v});
        low[ui] = std::min(low[ui], disc[vi]);
      }
    }
  };
  for (Vertex v : g.vertices())
    if (disc[static_cast<std::size_t>(v)] < 0) dfs(v, -1);

  for (auto& blk : blocks) {
    std::set<Vertex> vs;
    for (auto [a, c] : blk) vs.insert(a), vs.insert(c);
    if (vs.size() < 4) continue;  // single edges and triangles
    VertexSet verts(vs.begin(), vs.end());
    Graph h = g.induced(verts);
    const std::size_t k = verts.size();
    if (h.num_edges() > 2 * k - 3) return false;
    // every Hamiltonian cycle from verts[0]; outerplanar blocks have exactly one
    std::vector<Vertex> cyc{verts[0]};
    std::vector<char> used(n, 0);
    used[static_cast<std::size_t>(verts[0])] = 1;
    long budget = 2'000'000;
    bool ok = false;
    std::function<bool()> extend = [&]() -> bool {
      if (--budget < 0) throw CeilingExceeded("outerplanarity search too large");
      if (cyc.size() == k) {
        if (!h.has_edge(cyc.back(), cyc.front()) || cyc[1] > cyc.back()) return false;
        std::map<Vertex, int> pos;
        for (std::size_t i = 0; i < k; ++i) pos[cyc[i]] = static_cast<int>(i);
        std::vector<std::pair<int, int>> chords;
        for (auto [a, c] : h.edges()) {
          int x = pos[a], y = pos[c];
          if (x > y) std::swap(x, y);
          if (y - x == 1 || (x == 0 && y == static_cast<int>(k) - 1)) continue;
          chords.push_back({x, y});
        }
        for (std::size_t i = 0; i < chords.size(); ++i)
          for (std::size_t j = i + 1; j < chords.size(); ++j) {
            auto [a1, b1] = chords[i];
            auto [a2, b2] = chords[j];
            if ((a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1)) return false;
          }
        return true;
      }
      for (Vertex v : h.neighbors(cyc.back())) {
        if (used[static_cast<std::size_t>(v)]) continue;
        used[static_cast<std::size_t>(v)] = 1;
        cyc.push_back(v);
        bool r = extend();
        cyc.pop_back();
        used[static_cast<std::size_t>(v)] = 0;
        if (r) return true;
      }
      return false;
    };
    ok = extend();
    if (!ok) return false;
  }
  return true;
}

bool is_cluster(const Graph& g) {
  for (auto& c : connected_components(g)) {
    for (Vertex v : c)
      if (static_cast<std::size_t>(g.degree(v)) != c.size() - 1) return false;
  }
  return true;
}

bool is_cocluster(const Graph& g) {
  // non-adjacency must be transitive
  auto vs = g.vertices();
  for (Vertex u : vs)
    for (Vertex v : vs) {
      if (u == v || g.has_edge(u, v)) continue;
      for (Vertex w : vs)
        if (w != u && w != v && !g.has_edge(v, w) && g.has_edge(u, w)) return false;
    }
  return true;
}

bool is_edgeless(const Graph& g) { return g.num_edges() == 0; }

bool in_class(const Graph& g, GraphClass cls) {
  switch (cls) {
    case GraphClass::outerplanar: {
      for (auto& c : connected_components(g))
        if (!is_outerplanar(g.induced(c))) return false;
      return true;
    }
    case GraphClass::cluster: return is_cluster(g);
    case GraphClass::cocluster: return is_cocluster(g);
    case GraphClass::edgeless: return is_edgeless(g);
  }
  return false;
}

const char* class_name(GraphClass cls) {
  switch (cls) {
    case GraphClass::outerplanar: return "outerplanar";
    case GraphClass::cluster: return "cluster";
    case GraphClass::cocluster: return "cocluster";
    case GraphClass::edgeless: return "edgeless";
  }
  return "?";
}

std::optional<std::string> validate_composition(const CompositionOutput& out) {
  VertexSet x;
  for (auto& r : out.modulator_roles) {
    auto it = out.roles.find(r);
    if (it == out.roles.end()) return "missing role " + r;
    x = set_union(x, it->second);
  }
  if (x != normalized(out.instance.modulator)) return "modulator differs from bookkeeping";
  if (x.size() != out.declared_parameter) return "declared parameter differs from |X|";
  VertexSet all;
  for (auto& [r, vs] : out.roles) {
    if (!set_intersection(all, vs).empty()) return "roles overlap at " + r;
    all = set_union(all, vs);
  }
  if (all != out.instance.graph.vertices()) return "roles do not cover the graph";
  if (!in_class(out.instance.graph.without(x), out.cls))
    return std::string("graph minus modulator is not ") + class_name(out.cls);
  return std::nullopt;
}

}  // namespace octk
