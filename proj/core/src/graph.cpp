#include "octk/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "octk/errors.hpp"

namespace octk {

Graph::Graph(int n)
    : present_(static_cast<std::size_t>(n), 1),
      adj_(static_cast<std::size_t>(n)),
      weight_(static_cast<std::size_t>(n), 1),
      num_vertices_(n) {}

Vertex Graph::add_vertex(std::int64_t weight) {
  present_.push_back(1);
  adj_.emplace_back();
  weight_.push_back(weight);
  ++num_vertices_;
  return static_cast<Vertex>(present_.size() - 1);
}

void Graph::ensure_vertex(Vertex v) {
  if (v < 0) throw PreconditionError("negative vertex id");
  auto need = static_cast<std::size_t>(v) + 1;
  if (present_.size() < need) {
    present_.resize(need, 0);
    adj_.resize(need);
    weight_.resize(need, 1);
  }
  if (!present_[static_cast<std::size_t>(v)]) {
    present_[static_cast<std::size_t>(v)] = 1;
    ++num_vertices_;
  }
}

bool Graph::add_edge(Vertex u, Vertex v) {
  if (u == v) throw PreconditionError("self-loop on vertex " + std::to_string(u));
  if (!has_vertex(u) || !has_vertex(v))
    throw PreconditionError("edge endpoint not in graph: " + std::to_string(u) + " " + std::to_string(v));
  auto& au = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adj_[static_cast<std::size_t>(v)];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++num_edges_;
  return true;
}

bool Graph::remove_edge(Vertex u, Vertex v) {
  if (!has_edge(u, v)) return false;
  auto& au = adj_[static_cast<std::size_t>(u)];
  au.erase(std::lower_bound(au.begin(), au.end(), v));
  auto& av = adj_[static_cast<std::size_t>(v)];
  av.erase(std::lower_bound(av.begin(), av.end(), u));
  --num_edges_;
  return true;
}

void Graph::remove_vertex(Vertex v) {
  if (!has_vertex(v)) return;
  auto& av = adj_[static_cast<std::size_t>(v)];
  for (Vertex u : av) {
    auto& au = adj_[static_cast<std::size_t>(u)];
    au.erase(std::lower_bound(au.begin(), au.end(), v));
  }
  num_edges_ -= av.size();
  av.clear();
  present_[static_cast<std::size_t>(v)] = 0;
  weight_[static_cast<std::size_t>(v)] = 1;
  --num_vertices_;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (!has_vertex(u) || !has_vertex(v)) return false;
  const auto& au = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(au.begin(), au.end(), v);
}

void Graph::set_weight(Vertex v, std::int64_t w) {
  if (!has_vertex(v)) throw PreconditionError("weight on missing vertex " + std::to_string(v));
  if (w < 0) throw PreconditionError("negative weight");
  weight_[static_cast<std::size_t>(v)] = w;
}

bool Graph::has_nonunit_weights() const {
  for (std::size_t v = 0; v < present_.size(); ++v)
    if (present_[v] && weight_[v] != 1) return true;
  return false;
}

VertexSet Graph::vertices() const {
  VertexSet out;
  out.reserve(static_cast<std::size_t>(num_vertices_));
  for (Vertex v = 0; v < id_bound(); ++v)
    if (present_[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

std::vector<VertexPair> Graph::edges() const {
  std::vector<VertexPair> out;
  out.reserve(num_edges_);
  for (Vertex u = 0; u < id_bound(); ++u)
    for (Vertex v : adj_[static_cast<std::size_t>(u)])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::without(std::span<const Vertex> s) const {
  Graph g = *this;
  for (Vertex v : s) g.remove_vertex(v);
  return g;
}

Graph Graph::induced(std::span<const Vertex> s) const {
  std::vector<char> keep(present_.size(), 0);
  for (Vertex v : s)
    if (has_vertex(v)) keep[static_cast<std::size_t>(v)] = 1;
  Graph g = *this;
  for (Vertex v = 0; v < id_bound(); ++v)
    if (present_[static_cast<std::size_t>(v)] && !keep[static_cast<std::size_t>(v)]) g.remove_vertex(v);
  return g;
}

std::vector<Vertex> Graph::compact() {
  std::vector<Vertex> old_of = vertices();
  std::vector<Vertex> new_of(present_.size(), -1);
  for (std::size_t i = 0; i < old_of.size(); ++i) new_of[static_cast<std::size_t>(old_of[i])] = static_cast<Vertex>(i);
  Graph g(static_cast<int>(old_of.size()));
  for (std::size_t i = 0; i < old_of.size(); ++i) {
    auto old = static_cast<std::size_t>(old_of[i]);
    g.weight_[i] = weight_[old];
    for (Vertex u : adj_[old]) g.adj_[i].push_back(new_of[static_cast<std::size_t>(u)]);
  }
  g.num_edges_ = num_edges_;
  *this = std::move(g);
  return old_of;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_vertices_ != b.num_vertices_ || a.num_edges_ != b.num_edges_) return false;
  int bound = std::max(a.id_bound(), b.id_bound());
  for (Vertex v = 0; v < bound; ++v) {
    bool pa = a.has_vertex(v), pb = b.has_vertex(v);
    if (pa != pb) return false;
    if (!pa) continue;
    if (a.weight(v) != b.weight(v)) return false;
    if (a.adj_[static_cast<std::size_t>(v)] != b.adj_[static_cast<std::size_t>(v)]) return false;
  }
  return true;
}

namespace {

// BFS tree path from v up to its root (v first).
std::vector<Vertex> path_to_root(Vertex v, const std::vector<Vertex>& parent) {
  std::vector<Vertex> p{v};
  while (parent[static_cast<std::size_t>(v)] >= 0) {
    v = parent[static_cast<std::size_t>(v)];
    p.push_back(v);
  }
  return p;
}

}  // namespace

std::variant<Bipartition, OddCycle> bipartition(const Graph& g, std::span<const Vertex> scope) {
  const auto n = static_cast<std::size_t>(g.id_bound());
  std::vector<char> in_scope(n, 0);
  for (Vertex v : scope)
    if (g.has_vertex(v)) in_scope[static_cast<std::size_t>(v)] = 1;
  std::vector<std::int8_t> color(n, kUncolored);
  std::vector<Vertex> parent(n, -1);
  std::vector<int> depth(n, 0);
  Bipartition out;
  std::deque<Vertex> queue;
  for (Vertex root = 0; root < static_cast<Vertex>(n); ++root) {
    if (!in_scope[static_cast<std::size_t>(root)] || color[static_cast<std::size_t>(root)] != kUncolored) continue;
    color[static_cast<std::size_t>(root)] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      auto cu = color[static_cast<std::size_t>(u)];
      for (Vertex w : g.neighbors(u)) {
        auto wi = static_cast<std::size_t>(w);
        if (!in_scope[wi]) continue;
        if (color[wi] == kUncolored) {
          color[wi] = static_cast<std::int8_t>(1 - cu);
          parent[wi] = u;
          depth[wi] = depth[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        } else if (color[wi] == cu) {
          // Same color means same BFS depth; join the two tree paths at their meeting point.
          auto pu = path_to_root(u, parent);
          auto pw = path_to_root(w, parent);
          std::size_t i = pu.size(), j = pw.size();
          while (i > 0 && j > 0 && pu[i - 1] == pw[j - 1]) --i, --j;
          OddCycle oc;
          oc.cycle.assign(pu.begin(), pu.begin() + static_cast<std::ptrdiff_t>(i + 1));
          for (std::size_t k = j; k-- > 0;) oc.cycle.push_back(pw[k]);
          return oc;
        }
      }
    }
  }
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    if (!in_scope[static_cast<std::size_t>(v)]) continue;
    (color[static_cast<std::size_t>(v)] == 0 ? out.side0 : out.side1).push_back(v);
  }
  return out;
}

std::variant<Bipartition, OddCycle> bipartition(const Graph& g) {
  auto vs = g.vertices();
  return bipartition(g, vs);
}

bool is_bipartite(const Graph& g) { return std::holds_alternative<Bipartition>(bipartition(g)); }

bool is_bipartite_without(const Graph& g, std::span<const Vertex> removed) {
  auto scope = set_difference(g.vertices(), normalized(VertexSet(removed.begin(), removed.end())));
  return std::holds_alternative<Bipartition>(bipartition(g, scope));
}

Coloring coloring_of(const Graph& g, const Bipartition& b) {
  Coloring c(static_cast<std::size_t>(g.id_bound()), kUncolored);
  for (Vertex v : b.side0) c[static_cast<std::size_t>(v)] = 0;
  for (Vertex v : b.side1) c[static_cast<std::size_t>(v)] = 1;
  return c;
}

std::variant<Coloring, ColoringConflict> extend_two_coloring(const Graph& g, std::span<const Vertex> s,
                                                             const Coloring& c) {
  const auto n = static_cast<std::size_t>(g.id_bound());
  std::vector<char> in_s(n, 0);
  Coloring color(n, kUncolored);
  for (Vertex v : s) {
    if (!g.has_vertex(v)) throw PreconditionError("colored vertex not in graph");
    auto vi = static_cast<std::size_t>(v);
    if (vi >= c.size() || (c[vi] != 0 && c[vi] != 1)) throw PreconditionError("vertex of s has no color");
    in_s[vi] = 1;
    color[vi] = c[vi];
  }
  for (Vertex v : s)
    for (Vertex u : g.neighbors(v))
      if (in_s[static_cast<std::size_t>(u)] && color[static_cast<std::size_t>(u)] == color[static_cast<std::size_t>(v)])
        throw PreconditionError("coloring is not proper on g[s]");
  {
    VertexSet rest;
    for (Vertex v : g.vertices())
      if (!in_s[static_cast<std::size_t>(v)]) rest.push_back(v);
    if (!std::holds_alternative<Bipartition>(bipartition(g, rest)))
      throw PreconditionError("g - s is not bipartite");
  }

  std::vector<Vertex> parent(n, -1);
  std::deque<Vertex> queue;
  VertexSet seeds(s.begin(), s.end());
  std::sort(seeds.begin(), seeds.end());
  for (Vertex v : seeds) queue.push_back(v);
  auto grow = [&] {
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(u)) {
        auto wi = static_cast<std::size_t>(w);
        if (color[wi] != kUncolored) continue;
        color[wi] = static_cast<std::int8_t>(1 - color[static_cast<std::size_t>(u)]);
        parent[wi] = u;
        queue.push_back(w);
      }
    }
  };
  grow();
  // Look for a monochromatic edge among the colors propagated from s.
  for (Vertex u = 0; u < static_cast<Vertex>(n); ++u) {
    if (color[static_cast<std::size_t>(u)] == kUncolored) continue;
    for (Vertex w : g.neighbors(u)) {
      if (w < u || color[static_cast<std::size_t>(w)] != color[static_cast<std::size_t>(u)]) continue;
      auto pu = path_to_root(u, parent);
      auto pw = path_to_root(w, parent);
      ColoringConflict cc;
      cc.p = pu.back();
      cc.q = pw.back();
      cc.path.assign(pu.rbegin(), pu.rend());
      cc.path.insert(cc.path.end(), pw.begin(), pw.end());
      Vertex inner = in_s[static_cast<std::size_t>(u)] ? w : u;
      std::vector<char> seen(n, 0);
      std::deque<Vertex> q{inner};
      seen[static_cast<std::size_t>(inner)] = 1;
      while (!q.empty()) {
        Vertex x = q.front();
        q.pop_front();
        cc.component.push_back(x);
        for (Vertex y : g.neighbors(x)) {
          auto yi = static_cast<std::size_t>(y);
          if (!seen[yi] && !in_s[yi]) {
            seen[yi] = 1;
            q.push_back(y);
          }
        }
      }
      std::sort(cc.component.begin(), cc.component.end());
      return cc;
    }
  }
  // Components untouched by s get an arbitrary proper coloring.
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    if (!g.has_vertex(v) || color[static_cast<std::size_t>(v)] != kUncolored) continue;
    color[static_cast<std::size_t>(v)] = 0;
    queue.push_back(v);
    grow();
  }
  return color;
}

std::vector<VertexSet> connected_components(const Graph& g, std::span<const Vertex> scope) {
  const auto n = static_cast<std::size_t>(g.id_bound());
  std::vector<char> in_scope(n, 0);
  for (Vertex v : scope)
    if (g.has_vertex(v)) in_scope[static_cast<std::size_t>(v)] = 1;
  std::vector<VertexSet> out;
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack;
  for (Vertex r = 0; r < static_cast<Vertex>(n); ++r) {
    if (!in_scope[static_cast<std::size_t>(r)] || seen[static_cast<std::size_t>(r)]) continue;
    VertexSet comp;
    seen[static_cast<std::size_t>(r)] = 1;
    stack.push_back(r);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (Vertex w : g.neighbors(u)) {
        auto wi = static_cast<std::size_t>(w);
        if (in_scope[wi] && !seen[wi]) {
          seen[wi] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<VertexSet> connected_components(const Graph& g) {
  auto vs = g.vertices();
  return connected_components(g, vs);
}

Graph subdivide_edges_p2(const Graph& g) {
  Graph out = g;
  for (auto [u, v] : g.edges()) {
    out.remove_edge(u, v);
    Vertex x = out.add_vertex();
    Vertex y = out.add_vertex();
    out.add_edge(u, x);
    out.add_edge(x, y);
    out.add_edge(y, v);
  }
  return out;
}

VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(std::span<const Vertex> a, Vertex v) { return std::binary_search(a.begin(), a.end(), v); }

VertexSet normalized(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace octk
