#include "octk/treewidth.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "octk/errors.hpp"

namespace octk {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

int TreeDecomposition::root() const {
  for (int i = 0; i < num_nodes(); ++i)
    if (parent[static_cast<std::size_t>(i)] < 0) return i;
  return -1;
}

std::vector<std::vector<int>> TreeDecomposition::children() const {
  std::vector<std::vector<int>> ch(bags.size());
  for (int i = 0; i < num_nodes(); ++i)
    if (parent[static_cast<std::size_t>(i)] >= 0) ch[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])].push_back(i);
  return ch;
}

TreeDecomposition decomposition_from_ordering(const Graph& g, const std::vector<Vertex>& order) {
  std::vector<int> pos(static_cast<std::size_t>(g.id_bound()), -1);
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  for (Vertex v : g.vertices())
    if (pos[static_cast<std::size_t>(v)] < 0) throw PreconditionError("ordering misses vertex " + std::to_string(v));
  std::vector<std::set<Vertex>> adj(static_cast<std::size_t>(g.id_bound()));
  for (auto [u, v] : g.edges()) {
    adj[static_cast<std::size_t>(u)].insert(v);
    adj[static_cast<std::size_t>(v)].insert(u);
  }
  TreeDecomposition td;
  td.bags.resize(order.size());
  td.parent.assign(order.size(), -1);
  std::vector<int> roots;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Vertex v = order[i];
    auto& nb = adj[static_cast<std::size_t>(v)];
    VertexSet higher(nb.begin(), nb.end());
    for (Vertex a : higher) {
      adj[static_cast<std::size_t>(a)].erase(v);
      for (Vertex b : higher)
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
    }
    nb.clear();
    int first = -1;
    for (Vertex a : higher)
      if (first < 0 || pos[static_cast<std::size_t>(a)] < first) first = pos[static_cast<std::size_t>(a)];
    td.parent[i] = first;
    if (first < 0) roots.push_back(static_cast<int>(i));
    higher.push_back(v);
    td.bags[i] = normalized(std::move(higher));
  }
  for (std::size_t r = 0; r + 1 < roots.size(); ++r)
    td.parent[static_cast<std::size_t>(roots[r])] = roots[r + 1];
  return td;
}

namespace {

// Exact decision tw(h) <= w over subsets; h has at most ~20 vertices.
std::optional<std::vector<Vertex>> exact_ordering(const std::vector<Vertex>& verts,
                                                  const std::vector<std::set<Vertex>>& adj, int w) {
  const int n = static_cast<int>(verts.size());
  std::unordered_map<Vertex, int> idx;
  for (int i = 0; i < n; ++i) idx[verts[static_cast<std::size_t>(i)]] = i;
  std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (Vertex u : adj[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])]) nb[static_cast<std::size_t>(i)] |= 1U << idx.at(u);
  const std::uint32_t full = n == 32 ? ~0U : ((1U << n) - 1);
  // q(S, v): neighbors of v's component in G[S + v], outside S + v
  auto q_size = [&](std::uint32_t s, int v) {
    std::uint32_t comp = 1U << v, frontier = comp;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= nb[static_cast<std::size_t>(__builtin_ctz(f))];
      next &= s & ~comp;
      comp |= next;
      frontier = next;
    }
    std::uint32_t out = 0;
    for (std::uint32_t c = comp; c; c &= c - 1) out |= nb[static_cast<std::size_t>(__builtin_ctz(c))];
    out &= full & ~comp & ~s;
    return __builtin_popcount(out);
  };
  std::vector<std::int8_t> last(static_cast<std::size_t>(full) + 1, -1);
  std::vector<char> good(static_cast<std::size_t>(full) + 1, 0);
  good[0] = 1;
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    for (std::uint32_t t = s; t; t &= t - 1) {
      int v = __builtin_ctz(t);
      std::uint32_t rest = s & ~(1U << v);
      if (good[rest] && q_size(rest, v) <= w) {
        good[s] = 1;
        last[s] = static_cast<std::int8_t>(v);
        break;
      }
    }
    if (s == full) break;
  }
  if (!good[full]) return std::nullopt;
  std::vector<Vertex> order;
  for (std::uint32_t s = full; s;) {
    int v = last[s];
    order.push_back(verts[static_cast<std::size_t>(v)]);
    s &= ~(1U << v);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

std::optional<TreeDecomposition> decompose(const Graph& g, int w, const DecomposeOptions& opts) {
  if (w < 0) return g.num_vertices() == 0 ? std::optional(TreeDecomposition{}) : std::nullopt;
  const auto n = static_cast<std::size_t>(g.id_bound());
  std::vector<std::set<Vertex>> adj(n);
  for (auto [u, v] : g.edges()) {
    adj[static_cast<std::size_t>(u)].insert(v);
    adj[static_cast<std::size_t>(v)].insert(u);
  }
  std::vector<char> alive(n, 0);
  for (Vertex v : g.vertices()) alive[static_cast<std::size_t>(v)] = 1;
  std::vector<Vertex> order;

  auto is_clique_without = [&](Vertex v, Vertex skip) {
    const auto& nb = adj[static_cast<std::size_t>(v)];
    for (auto a = nb.begin(); a != nb.end(); ++a) {
      if (*a == skip) continue;
      for (auto b = std::next(a); b != nb.end(); ++b)
        if (*b != skip && !adj[static_cast<std::size_t>(*a)].count(*b)) return false;
    }
    return true;
  };
  // Simplicial and almost simplicial vertices of degree <= w are safe to eliminate.
  auto reducible = [&](Vertex v) {
    const auto& nb = adj[static_cast<std::size_t>(v)];
    if (static_cast<int>(nb.size()) > w) return false;
    if (is_clique_without(v, -1)) return true;
    for (Vertex u : nb)
      if (is_clique_without(v, u)) return true;
    return false;
  };
  std::deque<Vertex> work;
  std::vector<char> queued(n, 0);
  for (Vertex v : g.vertices()) work.push_back(v), queued[static_cast<std::size_t>(v)] = 1;
  while (!work.empty()) {
    Vertex v = work.front();
    work.pop_front();
    queued[static_cast<std::size_t>(v)] = 0;
    if (!alive[static_cast<std::size_t>(v)] || !reducible(v)) continue;
    auto nb = adj[static_cast<std::size_t>(v)];
    for (Vertex a : nb) {
      adj[static_cast<std::size_t>(a)].erase(v);
      for (Vertex b : nb)
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
      if (!queued[static_cast<std::size_t>(a)]) work.push_back(a), queued[static_cast<std::size_t>(a)] = 1;
    }
    adj[static_cast<std::size_t>(v)].clear();
    alive[static_cast<std::size_t>(v)] = 0;
    order.push_back(v);
  }
  std::vector<Vertex> rest;
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
    if (alive[static_cast<std::size_t>(v)]) rest.push_back(v);
  if (!rest.empty()) {
    // every remaining vertex has degree >= 3 > w when w <= 2
    if (w <= 2) return std::nullopt;
    if (static_cast<int>(rest.size()) <= w + 1) {
      order.insert(order.end(), rest.begin(), rest.end());
    } else {
      if (static_cast<int>(rest.size()) > opts.exact_vertex_ceiling || rest.size() > 31)
        throw CeilingExceeded("exact treewidth search on " + std::to_string(rest.size()) + " vertices exceeds ceiling " +
                              std::to_string(opts.exact_vertex_ceiling));
      auto tail = exact_ordering(rest, adj, w);
      if (!tail) return std::nullopt;
      order.insert(order.end(), tail->begin(), tail->end());
    }
  }
  auto td = decomposition_from_ordering(g, order);
  if (td.width() > w) return std::nullopt;
  return td;
}

std::optional<std::string> validate(const Graph& g, const TreeDecomposition& td) {
  const int k = td.num_nodes();
  if (td.parent.size() != td.bags.size()) return "parent map size mismatch";
  int roots = 0;
  for (int i = 0; i < k; ++i) {
    int p = td.parent[static_cast<std::size_t>(i)];
    if (p < -1 || p >= k || p == i) return "invalid parent of node " + std::to_string(i);
    if (p < 0) ++roots;
  }
  if (k > 0 && roots != 1) return "tree has " + std::to_string(roots) + " roots";
  for (int i = 0; i < k; ++i) {
    int x = i, steps = 0;
    while (x >= 0 && steps <= k) x = td.parent[static_cast<std::size_t>(x)], ++steps;
    if (steps > k) return "cycle in tree";
  }
  std::vector<int> occurrences(static_cast<std::size_t>(g.id_bound()), 0), tops(occurrences.size(), 0);
  for (int i = 0; i < k; ++i) {
    const auto& bag = td.bags[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < bag.size(); ++j) {
      Vertex v = bag[j];
      if (!g.has_vertex(v)) return "bag " + std::to_string(i) + " holds unknown vertex " + std::to_string(v);
      if (j > 0 && bag[j - 1] >= v) return "bag " + std::to_string(i) + " is not a sorted set";
      ++occurrences[static_cast<std::size_t>(v)];
      int p = td.parent[static_cast<std::size_t>(i)];
      if (p < 0 || !set_contains(td.bags[static_cast<std::size_t>(p)], v)) ++tops[static_cast<std::size_t>(v)];
    }
  }
  for (Vertex v : g.vertices())
    if (occurrences[static_cast<std::size_t>(v)] == 0) return "vertex uncovered: " + std::to_string(v);
  for (auto [u, v] : g.edges()) {
    bool covered = false;
    for (const auto& bag : td.bags)
      if (set_contains(bag, u) && set_contains(bag, v)) {
        covered = true;
        break;
      }
    if (!covered) return "edge uncovered: " + std::to_string(u) + " " + std::to_string(v);
  }
  for (Vertex v : g.vertices())
    if (tops[static_cast<std::size_t>(v)] != 1) return "connectivity violated for vertex " + std::to_string(v);
  return std::nullopt;
}

namespace {

constexpr std::int64_t kBig = std::numeric_limits<std::int64_t>::max() / 4;

int pow3(std::size_t k) {
  int r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 3;
  return r;
}

// digit i of a base-3 code: 0, 1 = side, 2 = deleted
inline int digit(int code, std::size_t i, const std::vector<int>& p3) { return (code / p3[i]) % 3; }

}  // namespace

VertexSet oct_dp(const Graph& g, const TreeDecomposition& td) {
  if (auto bad = validate(g, td)) throw PreconditionError("invalid decomposition: " + *bad);
  if (td.num_nodes() == 0) return {};
  if (td.width() > 11) throw CeilingExceeded("oct_dp bag size exceeds 12");
  const auto ch = td.children();
  std::vector<int> post;
  {
    std::vector<std::pair<int, bool>> st{{td.root(), false}};
    while (!st.empty()) {
      auto [x, done] = st.back();
      st.pop_back();
      if (done) {
        post.push_back(x);
        continue;
      }
      st.push_back({x, true});
      for (int c : ch[static_cast<std::size_t>(x)]) st.push_back({c, false});
    }
  }
  std::vector<int> p3(13, 1);
  for (std::size_t i = 1; i < p3.size(); ++i) p3[i] = p3[i - 1] * 3;

  const auto k = static_cast<std::size_t>(td.num_nodes());
  std::vector<std::vector<std::int64_t>> cost(k);
  // for each child: best child code per projection code onto the shared vertices
  std::vector<std::vector<int>> best_child_code(k);
  std::vector<std::vector<std::size_t>> shared_in_parent(k), shared_in_child(k);

  for (int x : post) {
    const auto& bag = td.bags[static_cast<std::size_t>(x)];
    const int states = pow3(bag.size());
    auto& cx = cost[static_cast<std::size_t>(x)];
    cx.assign(static_cast<std::size_t>(states), 0);
    for (int code = 0; code < states; ++code) {
      std::int64_t c = 0;
      for (std::size_t i = 0; i < bag.size() && c < kBig; ++i) {
        int di = digit(code, i, p3);
        if (di == 2) {
          ++c;
          continue;
        }
        for (std::size_t j = i + 1; j < bag.size(); ++j)
          if (digit(code, j, p3) == di && g.has_edge(bag[i], bag[j])) {
            c = kBig;
            break;
          }
      }
      cx[static_cast<std::size_t>(code)] = c;
    }
    for (int y : ch[static_cast<std::size_t>(x)]) {
      const auto& cbag = td.bags[static_cast<std::size_t>(y)];
      auto& sp = shared_in_parent[static_cast<std::size_t>(y)];
      auto& sc = shared_in_child[static_cast<std::size_t>(y)];
      for (std::size_t i = 0; i < bag.size(); ++i)
        for (std::size_t j = 0; j < cbag.size(); ++j)
          if (bag[i] == cbag[j]) sp.push_back(i), sc.push_back(j);
      const int proj_states = pow3(sp.size());
      std::vector<std::int64_t> best(static_cast<std::size_t>(proj_states), kBig);
      auto& arg = best_child_code[static_cast<std::size_t>(y)];
      arg.assign(static_cast<std::size_t>(proj_states), -1);
      const auto& cy = cost[static_cast<std::size_t>(y)];
      for (int code = 0; code < static_cast<int>(cy.size()); ++code) {
        if (cy[static_cast<std::size_t>(code)] >= kBig) continue;
        int proj = 0;
        std::int64_t shared_del = 0;
        for (std::size_t t = 0; t < sc.size(); ++t) {
          int d = digit(code, sc[t], p3);
          proj += d * p3[t];
          shared_del += d == 2;
        }
        std::int64_t val = cy[static_cast<std::size_t>(code)] - shared_del;
        if (val < best[static_cast<std::size_t>(proj)]) {
          best[static_cast<std::size_t>(proj)] = val;
          arg[static_cast<std::size_t>(proj)] = code;
        }
      }
      for (int code = 0; code < states; ++code) {
        auto& c = cx[static_cast<std::size_t>(code)];
        if (c >= kBig) continue;
        int proj = 0;
        for (std::size_t t = 0; t < sp.size(); ++t) proj += digit(code, sp[t], p3) * p3[t];
        std::int64_t add = best[static_cast<std::size_t>(proj)];
        c = add >= kBig ? kBig : c + add;
      }
    }
  }
  // top-down argmin reconstruction
  VertexSet deleted;
  std::vector<int> chosen(k, -1);
  const int r = td.root();
  const auto& cr = cost[static_cast<std::size_t>(r)];
  chosen[static_cast<std::size_t>(r)] = static_cast<int>(std::min_element(cr.begin(), cr.end()) - cr.begin());
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    int x = *it;
    int code = chosen[static_cast<std::size_t>(x)];
    const auto& bag = td.bags[static_cast<std::size_t>(x)];
    for (std::size_t i = 0; i < bag.size(); ++i)
      if (digit(code, i, p3) == 2) deleted.push_back(bag[i]);
    for (int y : ch[static_cast<std::size_t>(x)]) {
      const auto& sp = shared_in_parent[static_cast<std::size_t>(y)];
      int proj = 0;
      for (std::size_t t = 0; t < sp.size(); ++t) proj += digit(code, sp[t], p3) * p3[t];
      chosen[static_cast<std::size_t>(y)] = best_child_code[static_cast<std::size_t>(y)][static_cast<std::size_t>(proj)];
    }
  }
  return normalized(std::move(deleted));
}

VertexSet compute_deletion_set(const Graph& g, int w, DeletionMode mode, int exact_ceiling) {
  auto valid = [&](const VertexSet& x) {
    Graph rest = g.without(x);
    if (!is_bipartite(rest)) return false;
    try {
      return decompose(rest, w).has_value();
    } catch (const CeilingExceeded&) {
      return false;
    }
  };
  const VertexSet verts = g.vertices();
  if (mode == DeletionMode::exact) {
    const int n = static_cast<int>(verts.size());
    if (n > exact_ceiling)
      throw CeilingExceeded("exact deletion set on " + std::to_string(n) + " vertices exceeds ceiling " +
                            std::to_string(exact_ceiling));
    for (int size = 0; size <= n; ++size) {
      std::vector<int> pick(static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
      while (true) {
        VertexSet x;
        for (int i : pick) x.push_back(verts[static_cast<std::size_t>(i)]);
        if (valid(x)) return x;
        int i = size - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return verts;
  }
  VertexSet s;
  Graph rest = g;
  std::optional<TreeDecomposition> td;
  while (true) {
    try {
      td = decompose(rest, w);
    } catch (const CeilingExceeded&) {
      td.reset();
    }
    if (td) break;
    Vertex best = -1;
    for (Vertex v : rest.vertices())
      if (best < 0 || rest.degree(v) > rest.degree(best)) best = v;
    s.push_back(best);
    rest.remove_vertex(best);
  }
  auto t = oct_dp(rest, *td);
  return set_union(normalized(s), t);
}

std::string format_decomposition(const TreeDecomposition& td) {
  std::ostringstream out;
  for (int i = 0; i < td.num_nodes(); ++i) {
    out << "b " << i;
    for (Vertex v : td.bags[static_cast<std::size_t>(i)]) out << ' ' << v;
    out << '\n';
  }
  for (int i = 0; i < td.num_nodes(); ++i)
    if (td.parent[static_cast<std::size_t>(i)] >= 0) out << "t " << td.parent[static_cast<std::size_t>(i)] << ' ' << i << '\n';
  return out.str();
}

TreeDecomposition parse_decomposition(std::string_view text) {
  TreeDecomposition td;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::vector<std::pair<int, int>> tree_edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string d;
    if (!(ls >> d) || d[0] == '#') continue;
    if (d == "b") {
      int id;
      if (!(ls >> id) || id != td.num_nodes()) throw ParseError(lineno, "bags must be numbered consecutively from 0");
      VertexSet bag;
      Vertex v;
      while (ls >> v) bag.push_back(v);
      if (!ls.eof()) throw ParseError(lineno, "bad vertex in bag");
      td.bags.push_back(normalized(std::move(bag)));
    } else if (d == "t") {
      int p, c;
      if (!(ls >> p >> c)) throw ParseError(lineno, "tree edge needs two node ids");
      tree_edges.emplace_back(p, c);
    } else {
      throw ParseError(lineno, "unknown directive '" + d + "'");
    }
  }
  td.parent.assign(td.bags.size(), -1);
  for (auto [p, c] : tree_edges) {
    if (p < 0 || c < 0 || p >= td.num_nodes() || c >= td.num_nodes()) throw ParseError(0, "tree edge references unknown bag");
    if (td.parent[static_cast<std::size_t>(c)] >= 0) throw ParseError(0, "bag " + std::to_string(c) + " has two parents");
    td.parent[static_cast<std::size_t>(c)] = p;
  }
  return td;
}

}  // namespace octk
