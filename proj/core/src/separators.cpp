#include "octk/separators.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "octk/errors.hpp"

namespace octk {

namespace {

constexpr int kInf = 1 << 29;

// Unit vertex capacities via splitting: in(v) = 2v, out(v) = 2v+1.
class SplitFlow {
 public:
  SplitFlow(const Graph& g, const std::vector<char>& allowed) : n_(g.id_bound()) {
    head_.resize(static_cast<std::size_t>(2 * n_ + 2));
    vertex_arc_.assign(static_cast<std::size_t>(n_), -1);
    allowed_ = allowed;
    for (Vertex v = 0; v < n_; ++v) {
      if (!allowed_[static_cast<std::size_t>(v)]) continue;
      vertex_arc_[static_cast<std::size_t>(v)] = add_arc(in(v), out(v), 1);
    }
    for (auto [u, v] : g.edges()) {
      if (!allowed_[static_cast<std::size_t>(u)] || !allowed_[static_cast<std::size_t>(v)]) continue;
      add_arc(out(u), in(v), kInf);
      add_arc(out(v), in(u), kInf);
    }
  }

  void connect_source(Vertex v) {
    if (allowed_[static_cast<std::size_t>(v)]) add_arc(source(), in(v), kInf);
  }
  void connect_sink(Vertex v) {
    if (allowed_[static_cast<std::size_t>(v)]) add_arc(out(v), sink(), kInf);
  }
  void make_uncuttable(Vertex v) {
    int a = vertex_arc_[static_cast<std::size_t>(v)];
    if (a >= 0) cap_[static_cast<std::size_t>(a)] = orig_[static_cast<std::size_t>(a)] = kInf;
  }

  // Augments until the flow reaches `limit` or no path remains.
  int augment(int limit) {
    int flow = 0;
    std::vector<int> via(head_.size());
    while (flow < limit) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> q{source()};
      via[static_cast<std::size_t>(source())] = -2;
      while (!q.empty() && via[static_cast<std::size_t>(sink())] == -1) {
        int x = q.front();
        q.pop_front();
        for (int a : head_[static_cast<std::size_t>(x)]) {
          int y = to_[static_cast<std::size_t>(a)];
          if (cap_[static_cast<std::size_t>(a)] > 0 && via[static_cast<std::size_t>(y)] == -1) {
            via[static_cast<std::size_t>(y)] = a;
            q.push_back(y);
          }
        }
      }
      if (via[static_cast<std::size_t>(sink())] == -1) break;
      int push = limit - flow;
      for (int x = sink(); x != source();) {
        int a = via[static_cast<std::size_t>(x)];
        push = std::min(push, cap_[static_cast<std::size_t>(a)]);
        x = to_[static_cast<std::size_t>(a ^ 1)];
      }
      for (int x = sink(); x != source();) {
        int a = via[static_cast<std::size_t>(x)];
        cap_[static_cast<std::size_t>(a)] -= push;
        cap_[static_cast<std::size_t>(a ^ 1)] += push;
        x = to_[static_cast<std::size_t>(a ^ 1)];
      }
      flow += push;
    }
    return flow;
  }

  // Saturated vertices whose in-node is reachable from the source.
  VertexSet source_side_cut() const {
    auto r = residual_reach(source(), false);
    VertexSet cut;
    for (Vertex v = 0; v < n_; ++v)
      if (allowed_[static_cast<std::size_t>(v)] && r[static_cast<std::size_t>(in(v))] && !r[static_cast<std::size_t>(out(v))])
        cut.push_back(v);
    return cut;
  }

  // The minimum cut closest to the sink.
  VertexSet sink_side_cut() const {
    auto b = residual_reach(sink(), true);
    VertexSet cut;
    for (Vertex v = 0; v < n_; ++v)
      if (allowed_[static_cast<std::size_t>(v)] && !b[static_cast<std::size_t>(in(v))] && b[static_cast<std::size_t>(out(v))])
        cut.push_back(v);
    return cut;
  }

  std::vector<std::vector<Vertex>> paths() const {
    std::vector<int> flow(cap_.size(), 0);
    for (std::size_t a = 0; a < cap_.size(); a += 2) flow[a] = std::max(0, orig_[a] - cap_[a]);
    std::vector<std::vector<Vertex>> out_paths;
    for (int a0 : head_[static_cast<std::size_t>(source())]) {
      if (a0 & 1) continue;
      while (flow[static_cast<std::size_t>(a0)] > 0) {
        --flow[static_cast<std::size_t>(a0)];
        std::vector<Vertex> path;
        int x = to_[static_cast<std::size_t>(a0)];
        std::vector<char> seen(head_.size(), 0);
        while (x != sink()) {
          if (seen[static_cast<std::size_t>(x)]) break;
          seen[static_cast<std::size_t>(x)] = 1;
          if ((x & 1) == 0) path.push_back(x / 2);
          int next = -1;
          for (int a : head_[static_cast<std::size_t>(x)]) {
            if ((a & 1) == 0 && flow[static_cast<std::size_t>(a)] > 0) {
              next = a;
              break;
            }
          }
          if (next < 0) break;
          --flow[static_cast<std::size_t>(next)];
          x = to_[static_cast<std::size_t>(next)];
        }
        out_paths.push_back(std::move(path));
      }
    }
    return out_paths;
  }

 private:
  int in(Vertex v) const { return 2 * v; }
  int out(Vertex v) const { return 2 * v + 1; }
  int source() const { return 2 * n_; }
  int sink() const { return 2 * n_ + 1; }

  int add_arc(int from, int to, int cap) {
    int a = static_cast<int>(to_.size());
    to_.push_back(to);
    cap_.push_back(cap);
    orig_.push_back(cap);
    head_[static_cast<std::size_t>(from)].push_back(a);
    to_.push_back(from);
    cap_.push_back(0);
    orig_.push_back(0);
    head_[static_cast<std::size_t>(to)].push_back(a + 1);
    return a;
  }

  std::vector<char> residual_reach(int start, bool backwards) const {
    std::vector<char> seen(head_.size(), 0);
    std::deque<int> q{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int a : head_[static_cast<std::size_t>(x)]) {
        int y = to_[static_cast<std::size_t>(a)];
        int c = backwards ? cap_[static_cast<std::size_t>(a ^ 1)] : cap_[static_cast<std::size_t>(a)];
        if (c > 0 && !seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          q.push_back(y);
        }
      }
    }
    return seen;
  }

  int n_;
  std::vector<char> allowed_;
  std::vector<int> to_, cap_, orig_;
  std::vector<std::vector<int>> head_;
  std::vector<int> vertex_arc_;
};

std::vector<char> presence_mask(const Graph& g) {
  std::vector<char> m(static_cast<std::size_t>(g.id_bound()), 0);
  for (Vertex v : g.vertices()) m[static_cast<std::size_t>(v)] = 1;
  return m;
}

VertexCutResult finish_cut(SplitFlow& f, std::optional<int> bound) {
  VertexCutResult r;
  int limit = bound ? *bound + 1 : kInf;
  int flow = f.augment(limit);
  r.paths = f.paths();
  if (bound && flow > *bound) {
    r.exceeds_bound = true;
    return r;
  }
  r.cut = f.source_side_cut();
  return r;
}

}  // namespace

VertexCutResult min_vertex_cut(const Graph& g, Vertex s, Vertex t, std::optional<int> bound) {
  if (!g.has_vertex(s) || !g.has_vertex(t)) throw PreconditionError("cut terminal not in graph");
  if (s == t) throw PreconditionError("cut terminals must differ");
  if (g.has_edge(s, t)) throw PreconditionError("no finite vertex cut exists");
  auto allowed = presence_mask(g);
  allowed[static_cast<std::size_t>(s)] = allowed[static_cast<std::size_t>(t)] = 0;
  SplitFlow f(g, allowed);
  for (Vertex v : g.neighbors(s)) f.connect_source(v);
  for (Vertex v : g.neighbors(t)) f.connect_sink(v);
  auto r = finish_cut(f, bound);
  for (auto& p : r.paths) {
    p.insert(p.begin(), s);
    p.push_back(t);
  }
  return r;
}

VertexCutResult vertex_cut_typed(const Graph& g, const Bipartition& bip, Vertex u, Vertex v, Side side_in,
                                 Side side_out, std::optional<int> bound) {
  std::vector<char> allowed(static_cast<std::size_t>(g.id_bound()), 0);
  std::vector<std::int8_t> side(static_cast<std::size_t>(g.id_bound()), -1);
  for (Vertex a : bip.side0) allowed[static_cast<std::size_t>(a)] = 1, side[static_cast<std::size_t>(a)] = 0;
  for (Vertex a : bip.side1) allowed[static_cast<std::size_t>(a)] = 1, side[static_cast<std::size_t>(a)] = 1;
  if (allowed[static_cast<std::size_t>(u)] || allowed[static_cast<std::size_t>(v)])
    throw PreconditionError("typed cut endpoints must lie outside the bipartition");
  const std::int8_t sin = side_in == Side::p ? 0 : 1;
  const std::int8_t sout = side_out == Side::p ? 0 : 1;
  SplitFlow f(g, allowed);
  for (Vertex a : g.neighbors(u))
    if (side[static_cast<std::size_t>(a)] == sin) f.connect_source(a);
  for (Vertex a : g.neighbors(v))
    if (side[static_cast<std::size_t>(a)] == sout) f.connect_sink(a);
  return finish_cut(f, bound);
}

VertexSet reach_from(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> s) {
  std::vector<char> blocked(static_cast<std::size_t>(g.id_bound()), 0), seen(blocked.size(), 0);
  for (Vertex v : s)
    if (g.has_vertex(v)) blocked[static_cast<std::size_t>(v)] = 1;
  std::vector<Vertex> stack;
  for (Vertex v : x)
    if (g.has_vertex(v) && !blocked[static_cast<std::size_t>(v)] && !seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  VertexSet out;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (Vertex w : g.neighbors(u)) {
      auto wi = static_cast<std::size_t>(w);
      if (!blocked[wi] && !seen[wi]) {
        seen[wi] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool separates(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y, std::span<const Vertex> s) {
  auto r = reach_from(g, x, s);
  for (Vertex v : y)
    if (set_contains(r, v)) return false;
  return true;
}

bool is_important_separator(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y,
                            std::span<const Vertex> s_in) {
  VertexSet s = normalized(VertexSet(s_in.begin(), s_in.end()));
  VertexSet xs = normalized(VertexSet(x.begin(), x.end()));
  VertexSet ys = normalized(VertexSet(y.begin(), y.end()));
  for (Vertex v : s)
    if (!g.has_vertex(v)) return false;
  if (!separates(g, xs, ys, s)) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    VertexSet smaller = s;
    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
    if (separates(g, xs, ys, smaller)) return false;
  }
  // Dominated iff some v of S can be pulled to the source side at no extra cost.
  const VertexSet r = reach_from(g, xs, s);
  for (Vertex v : s) {
    if (set_contains(ys, v)) continue;
    bool touches = set_contains(xs, v);
    for (Vertex u : g.neighbors(v)) touches = touches || set_contains(r, u);
    if (!touches) continue;
    SplitFlow f(g, presence_mask(g));
    for (Vertex a : xs) f.connect_source(a);
    for (Vertex a : r) {
      f.connect_source(a);
      f.make_uncuttable(a);
    }
    f.connect_source(v);
    f.make_uncuttable(v);
    for (Vertex a : ys) f.connect_sink(a);
    int limit = static_cast<int>(s.size()) + 1;
    if (f.augment(limit) <= static_cast<int>(s.size())) return false;
  }
  return true;
}

namespace {

void branch_important(const Graph& g, const VertexSet& x, const VertexSet& y, std::vector<char>& deleted,
                      std::vector<char>& forced, VertexSet& partial, int k, std::set<VertexSet>& found) {
  std::vector<char> allowed = presence_mask(g);
  for (std::size_t i = 0; i < allowed.size(); ++i) allowed[i] = allowed[i] && !deleted[i];
  SplitFlow f(g, allowed);
  for (Vertex v : x) f.connect_source(v);
  for (Vertex v = 0; v < g.id_bound(); ++v)
    if (forced[static_cast<std::size_t>(v)]) {
      f.connect_source(v);
      f.make_uncuttable(v);
    }
  for (Vertex v : y) f.connect_sink(v);
  int lambda = f.augment(k + 1);
  if (lambda > k) return;
  if (lambda == 0) {
    found.insert(normalized(partial));
    return;
  }
  auto far = f.sink_side_cut();
  Vertex v = far.front();
  deleted[static_cast<std::size_t>(v)] = 1;
  partial.push_back(v);
  branch_important(g, x, y, deleted, forced, partial, k - 1, found);
  partial.pop_back();
  deleted[static_cast<std::size_t>(v)] = 0;
  forced[static_cast<std::size_t>(v)] = 1;
  branch_important(g, x, y, deleted, forced, partial, k, found);
  forced[static_cast<std::size_t>(v)] = 0;
}

}  // namespace

std::vector<VertexSet> enumerate_important_separators(const Graph& g, std::span<const Vertex> x,
                                                      std::span<const Vertex> y, int m) {
  if (m < 0) throw PreconditionError("separator size bound must be non-negative");
  VertexSet xs, ys;
  for (Vertex v : x)
    if (g.has_vertex(v)) xs.push_back(v);
  for (Vertex v : y)
    if (g.has_vertex(v)) ys.push_back(v);
  xs = normalized(xs);
  ys = normalized(ys);
  std::vector<char> deleted(static_cast<std::size_t>(g.id_bound()), 0), forced(deleted.size(), 0);
  VertexSet partial;
  std::set<VertexSet> found;
  branch_important(g, xs, ys, deleted, forced, partial, m, found);
  std::vector<VertexSet> out;
  for (const auto& s : found)
    if (is_important_separator(g, xs, ys, s)) out.push_back(s);
  std::stable_sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

LabelSet& LabelSet::operator|=(const LabelSet& o) {
  if (words_.size() < o.words_.size()) words_.resize(o.words_.size(), 0);
  for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

std::vector<int> LabelSet::members() const {
  std::vector<int> out;
  for (std::size_t w = 0; w < words_.size(); ++w)
    for (int b = 0; b < 64; ++b)
      if ((words_[w] >> b) & 1U) out.push_back(static_cast<int>(w * 64) + b);
  return out;
}

bool LabelSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

LabelSet reachable_labels(const LabeledGraph& lg, Vertex t, std::span<const Vertex> s) {
  if (!lg.graph.has_vertex(t)) throw PreconditionError("terminal not in labeled graph");
  LabelSet out(lg.num_labels);
  for (Vertex v : reach_from(lg.graph, std::span<const Vertex>(&t, 1), s))
    if (static_cast<std::size_t>(v) < lg.labeling.size()) out |= lg.labeling[static_cast<std::size_t>(v)];
  return out;
}

CutCharacteristic cut_characteristic(const LabeledGraph& lg, std::span<const Vertex> terminals,
                                     std::span<const Vertex> s) {
  CutCharacteristic k;
  k.reserve(terminals.size());
  for (Vertex t : terminals) k.push_back(reachable_labels(lg, t, s));
  return k;
}

std::vector<CharacteristicClass> enumerate_characteristics(const LabeledGraph& lg, std::span<const Vertex> terminals,
                                                           std::span<const Vertex> candidates_in, int m,
                                                           std::uint64_t ceiling) {
  if (m < 0) m = 0;
  VertexSet cand = normalized(VertexSet(candidates_in.begin(), candidates_in.end()));
  const std::size_t n = cand.size();
  if (binom_at_most(n, static_cast<std::uint64_t>(m)) > ceiling)
    throw CeilingExceeded("characteristic enumeration over " + std::to_string(n) + " candidates with m=" +
                          std::to_string(m) + " exceeds ceiling " + std::to_string(ceiling));
  std::map<CutCharacteristic, std::size_t> index;
  std::vector<CharacteristicClass> out;
  std::vector<std::size_t> pick;
  VertexSet s;
  for (int size = 0; size <= std::min<int>(m, static_cast<int>(n)); ++size) {
    pick.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    while (true) {
      s.clear();
      for (auto i : pick) s.push_back(cand[i]);
      auto key = cut_characteristic(lg, terminals, s);
      if (!index.count(key)) {
        index.emplace(key, out.size());
        out.push_back({std::move(key), s});
      }
      // next combination in lexicographic order
      int i = size - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(size - i)) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > kSat ? kSat : static_cast<std::uint64_t>(p);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }

}  // namespace

std::uint64_t binom_at_most(std::uint64_t n, std::uint64_t m) {
  std::uint64_t total = 0;
  unsigned __int128 c = 1;  // C(n, i)
  bool saturated = false;
  for (std::uint64_t i = 0; i <= std::min(n, m); ++i) {
    if (i > 0 && !saturated) {
      c = c * (n - i + 1) / i;
      if (c > kSat) saturated = true;
    }
    total = saturated ? kSat : sat_add(total, static_cast<std::uint64_t>(c));
  }
  return total;
}

std::uint64_t kappa_bound(std::uint64_t n, std::uint64_t m, std::uint64_t r) {
  std::uint64_t mprime = m * (m + 3) / 2;
  std::uint64_t per = binom_at_most(r, mprime);
  for (std::uint64_t i = 0; i < m; ++i) per = sat_mul(per, 4);
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < n; ++i) out = sat_mul(out, per);
  return out;
}

}  // namespace octk
