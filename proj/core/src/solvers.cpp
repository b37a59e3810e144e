#include "octk/solvers.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "octk/errors.hpp"

namespace octk {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 8;

inline std::int64_t sadd(std::int64_t a, std::int64_t b) {
  if (a >= kInf || b >= kInf) return kInf;
  return a + b >= kInf ? kInf : a + b;
}

// Constraint kinds between two variables. Both bits: the pair cannot both stay.
constexpr std::uint8_t kDiffer = 1;
constexpr std::uint8_t kEqual = 2;
constexpr std::uint8_t kClash = kDiffer | kEqual;
constexpr std::uint8_t kFull = 3;  // both colors allowed
constexpr std::int8_t kDel = 2;

inline bool satisfied(std::uint8_t kind, int a, int b) {
  if (a == kDel || b == kDel) return true;
  if (kind == kClash) return false;
  return kind == kDiffer ? a != b : a == b;
}

// Colors still allowed for a neighbor of a variable fixed to color c.
inline std::uint8_t allowed_next_to(std::uint8_t kind, int c) {
  if (kind == kClash) return 0;
  int need = kind == kDiffer ? 1 - c : c;
  return static_cast<std::uint8_t>(1U << need);
}

// Variables carry a weight (kInf: undeletable) and a color domain; edges carry kinds.
struct Problem {
  std::vector<std::int64_t> weight;
  std::vector<std::uint8_t> domain;
  std::vector<std::vector<std::pair<int, std::uint8_t>>> adj;  // sorted by neighbor
  int size() const { return static_cast<int>(weight.size()); }

  void add_constraint(int a, int b, std::uint8_t kind) {
    auto put = [&](int x, int y) {
      auto& l = adj[static_cast<std::size_t>(x)];
      auto it = std::lower_bound(l.begin(), l.end(), std::pair<int, std::uint8_t>{y, 0});
      if (it != l.end() && it->first == y)
        it->second |= kind;
      else
        l.insert(it, {y, kind});
    };
    put(a, b);
    put(b, a);
  }
  void drop_constraint(int a, int b) {
    auto cut = [&](int x, int y) {
      auto& l = adj[static_cast<std::size_t>(x)];
      auto it = std::lower_bound(l.begin(), l.end(), std::pair<int, std::uint8_t>{y, 0});
      if (it != l.end() && it->first == y) l.erase(it);
    };
    cut(a, b);
    cut(b, a);
  }
};

using LocalAdj = std::vector<std::vector<std::pair<int, std::uint8_t>>>;

class Engine {
 public:
  Engine(const Problem& p, const SolverLimits& lim)
      : p_(p), lim_(lim), loc_(static_cast<std::size_t>(p.size()), -1), value_(static_cast<std::size_t>(p.size()), 0) {}

  std::optional<std::int64_t> solve(std::int64_t budget) {
    std::vector<int> all(static_cast<std::size_t>(p_.size()));
    for (int i = 0; i < p_.size(); ++i) all[static_cast<std::size_t>(i)] = i;
    auto dom = p_.domain;
    return solve_set(all, dom, budget);
  }
  const std::vector<std::int8_t>& values() const { return value_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  LocalAdj local_adjacency(const std::vector<int>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) loc_[static_cast<std::size_t>(vars[i])] = static_cast<int>(i);
    LocalAdj la(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (auto [u, k] : p_.adj[static_cast<std::size_t>(vars[i])]) {
        int lu = loc_[static_cast<std::size_t>(u)];
        if (lu >= 0) la[i].push_back({lu, k});
      }
    for (int v : vars) loc_[static_cast<std::size_t>(v)] = -1;
    return la;
  }

  std::optional<std::int64_t> solve_set(const std::vector<int>& vars, std::vector<std::uint8_t>& dom,
                                        std::int64_t budget) {
    if (budget < 0) return std::nullopt;
    if (++nodes_ > lim_.max_nodes)
      throw CeilingExceeded("solver search exceeded " + std::to_string(lim_.max_nodes) + " nodes");
    const std::size_t k = vars.size();
    LocalAdj la = local_adjacency(vars);
    std::vector<char> alive(k, 1);
    std::vector<int> deg(k);
    for (std::size_t i = 0; i < k; ++i) deg[i] = static_cast<int>(la[i].size());
    std::int64_t cost = 0;
    struct Postponed {
      int v, u;
      std::uint8_t kind;
    };
    std::vector<Postponed> postponed;

    std::deque<int> work;
    for (std::size_t i = 0; i < k; ++i) work.push_back(static_cast<int>(i));
    auto remove = [&](int i) {
      alive[static_cast<std::size_t>(i)] = 0;
      for (auto [u, kd] : la[static_cast<std::size_t>(i)])
        if (alive[static_cast<std::size_t>(u)]) {
          --deg[static_cast<std::size_t>(u)];
          work.push_back(u);
        }
    };
    while (!work.empty()) {
      int i = work.front();
      work.pop_front();
      if (!alive[static_cast<std::size_t>(i)]) continue;
      const int gv = vars[static_cast<std::size_t>(i)];
      const std::uint8_t d = dom[static_cast<std::size_t>(gv)];
      if (d == 0) {
        cost = sadd(cost, p_.weight[static_cast<std::size_t>(gv)]);
        if (cost > budget) return std::nullopt;
        value_[static_cast<std::size_t>(gv)] = kDel;
        remove(i);
      } else if (deg[static_cast<std::size_t>(i)] == 0) {
        value_[static_cast<std::size_t>(gv)] = (d & 1U) ? 0 : 1;
        remove(i);
      } else if (deg[static_cast<std::size_t>(i)] == 1 && d == kFull) {
        for (auto [u, kd] : la[static_cast<std::size_t>(i)]) {
          if (!alive[static_cast<std::size_t>(u)]) continue;
          if (kd != kClash) {
            postponed.push_back({gv, vars[static_cast<std::size_t>(u)], kd});
            remove(i);
          }
          break;
        }
      }
    }

    // components of what is left
    std::vector<std::vector<int>> comps;
    {
      std::vector<char> seen(k, 0);
      for (std::size_t r = 0; r < k; ++r) {
        if (!alive[r] || seen[r]) continue;
        std::vector<int> comp{static_cast<int>(r)};
        seen[r] = 1;
        for (std::size_t h = 0; h < comp.size(); ++h)
          for (auto [u, kd] : la[static_cast<std::size_t>(comp[h])])
            if (alive[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
              seen[static_cast<std::size_t>(u)] = 1;
              comp.push_back(u);
            }
        for (auto& c : comp) c = vars[static_cast<std::size_t>(c)];
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::vector<std::int64_t> lb(comps.size());
    std::int64_t lb_total = cost;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      auto [bound, consistent] = conflict_packing(comps[c], dom);
      lb[c] = consistent ? -1 : bound;  // -1: already solved at cost 0
      lb_total = sadd(lb_total, std::max<std::int64_t>(lb[c], 0));
      if (lb_total > budget) return std::nullopt;
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (lb[c] < 0) continue;
      lb_total -= lb[c];
      auto sub = solve_component(comps[c], dom, budget - lb_total);
      if (!sub) return std::nullopt;
      lb_total = sadd(lb_total, *sub);
      cost = sadd(cost, *sub);
    }
    for (auto it = postponed.rbegin(); it != postponed.rend(); ++it) {
      int cu = value_[static_cast<std::size_t>(it->u)];
      value_[static_cast<std::size_t>(it->v)] =
          static_cast<std::int8_t>(cu == kDel ? 0 : (it->kind == kDiffer ? 1 - cu : cu));
    }
    return cost;
  }

  // Lower bound from vertex-disjoint conflicts. When no conflict exists at all,
  // the BFS labels are written to value_ and `consistent` is set.
  std::pair<std::int64_t, bool> conflict_packing(const std::vector<int>& comp, const std::vector<std::uint8_t>& dom) {
    LocalAdj la = local_adjacency(comp);
    const std::size_t k = comp.size();
    std::vector<char> used(k, 0);
    std::int64_t lb = 0;
    bool any_witness = false;
    auto take = [&](const std::vector<int>& wit) {
      any_witness = true;
      std::int64_t m = kInf;
      for (int i : wit) {
        used[static_cast<std::size_t>(i)] = 1;
        m = std::min(m, p_.weight[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])]);
      }
      lb = sadd(lb, m);
    };
    for (std::size_t i = 0; i < k; ++i)
      if (dom[static_cast<std::size_t>(comp[i])] == 0) take({static_cast<int>(i)});
    for (std::size_t i = 0; i < k; ++i)
      for (auto [u, kd] : la[i])
        if (kd == kClash && !used[i] && !used[static_cast<std::size_t>(u)]) take({static_cast<int>(i), u});
    // conflicting triangles, low-degree vertices first
    std::vector<int> by_degree(k);
    for (std::size_t i = 0; i < k; ++i) by_degree[i] = static_cast<int>(i);
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](int a, int b) { return la[static_cast<std::size_t>(a)].size() < la[static_cast<std::size_t>(b)].size(); });
    auto kind_of = [&](int a, int b) -> std::uint8_t {
      const auto& l = la[static_cast<std::size_t>(a)];
      auto it = std::lower_bound(l.begin(), l.end(), std::pair<int, std::uint8_t>{b, 0});
      return it != l.end() && it->first == b ? it->second : 0;
    };
    for (int i : by_degree) {
      const auto& l = la[static_cast<std::size_t>(i)];
      for (std::size_t a = 0; a < l.size() && !used[static_cast<std::size_t>(i)]; ++a) {
        if (used[static_cast<std::size_t>(l[a].first)]) continue;
        for (std::size_t b = a + 1; b < l.size(); ++b) {
          if (used[static_cast<std::size_t>(l[b].first)]) continue;
          std::uint8_t kab = kind_of(l[a].first, l[b].first);
          if (kab == 0) continue;
          int differ = (l[a].second == kDiffer) + (l[b].second == kDiffer) + (kab == kDiffer);
          if (differ % 2 == 1) {
            take({i, l[a].first, l[b].first});
            break;
          }
        }
      }
    }
    std::vector<std::int8_t> label(k);
    std::vector<int> parent(k), root(k);
    while (true) {
      std::fill(label.begin(), label.end(), -1);
      std::deque<int> q;
      for (std::size_t i = 0; i < k; ++i) {
        std::uint8_t d = dom[static_cast<std::size_t>(comp[i])];
        if (!used[i] && (d == 1 || d == 2)) {
          label[i] = d == 1 ? 0 : 1;
          parent[i] = -1;
          root[i] = static_cast<int>(i);
          q.push_back(static_cast<int>(i));
        }
      }
      std::vector<int> witness;
      std::size_t next_seed = 0;
      while (witness.empty()) {
        if (q.empty()) {
          while (next_seed < k && (used[next_seed] || label[next_seed] >= 0)) ++next_seed;
          if (next_seed == k) break;
          label[next_seed] = 0;
          parent[next_seed] = -1;
          root[next_seed] = static_cast<int>(next_seed);
          q.push_back(static_cast<int>(next_seed));
        }
        int x = q.front();
        q.pop_front();
        for (auto [y, kd] : la[static_cast<std::size_t>(x)]) {
          auto yi = static_cast<std::size_t>(y);
          if (used[yi]) continue;
          int want = kd == kDiffer ? 1 - label[static_cast<std::size_t>(x)] : label[static_cast<std::size_t>(x)];
          if (label[yi] < 0) {
            label[yi] = static_cast<std::int8_t>(want);
            parent[yi] = x;
            root[yi] = root[static_cast<std::size_t>(x)];
            q.push_back(y);
          } else if (label[yi] != want) {
            std::vector<int> px{x}, py{y};
            while (parent[static_cast<std::size_t>(px.back())] >= 0) px.push_back(parent[static_cast<std::size_t>(px.back())]);
            while (parent[static_cast<std::size_t>(py.back())] >= 0) py.push_back(parent[static_cast<std::size_t>(py.back())]);
            if (root[static_cast<std::size_t>(x)] == root[yi]) {
              while (px.size() > 1 && py.size() > 1 && px[px.size() - 2] == py[py.size() - 2]) px.pop_back(), py.pop_back();
              py.pop_back();  // meeting vertex stays in px
            }
            witness = px;
            witness.insert(witness.end(), py.begin(), py.end());
            break;
          }
        }
      }
      if (witness.empty()) break;
      take(witness);
    }
    bool consistent = !any_witness;
    if (consistent)
      for (std::size_t i = 0; i < k; ++i) value_[static_cast<std::size_t>(comp[i])] = label[i];
    return {lb, consistent};
  }

  std::optional<std::int64_t> solve_component(const std::vector<int>& comp, const std::vector<std::uint8_t>& dom,
                                              std::int64_t budget) {
    if (budget < 0) return std::nullopt;
    std::string key = cache_key(comp, dom);
    if (auto it = cache_.find(key); it != cache_.end()) {
      Memo& m = it->second;
      if (m.cost > budget) return std::nullopt;
      if (m.exact) {
        for (std::size_t i = 0; i < comp.size(); ++i) value_[static_cast<std::size_t>(comp[i])] = m.values[i];
        return m.cost;
      }
    }
    auto r = search_component(comp, dom, budget);
    if (cache_.size() > kCacheEntries) cache_.clear();
    Memo& m = cache_[std::move(key)];
    if (r) {
      m = Memo{*r, true, {}};
      for (int u : comp) m.values.push_back(value_[static_cast<std::size_t>(u)]);
    } else {
      m = Memo{std::max(m.cost, budget + 1), false, {}};
    }
    return r;
  }

  // vars and domains; components are sorted, so equal keys mean equal subproblems
  static std::string cache_key(const std::vector<int>& comp, const std::vector<std::uint8_t>& dom) {
    std::string key(comp.size() * 5, '\0');
    char* out = key.data();
    for (int v : comp) {
      std::memcpy(out, &v, 4);
      out[4] = static_cast<char>(dom[static_cast<std::size_t>(v)]);
      out += 5;
    }
    return key;
  }

  std::optional<std::int64_t> search_component(const std::vector<int>& comp, const std::vector<std::uint8_t>& dom,
                                               std::int64_t budget) {
    if (auto ve = eliminate(comp, dom)) {
      if (*ve > budget) return std::nullopt;
      return ve;
    }
    LocalAdj la = local_adjacency(comp);
    // degree, doubled for vertices already pinned to one color
    auto score = [&](std::size_t i) {
      std::uint8_t d = dom[static_cast<std::size_t>(comp[i])];
      return la[i].size() * (d == 1 || d == 2 ? 2 : 1);
    };
    std::size_t pick = 0;
    bool symmetric = true;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (score(i) > score(pick)) pick = i;
      symmetric = symmetric && dom[static_cast<std::size_t>(comp[i])] == kFull;
    }
    const int v = comp[pick];
    std::vector<int> rest;
    rest.reserve(comp.size() - 1);
    for (int u : comp)
      if (u != v) rest.push_back(u);

    std::optional<std::int64_t> best;
    std::vector<std::int8_t> best_values;
    auto record = [&](std::int64_t c) {
      best = c;
      best_values.clear();
      for (int u : comp) best_values.push_back(value_[static_cast<std::size_t>(u)]);
    };
    const std::uint8_t dv = dom[static_cast<std::size_t>(v)];
    for (int c = 0; c < 2; ++c) {
      if (!(dv & (1U << c)) || (symmetric && c == 1)) continue;
      std::vector<std::uint8_t> sub = dom;
      for (auto [u, kd] : la[pick]) sub[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])] &= allowed_next_to(kd, c);
      std::int64_t cap = best ? std::min(budget, *best - 1) : budget;
      if (auto r = solve_set(rest, sub, cap)) {
        value_[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(c);
        record(*r);
      }
    }
    const std::int64_t w = p_.weight[static_cast<std::size_t>(v)];
    if (w < kInf) {
      std::int64_t cap = (best ? std::min(budget, *best - 1) : budget) - w;
      std::vector<std::uint8_t> sub = dom;
      if (auto r = solve_set(rest, sub, cap)) {
        value_[static_cast<std::size_t>(v)] = kDel;
        record(*r + w);
      }
    }
    if (!best) return std::nullopt;
    for (std::size_t i = 0; i < comp.size(); ++i) value_[static_cast<std::size_t>(comp[i])] = best_values[i];
    return best;
  }

  // Exact min-sum variable elimination over {0, 1, deleted}; nullopt when the
  // greedy ordering is wider than the configured limit.
  std::optional<std::int64_t> eliminate(const std::vector<int>& comp, const std::vector<std::uint8_t>& dom) {
    const int W = lim_.elimination_width;
    LocalAdj la = local_adjacency(comp);
    const std::size_t k = comp.size();
    std::vector<std::set<int>> nb(k);
    for (std::size_t i = 0; i < k; ++i)
      for (auto [u, kd] : la[i]) nb[i].insert(u);
    std::set<std::pair<int, int>> pq;
    for (std::size_t i = 0; i < k; ++i) pq.insert({static_cast<int>(nb[i].size()), static_cast<int>(i)});
    std::vector<int> order, pos(k);
    while (!pq.empty()) {
      auto [d, v] = *pq.begin();
      if (d > W) return std::nullopt;
      pq.erase(pq.begin());
      pos[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
      order.push_back(v);
      std::vector<int> ns(nb[static_cast<std::size_t>(v)].begin(), nb[static_cast<std::size_t>(v)].end());
      for (int a : ns) {
        pq.erase({static_cast<int>(nb[static_cast<std::size_t>(a)].size()), a});
        nb[static_cast<std::size_t>(a)].erase(v);
        for (int b : ns)
          if (a != b) nb[static_cast<std::size_t>(a)].insert(b);
      }
      for (int a : ns) pq.insert({static_cast<int>(nb[static_cast<std::size_t>(a)].size()), a});
    }

    struct Factor {
      std::vector<int> scope;
      std::vector<std::int64_t> table;  // index: sum of value * 3^position
    };
    std::vector<Factor> factors;
    std::vector<std::vector<int>> bucket(k);
    auto place = [&](Factor&& f) -> bool {
      if (f.scope.empty()) return false;
      int first = f.scope.front();
      for (int s : f.scope)
        if (pos[static_cast<std::size_t>(s)] < pos[static_cast<std::size_t>(first)]) first = s;
      bucket[static_cast<std::size_t>(first)].push_back(static_cast<int>(factors.size()));
      factors.push_back(std::move(f));
      return true;
    };
    for (std::size_t i = 0; i < k; ++i) {
      const int gv = comp[i];
      const std::uint8_t d = dom[static_cast<std::size_t>(gv)];
      place(Factor{{static_cast<int>(i)},
                   {(d & 1U) ? 0 : kInf, (d & 2U) ? 0 : kInf, p_.weight[static_cast<std::size_t>(gv)]}});
      for (auto [u, kd] : la[i]) {
        if (u < static_cast<int>(i)) continue;
        Factor f{{static_cast<int>(i), u}, std::vector<std::int64_t>(9, 0)};
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) f.table[static_cast<std::size_t>(a + 3 * b)] = satisfied(kd, a, b) ? 0 : kInf;
        place(std::move(f));
      }
    }
    std::int64_t total = 0;
    std::vector<int> p3(static_cast<std::size_t>(W) + 2, 1);
    for (std::size_t i = 1; i < p3.size(); ++i) p3[i] = p3[i - 1] * 3;
    std::vector<int> slot(k, -1);
    for (int v : order) {
      const auto& mine = bucket[static_cast<std::size_t>(v)];
      std::vector<int> scope;
      for (int fi : mine)
        for (int s : factors[static_cast<std::size_t>(fi)].scope)
          if (s != v) scope.push_back(s);
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      const std::size_t sw = scope.size();
      for (std::size_t j = 0; j < sw; ++j) slot[static_cast<std::size_t>(scope[j])] = static_cast<int>(j);
      // stride[f][j]: contribution of digit j of the output code to factor f's index
      const std::size_t nf = mine.size();
      std::vector<int> stride(nf * (sw + 1), 0);
      for (std::size_t f = 0; f < nf; ++f) {
        const auto& sc = factors[static_cast<std::size_t>(mine[f])].scope;
        for (std::size_t j = 0; j < sc.size(); ++j) {
          int at = sc[j] == v ? static_cast<int>(sw) : slot[static_cast<std::size_t>(sc[j])];
          stride[f * (sw + 1) + static_cast<std::size_t>(at)] = p3[j];
        }
      }
      for (int s : scope) slot[static_cast<std::size_t>(s)] = -1;
      Factor out{scope, std::vector<std::int64_t>(static_cast<std::size_t>(p3[sw]), kInf)};
      std::vector<int> digit(sw, 0), base(nf, 0);
      for (int code = 0; code < p3[sw]; ++code) {
        std::int64_t best = kInf;
        for (int x = 0; x < 3; ++x) {
          std::int64_t s = 0;
          for (std::size_t f = 0; f < nf && s < kInf; ++f) {
            int idx = base[f] + x * stride[f * (sw + 1) + sw];
            s = sadd(s, factors[static_cast<std::size_t>(mine[f])].table[static_cast<std::size_t>(idx)]);
          }
          best = std::min(best, s);
        }
        out.table[static_cast<std::size_t>(code)] = best;
        for (std::size_t j = 0; j < sw; ++j) {  // odometer step
          if (++digit[j] < 3) {
            for (std::size_t f = 0; f < nf; ++f) base[f] += stride[f * (sw + 1) + j];
            break;
          }
          digit[j] = 0;
          for (std::size_t f = 0; f < nf; ++f) base[f] -= 2 * stride[f * (sw + 1) + j];
        }
      }
      if (scope.empty())
        total = sadd(total, out.table[0]);
      else
        place(std::move(out));
    }
    std::vector<int> val(k, 0);
    if (total >= kInf) return kInf;
    // assign in reverse elimination order
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      std::int64_t best = kInf;
      int arg = kDel;
      for (int x = 0; x < 3; ++x) {
        val[static_cast<std::size_t>(v)] = x;
        std::int64_t s = 0;
        for (int fi : bucket[static_cast<std::size_t>(v)]) {
          const auto& f = factors[static_cast<std::size_t>(fi)];
          int idx = 0;
          for (std::size_t j = 0; j < f.scope.size(); ++j) idx += val[static_cast<std::size_t>(f.scope[j])] * p3[j];
          s = sadd(s, f.table[static_cast<std::size_t>(idx)]);
        }
        if (s < best) best = s, arg = x;
      }
      val[static_cast<std::size_t>(v)] = arg;
      value_[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = static_cast<std::int8_t>(arg);
    }
    return total;
  }

  const Problem& p_;
  const SolverLimits& lim_;
  std::vector<int> loc_;
  std::vector<std::int8_t> value_;
  std::uint64_t nodes_ = 0;

  struct Memo {
    std::int64_t cost = 0;  // exact optimum, or a lower bound when !exact
    bool exact = false;
    std::vector<std::int8_t> values;
  };
  static constexpr std::size_t kCacheEntries = 200'000;
  std::unordered_map<std::string, Memo> cache_;
};

// Graph vertices become variables; false twins with equal domains are merged
// (an optimum can always give twins the same fate).
struct Contraction {
  int v, a, b;
  std::uint8_t ka, kb;
};

struct Built {
  Problem problem;
  std::vector<std::vector<Vertex>> members;  // variable -> graph vertices
  std::vector<Contraction> contracted;       // in order of removal
};

// A variable with exactly two neighbors a, b that is no cheaper than one of
// them never has to be deleted: swapping it for that neighbor frees it. It is
// then a pure relay and becomes the constraint a-b.
bool contract_relays(Problem& p, std::vector<Contraction>& out) {
  bool any = false;
  for (int v = 0; v < p.size(); ++v) {
    auto& l = p.adj[static_cast<std::size_t>(v)];
    if (l.size() != 2 || p.domain[static_cast<std::size_t>(v)] != kFull) continue;
    auto [a, ka] = l[0];
    auto [b, kb] = l[1];
    if (ka == kClash || kb == kClash) continue;
    if (p.weight[static_cast<std::size_t>(v)] <
        std::min(p.weight[static_cast<std::size_t>(a)], p.weight[static_cast<std::size_t>(b)]))
      continue;
    p.drop_constraint(v, a);
    p.drop_constraint(v, b);
    p.add_constraint(a, b, ka == kb ? kEqual : kDiffer);
    out.push_back({v, a, b, ka, kb});
    any = true;
  }
  return any;
}

Built build(const Graph& g, std::span<const VertexPair> mono, const VertexSet* deletable, bool weighted) {
  Problem p;
  std::vector<int> var_of(static_cast<std::size_t>(g.id_bound()), -1);
  std::vector<std::vector<Vertex>> members;
  for (Vertex v : g.vertices()) {
    var_of[static_cast<std::size_t>(v)] = p.size();
    bool can_delete = !deletable || set_contains(*deletable, v);
    p.weight.push_back(can_delete ? (weighted ? g.weight(v) : 1) : kInf);
    p.domain.push_back(kFull);
    p.adj.emplace_back();
    members.push_back({v});
  }
  for (auto [u, v] : g.edges()) p.add_constraint(var_of[static_cast<std::size_t>(u)], var_of[static_cast<std::size_t>(v)], kDiffer);
  for (auto [u, v] : mono) {
    if (!g.has_vertex(u) || !g.has_vertex(v) || u == v) continue;
    p.add_constraint(var_of[static_cast<std::size_t>(u)], var_of[static_cast<std::size_t>(v)], kEqual);
  }
  std::vector<Contraction> contracted;
  for (bool changed = true; changed;) {
    changed = contract_relays(p, contracted);
    std::map<std::pair<std::uint8_t, std::vector<std::pair<int, std::uint8_t>>>, int> seen;
    std::vector<int> rep(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) {
      auto key = std::make_pair(p.domain[static_cast<std::size_t>(i)], p.adj[static_cast<std::size_t>(i)]);
      auto [it, fresh] = seen.emplace(std::move(key), i);
      rep[static_cast<std::size_t>(i)] = it->second;
      if (!fresh && !p.adj[static_cast<std::size_t>(i)].empty()) changed = true;
      if (!fresh && p.adj[static_cast<std::size_t>(i)].empty()) rep[static_cast<std::size_t>(i)] = i;
    }
    if (!changed) break;
    bool merges = false;
    for (int i = 0; i < p.size(); ++i) merges |= rep[static_cast<std::size_t>(i)] != i;
    if (!merges) continue;
    std::vector<int> new_id(static_cast<std::size_t>(p.size()), -1);
    Problem q;
    std::vector<std::vector<Vertex>> qm;
    for (int i = 0; i < p.size(); ++i) {
      int r = rep[static_cast<std::size_t>(i)];
      if (r == i) {
        new_id[static_cast<std::size_t>(i)] = q.size();
        q.weight.push_back(p.weight[static_cast<std::size_t>(i)]);
        q.domain.push_back(p.domain[static_cast<std::size_t>(i)]);
        q.adj.emplace_back();
        qm.push_back(members[static_cast<std::size_t>(i)]);
      } else {
        int nr = new_id[static_cast<std::size_t>(r)];
        q.weight[static_cast<std::size_t>(nr)] = sadd(q.weight[static_cast<std::size_t>(nr)], p.weight[static_cast<std::size_t>(i)]);
        auto& mm = qm[static_cast<std::size_t>(nr)];
        mm.insert(mm.end(), members[static_cast<std::size_t>(i)].begin(), members[static_cast<std::size_t>(i)].end());
      }
    }
    for (int i = 0; i < p.size(); ++i) {
      if (rep[static_cast<std::size_t>(i)] != i) continue;
      for (auto [u, kd] : p.adj[static_cast<std::size_t>(i)])
        if (rep[static_cast<std::size_t>(u)] == u && i < u)
          q.add_constraint(new_id[static_cast<std::size_t>(i)], new_id[static_cast<std::size_t>(u)], kd);
    }
    p = std::move(q);
    members = std::move(qm);
    auto moved = [&](int i) { return new_id[static_cast<std::size_t>(rep[static_cast<std::size_t>(i)])]; };
    for (auto& c : contracted) c = {moved(c.v), moved(c.a), moved(c.b), c.ka, c.kb};
  }
  return Built{std::move(p), std::move(members), std::move(contracted)};
}

std::optional<Solution> run(const Graph& g, std::span<const VertexPair> mono, const VertexSet* deletable, bool weighted,
                            std::int64_t budget, const SolverLimits& lim) {
  if (g.num_vertices() > lim.max_vertices)
    throw CeilingExceeded("solver input has " + std::to_string(g.num_vertices()) + " vertices, ceiling is " +
                          std::to_string(lim.max_vertices));
  if (budget < 0) return std::nullopt;
  Built b = build(g, mono, deletable, weighted);
  Engine e(b.problem, lim);
  auto cost = e.solve(std::min(budget, kInf - 1));
  if (!cost || *cost > budget) return std::nullopt;
  Solution s;
  s.cost = *cost;
  s.coloring.assign(static_cast<std::size_t>(g.id_bound()), kUncolored);
  std::vector<std::int8_t> val = e.values();
  for (auto it = b.contracted.rbegin(); it != b.contracted.rend(); ++it) {
    std::int8_t ca = val[static_cast<std::size_t>(it->a)], cb = val[static_cast<std::size_t>(it->b)];
    std::int8_t& cv = val[static_cast<std::size_t>(it->v)];
    if (ca != kDel)
      cv = static_cast<std::int8_t>(it->ka == kDiffer ? 1 - ca : ca);
    else if (cb != kDel)
      cv = static_cast<std::int8_t>(it->kb == kDiffer ? 1 - cb : cb);
    else
      cv = 0;
  }
  for (int i = 0; i < b.problem.size(); ++i) {
    std::int8_t x = val[static_cast<std::size_t>(i)];
    for (Vertex v : b.members[static_cast<std::size_t>(i)]) {
      if (x == kDel)
        s.deleted.push_back(v);
      else
        s.coloring[static_cast<std::size_t>(v)] = x;
    }
  }
  s.deleted = normalized(std::move(s.deleted));
  if (!check_solution(g, s, SolutionCheck{mono, deletable, weighted}))
    throw std::logic_error("solver produced a solution that fails its certificate check");
  return s;
}

}  // namespace

std::optional<Solution> solve_oct(const Graph& g, std::int64_t budget, const SolverLimits& lim) {
  return run(g, {}, nullptr, false, budget, lim);
}

std::optional<Solution> solve_weighted_oct(const Graph& g, std::int64_t budget, const SolverLimits& lim) {
  return run(g, {}, nullptr, true, budget, lim);
}

std::optional<Solution> solve_annotated(const AnnotatedInstance& inst, const SolverLimits& lim) {
  return run(inst.graph, inst.mono, nullptr, false, inst.budget, lim);
}

std::optional<Solution> solve_restricted(const RestrictedInstance& inst, const SolverLimits& lim) {
  return run(inst.base.graph, inst.base.mono, &inst.deletable, false, inst.base.budget, lim);
}

std::optional<std::int64_t> min_oct(const Graph& g, const SolverLimits& lim) {
  auto s = solve_oct(g, g.num_vertices(), lim);
  if (!s) return std::nullopt;
  return s->cost;
}

std::optional<std::int64_t> min_weighted_oct(const Graph& g, const SolverLimits& lim) {
  std::int64_t total = 0;
  for (Vertex v : g.vertices()) total = sadd(total, g.weight(v));
  auto s = solve_weighted_oct(g, total, lim);
  if (!s) return std::nullopt;
  return s->cost;
}

namespace {

// Branch on a highest-degree vertex: take it, or take all its neighbors.
std::optional<std::int64_t> vc_branch(Graph& g, std::int64_t budget, VertexSet& chosen, std::uint64_t& nodes,
                                      const SolverLimits& lim) {
  if (budget < 0) return std::nullopt;
  if (++nodes > lim.max_nodes) throw CeilingExceeded("vertex cover search exceeded node ceiling");
  Vertex best = -1;
  for (Vertex v : g.vertices()) {
    if (g.degree(v) == 1) {
      // a leaf's neighbor is always safe to take
      Vertex u = g.neighbors(v)[0];
      Graph h = g.without(std::vector<Vertex>{u});
      chosen.push_back(u);
      auto r = vc_branch(h, budget - 1, chosen, nodes, lim);
      if (!r) {
        chosen.pop_back();
        return std::nullopt;
      }
      return *r + 1;
    }
    if (best < 0 || g.degree(v) > g.degree(best)) best = v;
  }
  if (best < 0 || g.degree(best) == 0) return 0;
  const std::size_t mark = chosen.size();
  std::optional<std::int64_t> result;
  VertexSet best_chosen;
  {
    Graph h = g.without(std::vector<Vertex>{best});
    chosen.push_back(best);
    if (auto r = vc_branch(h, budget - 1, chosen, nodes, lim)) {
      result = *r + 1;
      best_chosen.assign(chosen.begin() + static_cast<std::ptrdiff_t>(mark), chosen.end());
    }
    chosen.resize(mark);
  }
  {
    VertexSet nbrs(g.neighbors(best).begin(), g.neighbors(best).end());
    auto d = static_cast<std::int64_t>(nbrs.size());
    std::int64_t cap = (result ? std::min(budget, *result - 1) : budget) - d;
    Graph h = g.without(nbrs);
    h.remove_vertex(best);
    chosen.insert(chosen.end(), nbrs.begin(), nbrs.end());
    if (auto r = vc_branch(h, cap, chosen, nodes, lim)) {
      result = *r + d;
      best_chosen.assign(chosen.begin() + static_cast<std::ptrdiff_t>(mark), chosen.end());
    }
    chosen.resize(mark);
  }
  if (result) chosen.insert(chosen.end(), best_chosen.begin(), best_chosen.end());
  return result;
}

}  // namespace

std::optional<Solution> solve_vertex_cover(const Graph& g, std::int64_t budget, const SolverLimits& lim) {
  if (g.num_vertices() > lim.max_vertices) throw CeilingExceeded("vertex cover input exceeds vertex ceiling");
  Graph h = g;
  VertexSet chosen;
  std::uint64_t nodes = 0;
  auto r = vc_branch(h, budget, chosen, nodes, lim);
  if (!r) return std::nullopt;
  Solution s;
  s.deleted = normalized(chosen);
  s.cost = static_cast<std::int64_t>(s.deleted.size());
  s.coloring.assign(static_cast<std::size_t>(g.id_bound()), kUncolored);
  for (Vertex v : g.vertices())
    if (!set_contains(s.deleted, v)) s.coloring[static_cast<std::size_t>(v)] = 0;
  for (auto [u, v] : g.edges())
    if (!set_contains(s.deleted, u) && !set_contains(s.deleted, v))
      throw std::logic_error("vertex cover solver left an edge uncovered");
  return s;
}

std::optional<std::int64_t> min_vertex_cover(const Graph& g, const SolverLimits& lim) {
  auto s = solve_vertex_cover(g, g.num_vertices(), lim);
  if (!s) return std::nullopt;
  return s->cost;
}

std::optional<Coloring> annotated_coloring(const Graph& g, std::span<const VertexPair> mono,
                                           std::span<const Vertex> removed) {
  const auto n = static_cast<std::size_t>(g.id_bound());
  std::vector<char> gone(n, 0);
  for (Vertex v : removed)
    if (g.has_vertex(v)) gone[static_cast<std::size_t>(v)] = 1;
  std::vector<std::vector<std::pair<Vertex, int>>> adj(n);  // parity 1: differ
  for (auto [u, v] : g.edges()) {
    adj[static_cast<std::size_t>(u)].push_back({v, 1});
    adj[static_cast<std::size_t>(v)].push_back({u, 1});
  }
  for (auto [u, v] : mono) {
    if (!g.has_vertex(u) || !g.has_vertex(v)) continue;
    adj[static_cast<std::size_t>(u)].push_back({v, 0});
    adj[static_cast<std::size_t>(v)].push_back({u, 0});
  }
  Coloring c(n, kUncolored);
  std::vector<Vertex> stack;
  for (Vertex r : g.vertices()) {
    if (gone[static_cast<std::size_t>(r)] || c[static_cast<std::size_t>(r)] != kUncolored) continue;
    c[static_cast<std::size_t>(r)] = 0;
    stack.push_back(r);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (auto [w, par] : adj[static_cast<std::size_t>(u)]) {
        if (gone[static_cast<std::size_t>(w)]) continue;
        auto want = static_cast<std::int8_t>(c[static_cast<std::size_t>(u)] ^ par);
        if (c[static_cast<std::size_t>(w)] == kUncolored) {
          c[static_cast<std::size_t>(w)] = want;
          stack.push_back(w);
        } else if (c[static_cast<std::size_t>(w)] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return c;
}

bool check_solution(const Graph& g, const Solution& s, const SolutionCheck& how) {
  std::vector<char> gone(static_cast<std::size_t>(g.id_bound()), 0);
  std::int64_t cost = 0;
  for (Vertex v : s.deleted) {
    if (!g.has_vertex(v) || gone[static_cast<std::size_t>(v)]) return false;
    if (how.deletable && !set_contains(*how.deletable, v)) return false;
    gone[static_cast<std::size_t>(v)] = 1;
    cost = sadd(cost, how.weighted ? g.weight(v) : 1);
  }
  if (cost != s.cost) return false;
  if (s.coloring.size() < static_cast<std::size_t>(g.id_bound())) return false;
  auto col = [&](Vertex v) { return s.coloring[static_cast<std::size_t>(v)]; };
  for (Vertex v : g.vertices())
    if (!gone[static_cast<std::size_t>(v)] && col(v) != 0 && col(v) != 1) return false;
  for (auto [u, v] : g.edges())
    if (!gone[static_cast<std::size_t>(u)] && !gone[static_cast<std::size_t>(v)] && col(u) == col(v)) return false;
  for (auto [u, v] : how.mono) {
    if (!g.has_vertex(u) || !g.has_vertex(v)) continue;
    if (!gone[static_cast<std::size_t>(u)] && !gone[static_cast<std::size_t>(v)] && col(u) != col(v)) return false;
  }
  return true;
}

}  // namespace octk
