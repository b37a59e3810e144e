#include "octk/kernel.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "octk/errors.hpp"
#include "octk/solvers.hpp"

namespace octk {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kMax / b ? kMax : a * b;
}
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; }
std::uint64_t nonneg(std::int64_t v) { return v < 0 ? 0 : static_cast<std::uint64_t>(v); }

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

Bipartition bipartition_outside(const Graph& g, std::span<const Vertex> x) {
  auto scope = set_difference(g.vertices(), normalized(VertexSet(x.begin(), x.end())));
  auto r = bipartition(g, scope);
  if (std::holds_alternative<OddCycle>(r)) throw PreconditionError("graph minus modulator is not bipartite");
  return std::get<Bipartition>(r);
}

AnnotatedInstance canonical_no_annotated() { return annotate(canonical_no()); }

// Per vertex outside the component: how many neighbors of each color it has inside.
struct ColorCounts {
  int c[2] = {0, 0};
};

std::map<Vertex, ColorCounts> attachment(const Graph& g, std::span<const Vertex> comp, const Coloring& col) {
  std::map<Vertex, ColorCounts> out;
  std::set<Vertex> inside(comp.begin(), comp.end());
  for (Vertex a : comp)
    for (Vertex p : g.neighbors(a))
      if (!inside.count(p)) ++out[p].c[col[idx(a)]];
  return out;
}

// Does the component give a p-q path of the given parity (internal vertices inside)?
bool provides(const ColorCounts& a, const ColorCounts& b, bool same, bool odd) {
  if (same) {
    if (odd) return a.c[0] >= 2 || a.c[1] >= 2;
    return a.c[0] >= 1 && a.c[1] >= 1;
  }
  if (odd) return (a.c[0] && b.c[0]) || (a.c[1] && b.c[1]);
  return (a.c[0] && b.c[1]) || (a.c[1] && b.c[0]);
}

Coloring color_components(const Graph& g, std::span<const Vertex> scope) {
  auto r = bipartition(g, scope);
  if (std::holds_alternative<OddCycle>(r)) throw PreconditionError("residual graph is not bipartite");
  return coloring_of(g, std::get<Bipartition>(r));
}

}  // namespace

XPathKind classify_xpath(const AnnotatedInstance& inst, Vertex p, Vertex q, std::span<const Vertex> path) {
  const Graph& g = inst.graph;
  const auto& x = inst.modulator;
  if (path.empty() || !g.has_vertex(p) || !g.has_vertex(q)) return XPathKind::not_an_xpath;
  if (!set_contains(x, p) || !set_contains(x, q)) return XPathKind::not_an_xpath;
  std::set<Vertex> seen;
  for (std::size_t i = 0; i < path.size(); ++i) {
    Vertex v = path[i];
    if (!g.has_vertex(v) || set_contains(x, v) || !seen.insert(v).second) return XPathKind::not_an_xpath;
    if (i > 0 && !g.has_edge(path[i - 1], v)) return XPathKind::not_an_xpath;
  }
  if (!g.has_edge(p, path.front()) || !g.has_edge(path.back(), q)) return XPathKind::not_an_xpath;
  if (p == q && path.size() == 1) return XPathKind::not_an_xpath;
  const bool odd = path.size() % 2 == 1;
  if (odd) {
    bool annotated = std::binary_search(inst.mono.begin(), inst.mono.end(), make_pair_sorted(p, q));
    return p != q && !annotated ? XPathKind::important : XPathKind::not_important;
  }
  return p == q || !g.has_edge(p, q) ? XPathKind::important : XPathKind::not_important;
}

HittingSetResult compute_hitting_set(const Graph& g, std::span<const Vertex> x_in, std::int64_t ell) {
  auto x = normalized(VertexSet(x_in.begin(), x_in.end()));
  for (Vertex v : x)
    if (!g.has_vertex(v)) throw PreconditionError("modulator vertex " + std::to_string(v) + " not in graph");
  auto bip = bipartition_outside(g, x);
  const int bound = static_cast<int>(std::clamp<std::int64_t>(ell, -1, std::numeric_limits<int>::max() - 1));
  HittingSetResult r;
  std::set<Vertex> h;
  auto cut = [&](Vertex u, Vertex v, Side a, Side b) { return vertex_cut_typed(g, bip, u, v, a, b, bound); };
  auto certify = [&](Vertex u, Vertex v, bool odd, const VertexCutResult& c) {
    r.certificates.push_back({u, v, odd, c.paths});
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      Vertex u = x[i], v = x[j];
      auto pp = cut(u, v, Side::p, Side::p);
      auto qq = cut(u, v, Side::q, Side::q);
      auto pq = cut(u, v, Side::p, Side::q);
      auto qp = cut(u, v, Side::q, Side::p);
      if (pq.exceeds_bound || qp.exceeds_bound) {
        r.forced_bichromatic.push_back({u, v});
        certify(u, v, false, pq.exceeds_bound ? pq : qp);
      } else {
        h.insert(pq.cut.begin(), pq.cut.end());
        h.insert(qp.cut.begin(), qp.cut.end());
      }
      if (pp.exceeds_bound || qq.exceeds_bound) {
        r.forced_monochromatic.push_back({u, v});
        certify(u, v, true, pp.exceeds_bound ? pp : qq);
      } else {
        h.insert(pp.cut.begin(), pp.cut.end());
        h.insert(qq.cut.begin(), qq.cut.end());
      }
    }
  }
  for (Vertex v : x) {
    auto pq = cut(v, v, Side::p, Side::q);
    if (pq.exceeds_bound) {
      r.forced_deletions.push_back(v);
      certify(v, v, false, pq);
    } else {
      h.insert(pq.cut.begin(), pq.cut.end());
    }
  }
  r.hitting_set.assign(h.begin(), h.end());
  return r;
}

AnnotatedInstance apply_annotations(const OctInstance& inst, const HittingSetResult& hsr) {
  const auto& c = hsr.forced_deletions;
  std::int64_t budget = inst.budget - static_cast<std::int64_t>(c.size());
  if (budget < 0) return canonical_no_annotated();
  AnnotatedInstance out{inst.graph.without(c), set_difference(inst.modulator, c), {}, budget};
  auto touches = [&](VertexPair e) { return set_contains(c, e.first) || set_contains(c, e.second); };
  for (auto e : hsr.forced_bichromatic)
    if (!touches(e)) out.graph.add_edge(e.first, e.second);
  std::set<VertexPair> mono;
  for (auto e : hsr.forced_monochromatic)
    if (!touches(e)) mono.insert(make_pair_sorted(e.first, e.second));
  out.mono.assign(mono.begin(), mono.end());
  return out;
}

VertexSet protrusion_decompose(const Graph& g, const TreeDecomposition& td, std::span<const Vertex> s_in) {
  if (auto bad = validate(g, td)) throw PreconditionError("invalid tree decomposition: " + *bad);
  auto s = normalized(VertexSet(s_in.begin(), s_in.end()));
  if (s.empty()) return {};
  const int n = td.num_nodes();
  auto kids = td.children();
  std::vector<int> order, depth(static_cast<std::size_t>(n), 0), pre(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{td.root()};
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    pre[static_cast<std::size_t>(b)] = static_cast<int>(order.size());
    order.push_back(b);
    auto& ch = kids[static_cast<std::size_t>(b)];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      depth[static_cast<std::size_t>(*it)] = depth[static_cast<std::size_t>(b)] + 1;
      stack.push_back(*it);
    }
  }
  // topmost bag of each vertex of s is the first one met in preorder
  std::set<int> marked;
  for (Vertex v : s) {
    int best = -1;
    for (int b : order)
      if (set_contains(td.bags[static_cast<std::size_t>(b)], v)) {
        best = b;
        break;
      }
    if (best < 0) throw PreconditionError("vertex " + std::to_string(v) + " is in no bag");
    marked.insert(best);
  }
  auto lca = [&](int a, int b) {
    while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) a = td.parent[static_cast<std::size_t>(a)];
    while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) b = td.parent[static_cast<std::size_t>(b)];
    while (a != b) {
      a = td.parent[static_cast<std::size_t>(a)];
      b = td.parent[static_cast<std::size_t>(b)];
    }
    return a;
  };
  std::vector<int> seq(marked.begin(), marked.end());
  std::sort(seq.begin(), seq.end(), [&](int a, int b) { return pre[static_cast<std::size_t>(a)] < pre[static_cast<std::size_t>(b)]; });
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) marked.insert(lca(seq[i], seq[i + 1]));
  std::set<Vertex> out(s.begin(), s.end());
  for (int b : marked) out.insert(td.bags[static_cast<std::size_t>(b)].begin(), td.bags[static_cast<std::size_t>(b)].end());
  return VertexSet(out.begin(), out.end());
}

std::vector<VertexSet> residual_components(const AnnotatedInstance& inst, std::span<const Vertex> h) {
  auto scope = set_difference(set_difference(inst.graph.vertices(), inst.modulator), normalized(VertexSet(h.begin(), h.end())));
  return connected_components(inst.graph, scope);
}

AnnotatedInstance prune_components(const AnnotatedInstance& inst, std::span<const Vertex> h_in) {
  auto h = normalized(VertexSet(h_in.begin(), h_in.end()));
  for (Vertex v : h)
    if (!inst.graph.has_vertex(v) || set_contains(inst.modulator, v))
      throw PreconditionError("hitting set vertex " + std::to_string(v) + " must lie outside the modulator");
  auto comps = residual_components(inst, h);
  auto terminals = set_union(inst.modulator, h);
  VertexSet scope;
  for (auto& c : comps) scope.insert(scope.end(), c.begin(), c.end());
  std::sort(scope.begin(), scope.end());
  auto col = color_components(inst.graph, scope);
  const std::int64_t need = inst.budget + 1;
  // (p, q, odd) -> components marked so far
  std::map<std::tuple<Vertex, Vertex, bool>, std::int64_t> count;
  std::vector<char> keep(comps.size(), 0);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    auto att = attachment(inst.graph, comps[ci], col);
    std::vector<std::pair<Vertex, ColorCounts>> ts;
    for (auto& [v, cc] : att)
      if (set_contains(terminals, v)) ts.push_back({v, cc});
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i; j < ts.size(); ++j)
        for (bool odd : {false, true}) {
          if (!provides(ts[i].second, ts[j].second, i == j, odd)) continue;
          auto& k = count[{ts[i].first, ts[j].first, odd}];
          if (k < need) {
            ++k;
            keep[ci] = 1;
          }
        }
  }
  VertexSet drop;
  for (std::size_t ci = 0; ci < comps.size(); ++ci)
    if (!keep[ci]) drop.insert(drop.end(), comps[ci].begin(), comps[ci].end());
  std::sort(drop.begin(), drop.end());
  AnnotatedInstance out = inst;
  out.graph = inst.graph.without(drop);
  return out;
}

ComponentLabeling component_labeling(const AnnotatedInstance& inst, std::span<const Vertex> component) {
  const Graph& g = inst.graph;
  const auto& x = inst.modulator;
  ComponentLabeling cl;
  cl.component = normalized(VertexSet(component.begin(), component.end()));
  std::set<Vertex> t;
  for (Vertex a : cl.component)
    for (Vertex b : g.neighbors(a))
      if (!set_contains(x, b) && !set_contains(cl.component, b)) t.insert(b);
  cl.terminals.assign(t.begin(), t.end());
  cl.candidates = set_union(cl.component, cl.terminals);
  const int nx = static_cast<int>(x.size());
  cl.labeled.graph = g.induced(cl.candidates);
  cl.labeled.num_labels = nx + static_cast<int>(cl.terminals.size());
  cl.labeled.labeling.assign(static_cast<std::size_t>(g.id_bound()), LabelSet(cl.labeled.num_labels));
  for (Vertex v : cl.candidates) {
    auto& ls = cl.labeled.labeling[idx(v)];
    auto it = std::lower_bound(cl.terminals.begin(), cl.terminals.end(), v);
    if (it != cl.terminals.end() && *it == v) {
      // a terminal's own X-edges do not pass through the component
      ls.insert(nx + static_cast<int>(it - cl.terminals.begin()));
      continue;
    }
    for (Vertex b : g.neighbors(v)) {
      auto xt = std::lower_bound(x.begin(), x.end(), b);
      if (xt != x.end() && *xt == b) ls.insert(static_cast<int>(xt - x.begin()));
    }
  }
  return cl;
}

RestrictedInstance restrict_deletable(const AnnotatedInstance& inst, std::span<const Vertex> h_in, int w,
                                      std::uint64_t enum_ceiling) {
  auto h = normalized(VertexSet(h_in.begin(), h_in.end()));
  const int delta = 2 * w;
  std::set<Vertex> z(inst.modulator.begin(), inst.modulator.end());
  z.insert(h.begin(), h.end());
  for (auto& comp : residual_components(inst, h)) {
    auto cl = component_labeling(inst, comp);
    const int nt = static_cast<int>(cl.terminals.size());
    if (nt > delta)
      throw PreconditionError("component at vertex " + std::to_string(comp.front()) + " has " + std::to_string(nt) +
                              " terminals, more than " + std::to_string(delta));
    // separators of size >= |T| are replaced by T itself
    const int m = nt - 1;
    if (m < 0) continue;
    std::vector<CharacteristicClass> classes;
    try {
      classes = enumerate_characteristics(cl.labeled, cl.terminals, cl.candidates, m, enum_ceiling);
    } catch (const CeilingExceeded& e) {
      throw CeilingExceeded("component at vertex " + std::to_string(comp.front()) + ": " + e.what());
    }
    for (auto& c : classes)
      for (Vertex v : c.representative)
        if (set_contains(cl.component, v)) z.insert(v);
  }
  return RestrictedInstance{inst, VertexSet(z.begin(), z.end())};
}

VertexSet separator_replace(const AnnotatedInstance& inst, std::span<const Vertex> h_in, std::span<const Vertex> solution,
                            std::span<const Vertex> component, std::span<const Vertex> s_new_in) {
  auto h = normalized(VertexSet(h_in.begin(), h_in.end()));
  auto r = normalized(VertexSet(solution.begin(), solution.end()));
  auto comp = normalized(VertexSet(component.begin(), component.end()));
  auto s_new = normalized(VertexSet(s_new_in.begin(), s_new_in.end()));
  auto comps = residual_components(inst, h);
  if (std::find(comps.begin(), comps.end(), comp) == comps.end())
    throw PreconditionError("not a component of the residual graph");
  if (set_intersection(s_new, comp) != s_new) throw PreconditionError("replacement must lie inside the component");
  if (!annotated_coloring(inst.graph, inst.mono, r)) throw PreconditionError("given solution is not valid");
  auto cl = component_labeling(inst, comp);
  auto s_old = set_intersection(r, comp);
  if (cut_characteristic(cl.labeled, cl.terminals, s_old) != cut_characteristic(cl.labeled, cl.terminals, s_new))
    throw PreconditionError("cut characteristic mismatch");
  auto out = set_union(set_difference(r, comp), s_new);
  if (!annotated_coloring(inst.graph, inst.mono, out))
    throw PreconditionError("replacement invalid; the hitting set misses an important path");
  return out;
}

OctInstance back_transform(const RestrictedInstance& inst) {
  Graph g = inst.base.graph;
  auto z = set_intersection(normalized(inst.deletable), g.vertices());
  std::int64_t ell = inst.base.budget;
  for (auto [u, v] : inst.base.mono) {
    if (!g.has_vertex(u) || !g.has_vertex(v)) continue;
    Vertex w = g.add_vertex();
    g.add_edge(w, u);
    g.add_edge(w, v);
  }
  auto outside = set_difference(g.vertices(), z);
  auto r = bipartition(g, outside);
  if (std::holds_alternative<OddCycle>(r)) return canonical_no();
  auto col = coloring_of(g, std::get<Bipartition>(r));
  auto comps = connected_components(g, outside);

  std::set<VertexPair> odd_pairs, even_pairs;
  std::set<Vertex> forced;
  for (auto& comp : comps) {
    auto att = attachment(g, comp, col);
    std::vector<std::pair<Vertex, ColorCounts>> ts(att.begin(), att.end());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (provides(ts[i].second, ts[i].second, true, false)) forced.insert(ts[i].first);
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        auto e = make_pair_sorted(ts[i].first, ts[j].first);
        if (provides(ts[i].second, ts[j].second, false, true)) odd_pairs.insert(e);
        if (provides(ts[i].second, ts[j].second, false, false)) even_pairs.insert(e);
      }
    }
  }
  // an odd cycle meeting Z only in p: p is in every solution
  ell -= static_cast<std::int64_t>(forced.size());
  if (ell < 0) return canonical_no();
  VertexSet keep;
  for (Vertex v : z)
    if (!forced.count(v)) keep.push_back(v);

  std::map<Vertex, Vertex> id;
  for (Vertex v : keep) id.emplace(v, static_cast<Vertex>(id.size()));
  Graph out(static_cast<int>(keep.size()));
  for (auto [u, v] : g.induced(keep).edges()) out.add_edge(id[u], id[v]);
  for (auto [p, q] : even_pairs)
    if (id.count(p) && id.count(q) && !out.has_edge(id[p], id[q])) out.add_edge(id[p], id[q]);
  for (auto [p, q] : odd_pairs) {
    if (!id.count(p) || !id.count(q)) continue;
    for (std::int64_t i = 0; i <= ell; ++i) {
      Vertex w = out.add_vertex();
      out.add_edge(w, id[p]);
      out.add_edge(w, id[q]);
    }
  }
  VertexSet xs;
  for (std::size_t i = 0; i < keep.size(); ++i) xs.push_back(static_cast<Vertex>(i));
  return OctInstance{std::move(out), std::move(xs), ell};
}

std::string TraceRecord::line() const {
  std::ostringstream o;
  o << "stage=" << stage << " vertices=" << vertices << " edges=" << edges << " h=" << h_size << " z=" << z_size;
  if (!metric.empty()) {
    o << " metric=" << metric << " value=" << value << " bound=";
    if (bound == kMax)
      o << "inf slack=inf";
    else
      o << bound << " slack=" << (static_cast<long double>(bound) - static_cast<long double>(value));
  }
  return o.str();
}

std::string format_trace(const std::vector<TraceRecord>& trace) {
  std::string s;
  for (auto& t : trace) s += t.line() + "\n";
  return s;
}

bool KernelResult::bounds_hold() const {
  return std::all_of(trace.begin(), trace.end(), [](const TraceRecord& t) { return t.holds(); });
}

KernelResult kernelize(const OctInstance& inst_in, int w, const KernelOptions& opts) {
  if (w < 1) throw PreconditionError("width must be at least 1");
  OctInstance inst = inst_in;
  inst.modulator = normalized(inst.modulator);
  const Graph& g0 = inst.graph;
  for (Vertex v : inst.modulator)
    if (!g0.has_vertex(v)) throw PreconditionError("modulator vertex " + std::to_string(v) + " not in graph");
  Graph rest = g0.without(inst.modulator);
  if (!is_bipartite(rest)) throw PreconditionError("graph minus modulator is not bipartite");
  if (!decompose(rest, w, opts.decompose))
    throw PreconditionError("graph minus modulator has treewidth above " + std::to_string(w));

  KernelResult res;
  auto record = [&](std::string stage, const Graph& g, std::size_t h, std::size_t z, std::string metric,
                    std::uint64_t value, std::uint64_t bound) {
    res.trace.push_back({std::move(stage), g.num_vertices(), g.num_edges(), h, z, std::move(metric), value, bound});
  };
  auto finish = [&](OctInstance out, std::optional<bool> decided) {
    if (opts.fault == Fault::drop_budget) out.budget -= 1;
    res.instance = std::move(out);
    res.decided = decided;
    record("output", res.instance.graph, 0, 0, "", 0, 0);
    return res;
  };
  record("input", g0, 0, 0, "", 0, 0);
  if (inst.budget < 0) return finish(canonical_no(), false);
  if (inst.budget >= static_cast<std::int64_t>(inst.modulator.size())) return finish(canonical_yes(), true);

  const std::uint64_t k = inst.modulator.size();
  const auto ell = static_cast<std::uint64_t>(inst.budget);
  auto hsr = compute_hitting_set(g0, inst.modulator, inst.budget);
  const auto& h = hsr.hitting_set;
  record("hitting_set", g0, h.size(), 0, "h_size", h.size(), sat_mul(4 * ell, sat_mul(k, k)));
  if (inst.budget < static_cast<std::int64_t>(hsr.forced_deletions.size())) return finish(canonical_no(), false);
  auto ann = apply_annotations(inst, hsr);
  record("annotations", ann.graph, h.size(), 0, "", 0, 0);

  Graph g1 = ann.graph.without(ann.modulator);
  auto td = decompose(g1, w, opts.decompose);
  if (!td) throw PreconditionError("graph minus modulator has treewidth above " + std::to_string(w));
  auto h2 = protrusion_decompose(g1, *td, h);
  const auto wu = static_cast<std::uint64_t>(w);
  record("protrusion", ann.graph, h2.size(), 0, "h_prime_size", h2.size(), sat_mul(2 * (wu + 1), h.size()));
  std::uint64_t worst = 0;
  for (auto& c : connected_components(g1.without(h2))) {
    std::set<Vertex> nb;
    for (Vertex a : c)
      for (Vertex b : g1.neighbors(a))
        if (set_contains(h2, b)) nb.insert(b);
    worst = std::max<std::uint64_t>(worst, nb.size());
  }
  record("protrusion", ann.graph, h2.size(), 0, "max_neighbors", worst, 2 * wu);

  const auto ell1 = nonneg(ann.budget);
  const std::uint64_t xh = ann.modulator.size() + h2.size();
  const std::uint64_t alpha = sat_mul(2 * (ell1 + 1), sat_mul(xh, xh));
  auto pruned = prune_components(ann, h2);
  record("prune", pruned.graph, h2.size(), 0, "components", residual_components(pruned, h2).size(), alpha);

  auto restricted = restrict_deletable(pruned, h2, w, opts.enum_ceiling);
  const std::uint64_t delta = 2 * wu;
  const std::uint64_t zbound =
      sat_add(xh, sat_mul(sat_mul(alpha, delta), kappa_bound(delta, delta - 1, ann.modulator.size() + delta)));
  const std::uint64_t zs = restricted.deletable.size();
  record("restrict", pruned.graph, h2.size(), zs, "z_size", zs, zbound);

  auto star = back_transform(restricted);
  record("back_transform", star.graph, h2.size(), zs, "vertices", nonneg(star.graph.num_vertices()),
         sat_add(zs, sat_mul(ell1 + 1, sat_mul(zs, zs))));
  if (star.budget < 0) return finish(canonical_no(), false);
  if (star.budget == 0) {
    bool yes = is_bipartite(star.graph);
    return finish(yes ? canonical_yes() : canonical_no(), yes);
  }
  return finish(std::move(star), std::nullopt);
}

}  // namespace octk
