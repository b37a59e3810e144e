// One line per acceptance criterion; exit status 1 if any is red.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "octk/errors.hpp"
#include "octk/generators.hpp"
#include "octk/kernel.hpp"
#include "octk/solvers.hpp"
#include "octk/treewidth.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace octk;

namespace {

// tolerances and sample sizes
constexpr int kKernelInstances = 500;
constexpr int kKernelMaxVertices = 18;
constexpr int kKernelMismatchesAllowed = 0;
constexpr int kBoundViolationsAllowed = 0;
constexpr int kHittingInstances = 200;
constexpr int kHittingComponent = 10;
constexpr int kMengerTriples = 1000;
constexpr int kSeparatorGraphs = 400;
constexpr int kSeparatorMaxVertices = 12;
constexpr int kSeparatorMaxSize = 3;
constexpr int kLabeledGraphs = 400;
constexpr int kSwapInstances = 150;
constexpr int kSubdivisionGraphs = 300;
constexpr int kSubdivisionMaxVertices = 10;
constexpr int kDpGraphs = 300;
constexpr int kDpMaxVertices = 14;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<KernelResult> g_runs;  // every pipeline run, for the bound ledger

KernelResult run_kernel(const OctInstance& inst, int w) {
  g_runs.push_back(kernelize(inst, w));
  return g_runs.back();
}

Outcome kernel_equivalence() {
  int mismatches = 0, decided = 0, invalid = 0, largest = 0;
  for (int seed = 0; seed < kKernelInstances; ++seed) {
    RandomSpec spec;
    spec.n = 6 + seed % (kKernelMaxVertices - 5);
    spec.w = 1 + seed % 2;
    spec.edge_prob = 0.2 + 0.05 * (seed % 5);
    spec.modulator_size = 2 + seed % 4;
    spec.strategy = seed % 4 == 3 ? ModulatorStrategy::computed : ModulatorStrategy::planted;
    auto inst = random_instance(static_cast<std::uint64_t>(seed), spec);
    bool before = oracle::min_oct(inst.graph) <= inst.budget;
    bool before_solver = solve_oct(inst.graph, inst.budget).has_value();
    auto r = run_kernel(inst, spec.w);
    const auto& out = r.instance;
    largest = std::max(largest, out.graph.num_vertices());
    if (r.decided) ++decided;
    Graph rest = out.graph.without(out.modulator);
    if (!is_bipartite_without(rest, {}) || !decompose(rest, spec.w)) ++invalid;
    bool after = solve_oct(out.graph, out.budget).has_value();
    if (before != after || before != before_solver) {
      ++mismatches;
      if (mismatches <= 3) std::printf("  mismatch at seed %d: before=%d after=%d\n", seed, before, after);
    }
  }
  return {mismatches <= kKernelMismatchesAllowed && invalid == 0,
          fmt("%d instances, |V|<=%d, w in {1,2}: %d mismatches (allowed %d), %d decided outright, %d kept as "
              "instances, %d invalid outputs, largest kernel %d vertices",
              kKernelInstances, kKernelMaxVertices, mismatches, kKernelMismatchesAllowed, decided,
              kKernelInstances - decided, invalid, largest)};
}

Outcome bound_ledger() {
  // extra runs on larger inputs so the later stages see non-trivial sizes
  for (int seed = 0; seed < 100; ++seed) {
    RandomSpec spec;
    spec.n = 20 + seed % 21;
    spec.w = 1 + seed % 2;
    spec.modulator_size = 2 + seed % 4;
    run_kernel(random_instance(10'000 + static_cast<std::uint64_t>(seed), spec), spec.w);
  }
  int records = 0, violations = 0;
  std::map<std::string, int> by_metric;
  for (const auto& r : g_runs)
    for (const auto& t : r.trace) {
      if (t.metric.empty()) continue;
      ++records;
      ++by_metric[t.metric];
      if (!t.holds()) {
        ++violations;
        if (violations <= 3) std::printf("  violated: %s\n", t.line().c_str());
      }
    }
  std::string metrics;
  for (auto& [m, c] : by_metric) metrics += (metrics.empty() ? "" : ", ") + m + "=" + std::to_string(c);
  return {violations <= kBoundViolationsAllowed,
          fmt("%zu pipeline runs, %d bound records (%s): %d violations", g_runs.size(), records, metrics.c_str(),
              violations)};
}

Outcome hitting_completeness() {
  int checked = 0, found = 0, decided = 0;
  for (std::uint64_t seed = 20'000; checked < kHittingInstances; ++seed) {
    RandomSpec spec;
    spec.modulator_size = 3 + static_cast<int>(seed % 2);
    spec.n = spec.modulator_size + 5 + static_cast<int>(seed % 6);  // at most 10 vertices outside X
    spec.w = 1 + static_cast<int>(seed % 2);
    spec.edge_prob = 0.3 + 0.05 * static_cast<double>(seed % 4);
    auto inst = random_instance(seed, spec);
    auto hsr = compute_hitting_set(inst.graph, inst.modulator, inst.budget);
    if (static_cast<std::int64_t>(hsr.forced_deletions.size()) > inst.budget) {
      ++decided;  // already a NO instance; there is nothing left to hit
      continue;
    }
    ++checked;
    auto ann = apply_annotations(inst, hsr);
    auto miss = oracle::important_xpaths_avoiding(ann, hsr.hitting_set, kHittingComponent);
    if (!miss.empty()) {
      ++found;
      if (found <= 3) std::printf("  seed %llu: path %d..%d avoids H\n", static_cast<unsigned long long>(seed), miss[0].p, miss[0].q);
    }
  }
  return {found == 0, fmt("%d instances searched exhaustively (components <= %d, %d NO-by-deletion skipped): %d "
                          "important paths avoid H",
                          checked, kHittingComponent, decided, found)};
}

bool valid_packing(const Graph& g, Vertex s, Vertex t, const std::vector<std::vector<Vertex>>& paths) {
  std::set<Vertex> used;
  for (const auto& p : paths) {
    if (p.size() < 2 || p.front() != s || p.back() != t) return false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (!g.has_edge(p[i], p[i + 1])) return false;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
      if (!used.insert(p[i]).second) return false;
  }
  return true;
}

Outcome menger_duality() {
  int bad = 0, total_cut = 0;
  std::mt19937_64 rng(31);
  for (int i = 0; i < kMengerTriples; ++i) {
    int n = 4 + i % 11;
    Graph g = oracle::random_graph(rng(), n, 0.15 + 0.05 * (i % 8));
    Vertex s = 0, t = 0;
    do {
      s = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(n));
      t = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(n));
    } while (s == t || g.has_edge(s, t));
    auto r = min_vertex_cut(g, s, t);
    Vertex ss[] = {s}, ts[] = {t};
    bool ok = r.cut.size() == r.paths.size() && valid_packing(g, s, t, r.paths) &&
              !oracle::connected_without(g, ss, ts, r.cut) &&
              static_cast<int>(r.cut.size()) == oracle::min_vertex_cut(g, s, t);
    if (!ok) ++bad;
    total_cut += static_cast<int>(r.cut.size());
  }
  return {bad == 0, fmt("%d random (g, s, t) triples: %d with |cut| != |packing| or an invalid certificate "
                        "(mean cut %.2f)",
                        kMengerTriples, bad, static_cast<double>(total_cut) / kMengerTriples)};
}

Outcome important_separators() {
  int mismatch = 0, over = 0;
  std::size_t total = 0, most = 0;
  std::mt19937_64 rng(47);
  for (int i = 0; i < kSeparatorGraphs; ++i) {
    int n = 4 + i % (kSeparatorMaxVertices - 3);
    Graph g;
    if (i % 3 == 0) {
      // trees have many incomparable separators
      g = Graph(n);
      for (Vertex v = 1; v < n; ++v) g.add_edge(v, static_cast<Vertex>(rng() % static_cast<std::uint64_t>(v)));
    } else {
      g = oracle::random_graph(rng(), n, 0.2 + 0.1 * (i % 6));
    }
    std::vector<Vertex> perm = g.vertices();
    for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[rng() % k]);
    std::size_t nx = 1 + rng() % 3, ny = 1 + rng() % 3;
    if (nx + ny > perm.size()) nx = ny = 1;
    VertexSet x = normalized({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nx)});
    VertexSet y = normalized({perm.begin() + static_cast<std::ptrdiff_t>(nx),
                              perm.begin() + static_cast<std::ptrdiff_t>(nx + ny)});
    for (int m = 1; m <= kSeparatorMaxSize; ++m) {
      auto got = enumerate_important_separators(g, x, y, m);
      if (got != oracle::important_separators(g, x, y, m)) ++mismatch;
      if (got.size() > (std::size_t{1} << (2 * m))) ++over;
      total += got.size();
      most = std::max(most, got.size());
    }
  }
  return {mismatch == 0 && over == 0,
          fmt("%d graphs (<= %d vertices, every m <= %d): %d differ from the definition, %d exceed 4^m; %zu separators "
              "in total, at most %zu per query",
              kSeparatorGraphs, kSeparatorMaxVertices, kSeparatorMaxSize, mismatch, over, total, most)};
}

Outcome characteristic_classes() {
  std::mt19937_64 rng(53);
  int over = 0;
  std::uint64_t most_ratio_num = 0, most_ratio_den = 1;
  for (int i = 0; i < kLabeledGraphs; ++i) {
    int n = 4 + i % 7;
    LabeledGraph lg;
    lg.graph = oracle::random_graph(rng(), n, 0.25 + 0.05 * (i % 5));
    lg.num_labels = 1 + i % 6;
    lg.labeling.assign(static_cast<std::size_t>(n), LabelSet(lg.num_labels));
    for (Vertex v = 0; v < n; ++v)
      for (int l = 0; l < lg.num_labels; ++l)
        if (rng() % 3 == 0) lg.labeling[static_cast<std::size_t>(v)].insert(l);
    int nt = 1 + i % 3, m = 1 + (i / 3) % 2;
    VertexSet terms;
    for (Vertex v = 0; v < nt; ++v) terms.push_back(v);
    auto all = lg.graph.vertices();
    auto classes = enumerate_characteristics(lg, terms, all, m);
    auto bound = kappa_bound(static_cast<std::uint64_t>(nt), static_cast<std::uint64_t>(m),
                             static_cast<std::uint64_t>(lg.num_labels));
    if (classes.size() > bound) ++over;
    if (classes.size() * most_ratio_den > most_ratio_num * bound) most_ratio_num = classes.size(), most_ratio_den = bound;
  }

  int swaps = 0, failed = 0, instances = 0;
  for (std::uint64_t seed = 30'000; instances < kSwapInstances; ++seed) {
    RandomSpec spec;
    spec.n = 12;
    spec.modulator_size = 3;
    spec.w = 1 + static_cast<int>(seed % 2);
    auto inst = random_instance(seed, spec);
    inst.budget = 3;
    auto hsr = compute_hitting_set(inst.graph, inst.modulator, inst.budget);
    auto ann = apply_annotations(inst, hsr);
    Graph rest = ann.graph.without(ann.modulator);
    auto td = decompose(rest, spec.w);
    auto h = protrusion_decompose(rest, *td, hsr.hitting_set);
    auto sol = solve_annotated(ann);
    if (!sol) continue;
    ++instances;
    for (auto& comp : residual_components(ann, h)) {
      if (comp.size() > 10) continue;
      auto cl = component_labeling(ann, comp);
      auto old = set_intersection(sol->deleted, comp);
      auto key = cut_characteristic(cl.labeled, cl.terminals, old);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << comp.size()); ++mask) {
        auto s = oracle::pick(comp, mask);
        if (cut_characteristic(cl.labeled, cl.terminals, s) != key) continue;
        ++swaps;
        bool ok = false;
        try {
          auto r = separator_replace(ann, h, sol->deleted, comp, s);
          ok = oracle::colorable(ann.graph, ann.mono, r);
        } catch (const PreconditionError&) {
        }
        if (!ok) ++failed;
      }
    }
  }
  return {over == 0 && failed == 0 && swaps > 0,
          fmt("%d labeled graphs (n <= 3 terminals, m <= 2): %d exceed kappa (largest ratio %llu/%llu); %d "
              "same-class swaps on %d instances: %d invalid",
              kLabeledGraphs, over, static_cast<unsigned long long>(most_ratio_num),
              static_cast<unsigned long long>(most_ratio_den), swaps, instances, failed)};
}

// Independent class checks on G - X.
bool cliques_only(const Graph& g) {
  for (auto& c : connected_components(g))
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (!g.has_edge(c[i], c[j])) return false;
  return true;
}

Graph complement(const Graph& g) {
  auto vs = g.vertices();
  Graph c(static_cast<int>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!g.has_edge(vs[i], vs[j])) c.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
  return c;
}

bool class_by_oracle(const Graph& rest, GraphClass cls) {
  switch (cls) {
    case GraphClass::outerplanar:
      for (auto& c : connected_components(rest))
        if (!oracle::outerplanar_by_apex(rest.induced(c))) return false;
      return true;
    case GraphClass::cluster:
      return cliques_only(rest);
    case GraphClass::cocluster:
      return cliques_only(complement(rest));
    case GraphClass::edgeless:
      return rest.num_edges() == 0;
  }
  return false;
}

struct Sweep {
  const char* name;
  std::function<CompositionOutput(const std::vector<GraphBudget>&)> compose;
  bool vc_inputs;
  bool weighted;
  // (t, n, m, ell, tuples)
  std::vector<std::array<int, 5>> shapes;
};

Outcome gadget_fidelity() {
  auto box = k4_in_a_box();
  auto mins = oracle::all_min_octs(box.graph);
  bool box_ok = box.graph.num_vertices() == 8 && box.graph.num_edges() == 14 && mins.size() == 2 &&
                mins[0] == box.zero_terminals && mins[1] == box.one_terminals;

  // every t in 1..4 for n = 3..6; outerplanar outputs grow with t * n^2, so the
  // largest shapes get fewer tuples
  std::vector<Sweep> sweeps{
      {"outerplanar", compose_outerplanar, true, false,
       {{1, 3, 2, 0, 2}, {1, 6, 5, 2, 2}, {2, 3, 2, 0, 3}, {2, 4, 3, 1, 4}, {2, 5, 4, 1, 4}, {2, 6, 5, 2, 4},
        {3, 3, 2, 0, 3}, {3, 4, 3, 1, 4}, {3, 5, 4, 1, 2}, {3, 6, 5, 2, 1}, {4, 3, 2, 0, 3}, {4, 4, 3, 1, 4},
        {4, 5, 4, 1, 2}, {4, 6, 5, 2, 1}}},
      {"cluster", compose_cluster, false, false,
       {{1, 4, 4, 0, 3}, {2, 3, 3, 0, 2}, {2, 4, 4, 0, 4}, {2, 5, 6, 1, 4}, {2, 6, 8, 1, 4}, {3, 4, 4, 0, 4},
        {3, 5, 6, 1, 4}, {3, 6, 8, 1, 3}, {4, 3, 2, 0, 2}, {4, 4, 4, 0, 4}, {4, 5, 6, 1, 4}, {4, 6, 8, 1, 3}}},
      {"cocluster", compose_cocluster, false, false,
       {{1, 4, 4, 0, 3}, {2, 3, 3, 0, 2}, {2, 4, 4, 0, 4}, {2, 5, 6, 1, 4}, {2, 6, 8, 1, 4}, {3, 4, 4, 0, 4},
        {3, 5, 6, 1, 4}, {3, 6, 8, 1, 3}, {4, 3, 2, 0, 2}, {4, 4, 4, 0, 4}, {4, 5, 6, 1, 4}, {4, 6, 8, 1, 3}}},
      {"weighted-vc", compose_weighted_vc, false, true,
       {{1, 4, 4, 0, 3}, {2, 3, 3, 0, 2}, {2, 4, 4, 0, 4}, {2, 5, 6, 1, 4}, {2, 6, 8, 1, 4}, {3, 4, 4, 0, 4},
        {3, 5, 6, 1, 4}, {3, 6, 8, 1, 3}, {4, 3, 2, 0, 2}, {4, 4, 4, 0, 4}, {4, 5, 6, 1, 4}, {4, 6, 8, 1, 3}}},
  };
  bool all_ok = box_ok;
  std::string detail = fmt("K4 box %s", box_ok ? "ok" : "WRONG");
  for (auto& sw : sweeps) {
    int tuples = 0, yes = 0, invalid = 0, wrong = 0;
    std::uint64_t seed = 0;
    for (auto [t, n, m, ell, count] : sw.shapes)
      for (int k = 0; k < count; ++k, ++seed) {
        std::vector<GraphBudget> in;
        bool want = false;
        for (int i = 0; i < t; ++i) {
          in.push_back({shapes::random_gnm(seed * 131 + static_cast<std::uint64_t>(i), n, m), ell});
          auto opt = sw.vc_inputs ? oracle::min_vertex_cover(in.back().graph) : oracle::min_oct(in.back().graph);
          want |= opt <= ell;
        }
        auto out = sw.compose(in);
        Graph rest = out.instance.graph.without(out.instance.modulator);
        if (validate_composition(out) || !class_by_oracle(rest, out.cls)) ++invalid;
        const auto& g = out.instance.graph;
        bool got = (sw.weighted ? solve_weighted_oct(g, out.instance.budget) : solve_oct(g, out.instance.budget))
                       .has_value();
        if (got != want) {
          ++wrong;
          std::printf("  %s: t=%d n=%d seed %llu composed %d, inputs %d\n", sw.name, t, n,
                      static_cast<unsigned long long>(seed), got, want);
        }
        ++tuples;
        yes += want;
      }
    all_ok = all_ok && invalid == 0 && wrong == 0 && yes > 0 && yes < tuples;
    detail += fmt("; %s %d tuples (%d YES): %d invalid, %d not OR-equivalent", sw.name, tuples, yes, invalid, wrong);
  }
  return {all_ok, detail};
}

Outcome subdivision_parity() {
  int differ = 0;
  std::mt19937_64 rng(61);
  for (int i = 0; i < kSubdivisionGraphs; ++i) {
    int n = 3 + i % (kSubdivisionMaxVertices - 2);
    Graph g = oracle::random_graph(rng(), n, 0.2 + 0.1 * (i % 5));
    Graph s = subdivide_edges_p2(g);
    std::int64_t want = oracle::min_oct(g);
    std::int64_t got = s.num_vertices() <= 20 ? oracle::min_oct(s) : *min_oct(s);
    if (got != want) ++differ;
  }
  return {differ == 0, fmt("%d graphs (<= %d vertices): %d change their minimum OCT when subdivided",
                           kSubdivisionGraphs, kSubdivisionMaxVertices, differ)};
}

Outcome dp_versus_brute() {
  int differ = 0, invalid = 0;
  for (int i = 0; i < kDpGraphs; ++i) {
    int n = 3 + i % (kDpMaxVertices - 2);
    Graph g = oracle::random_partial_ktree(static_cast<std::uint64_t>(7000 + i), n, 1 + i % 2, 0.6 + 0.1 * (i % 5));
    auto td = decompose(g, 2);
    if (!td) {
      ++invalid;
      continue;
    }
    auto s = oct_dp(g, *td);
    if (!is_bipartite_without(g, s)) ++invalid;
    if (static_cast<std::int64_t>(s.size()) != oracle::min_oct(g)) ++differ;
  }
  return {differ == 0 && invalid == 0,
          fmt("%d graphs of treewidth <= 2 (<= %d vertices): %d differ from brute force, %d invalid",
              kDpGraphs, kDpMaxVertices, differ, invalid)};
}

}  // namespace

int main(int argc, char** argv) {
  // optional: names of the checks to run
  std::vector<std::pair<const char*, Outcome (*)()>> checks{
      {"kernel-equivalence", kernel_equivalence},
      {"bound-ledger", bound_ledger},
      {"hitting-completeness", hitting_completeness},
      {"menger-duality", menger_duality},
      {"important-separators", important_separators},
      {"characteristic-classes", characteristic_classes},
      {"gadget-fidelity", gadget_fidelity},
      {"subdivision-parity", subdivision_parity},
      {"dp-vs-brute-force", dp_versus_brute},
  };
  int red = 0;
  for (auto& [name, fn] : checks) {
    if (argc > 1 && std::find(argv + 1, argv + argc, std::string(name)) == argv + argc) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    red += !o.pass;
  }
  return red ? 1 : 0;
}
