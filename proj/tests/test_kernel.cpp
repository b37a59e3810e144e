#include <gtest/gtest.h>

#include <random>

#include "octk/errors.hpp"
#include "octk/generators.hpp"
#include "octk/kernel.hpp"
#include "octk/solvers.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace octk;

namespace {

bool yes(const OctInstance& inst) { return solve_oct(inst.graph, inst.budget).has_value(); }

// Annotated instance with H from the first two pipeline steps.
struct Prepared {
  AnnotatedInstance ann;
  VertexSet h;
};

Prepared prepare(const OctInstance& inst, int w) {
  auto hsr = compute_hitting_set(inst.graph, inst.modulator, inst.budget);
  auto ann = apply_annotations(inst, hsr);
  Graph rest = ann.graph.without(ann.modulator);
  auto td = decompose(rest, w);
  return {ann, protrusion_decompose(rest, *td, hsr.hitting_set)};
}

}  // namespace

TEST(XPath, Classification) {
  // p=0, q=1 in X; a=2 joins both; r=3, s=4 in X with mono pair, b=5 joins them
  Graph g = shapes::make(6, {{0, 2}, {2, 1}, {3, 5}, {5, 4}});
  AnnotatedInstance inst{g, {0, 1, 3, 4}, {{3, 4}}, 1};
  Vertex a[] = {2}, b[] = {5};
  EXPECT_EQ(classify_xpath(inst, 0, 1, a), XPathKind::important);
  EXPECT_EQ(classify_xpath(inst, 3, 4, b), XPathKind::not_important);
  EXPECT_EQ(classify_xpath(inst, 0, 0, a), XPathKind::not_an_xpath);
  Vertex missing[] = {5};
  EXPECT_EQ(classify_xpath(inst, 0, 1, missing), XPathKind::not_an_xpath);
}

TEST(XPath, EvenPathsAgainstEdges) {
  // p=0, q=1, path a=2, b=3
  Graph g = shapes::make(4, {{0, 2}, {2, 3}, {3, 1}});
  AnnotatedInstance inst{g, {0, 1}, {}, 1};
  Vertex ab[] = {2, 3};
  EXPECT_EQ(classify_xpath(inst, 0, 1, ab), XPathKind::important);
  inst.graph.add_edge(0, 1);
  EXPECT_EQ(classify_xpath(inst, 0, 1, ab), XPathKind::not_important);
}

TEST(XPath, AgreesWithDefinitionOracle) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 200; ++round) {
    Graph g = oracle::random_graph(rng(), 8, 0.35);
    AnnotatedInstance inst{g, {0, 1, 2}, {}, 1};
    if (rng() % 2) inst.mono.push_back({0, 1});
    std::vector<Vertex> path;
    for (int len = 1 + static_cast<int>(rng() % 3); len > 0; --len) path.push_back(static_cast<Vertex>(rng() % 8));
    for (Vertex p : inst.modulator)
      for (Vertex q : inst.modulator)
        EXPECT_EQ(classify_xpath(inst, p, q, path) == XPathKind::important, oracle::important_xpath(inst, p, q, path));
  }
}

TEST(HittingSet, EmptyModulator) {
  auto r = compute_hitting_set(shapes::cycle(6), {}, 2);
  EXPECT_TRUE(r.forced_bichromatic.empty());
  EXPECT_TRUE(r.forced_monochromatic.empty());
  EXPECT_TRUE(r.forced_deletions.empty());
  EXPECT_TRUE(r.hitting_set.empty());
}

TEST(HittingSet, TriangleNeedsOneVertex) {
  Graph g = shapes::complete(3);
  for (int ell = 1; ell <= 3; ++ell) {
    auto r = compute_hitting_set(g, VertexSet{0}, ell);
    EXPECT_TRUE(r.forced_deletions.empty());
    ASSERT_EQ(r.hitting_set.size(), 1u);
    AnnotatedInstance ann{g, {0}, {}, ell};
    EXPECT_TRUE(oracle::important_xpaths_avoiding(ann, r.hitting_set, 10).empty());
  }
}

TEST(HittingSet, ManyTrianglesForceDeletion) {
  for (int ell = 0; ell <= 3; ++ell) {
    Graph g(1);
    for (int i = 0; i <= ell; ++i) {
      Vertex a = g.add_vertex(), b = g.add_vertex();
      g.add_edge(0, a);
      g.add_edge(0, b);
      g.add_edge(a, b);
    }
    auto r = compute_hitting_set(g, VertexSet{0}, ell);
    EXPECT_EQ(r.forced_deletions, (VertexSet{0}));
    ASSERT_EQ(r.certificates.size(), 1u);
    EXPECT_EQ(static_cast<int>(r.certificates[0].paths.size()), ell + 1);
  }
}

TEST(HittingSet, BoundAndCertificates) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    RandomSpec spec;
    spec.n = 14;
    spec.modulator_size = 3;
    auto inst = random_instance(seed, spec);
    auto r = compute_hitting_set(inst.graph, inst.modulator, inst.budget);
    auto k = inst.modulator.size();
    EXPECT_LE(r.hitting_set.size(), 4 * static_cast<std::size_t>(inst.budget) * k * k);
    for (Vertex v : r.hitting_set) EXPECT_FALSE(set_contains(inst.modulator, v));
    EXPECT_EQ(r.certificates.size(),
              r.forced_bichromatic.size() + r.forced_monochromatic.size() + r.forced_deletions.size());
    for (const auto& c : r.certificates) {
      EXPECT_EQ(static_cast<std::int64_t>(c.paths.size()), inst.budget + 1);
      std::set<Vertex> used;
      for (const auto& p : c.paths)
        for (Vertex v : p) EXPECT_TRUE(used.insert(v).second);
    }
  }
}

TEST(Annotations, DeletesForcedAndAddsPairs) {
  Graph g = shapes::make(5, {{3, 4}});
  OctInstance inst{g, {0, 1, 2, 3}, 2};
  HittingSetResult hsr;
  hsr.forced_deletions = {3};
  hsr.forced_bichromatic = {{0, 1}, {1, 3}};
  hsr.forced_monochromatic = {{0, 2}};
  auto a = apply_annotations(inst, hsr);
  EXPECT_EQ(a.budget, 1);
  EXPECT_FALSE(a.graph.has_vertex(3));
  EXPECT_EQ(a.modulator, (VertexSet{0, 1, 2}));
  EXPECT_TRUE(a.graph.has_edge(0, 1));
  EXPECT_EQ(a.mono, (std::vector<VertexPair>{{0, 2}}));
  hsr.forced_deletions = {0, 1, 2};
  EXPECT_EQ(apply_annotations(inst, hsr), annotate(canonical_no()));
}

TEST(Annotations, HitsAllImportantPaths) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomSpec spec;
    spec.n = 12;
    spec.modulator_size = 3;
    auto inst = random_instance(seed, spec);
    auto hsr = compute_hitting_set(inst.graph, inst.modulator, inst.budget);
    // too many forced deletions already decide NO
    if (static_cast<std::int64_t>(hsr.forced_deletions.size()) > inst.budget) continue;
    auto ann = apply_annotations(inst, hsr);
    auto miss = oracle::important_xpaths_avoiding(ann, hsr.hitting_set, 10);
    EXPECT_TRUE(miss.empty()) << "seed " << seed;
  }
}

TEST(Protrusion, EmptySeed) {
  Graph g = shapes::path(5);
  EXPECT_TRUE(protrusion_decompose(g, *decompose(g, 1), {}).empty());
}

namespace {

std::size_t worst_neighbors(const Graph& g, const VertexSet& s) {
  std::size_t worst = 0;
  for (auto& c : connected_components(g.without(s))) {
    std::set<Vertex> nb;
    for (Vertex a : c)
      for (Vertex b : g.neighbors(a))
        if (set_contains(s, b)) nb.insert(b);
    worst = std::max(worst, nb.size());
  }
  return worst;
}

}  // namespace

TEST(Protrusion, PathMiddle) {
  Graph g = shapes::path(9);
  auto s = protrusion_decompose(g, *decompose(g, 1), VertexSet{4});
  EXPECT_LE(s.size(), 4u);
  EXPECT_TRUE(set_contains(s, 4));
  EXPECT_LE(worst_neighbors(g, s), 2u);
}

TEST(Protrusion, RandomWidthTwo) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = oracle::random_partial_ktree(seed, 16, 2, 0.8);
    auto td = decompose(g, 2);
    ASSERT_TRUE(td);
    VertexSet s{static_cast<Vertex>(seed % 16), static_cast<Vertex>((seed * 7 + 3) % 16), static_cast<Vertex>((seed * 5 + 11) % 16)};
    s = normalized(s);
    auto out = protrusion_decompose(g, *td, s);
    EXPECT_LE(out.size(), 2 * 3 * s.size());
    EXPECT_LE(worst_neighbors(g, out), 2u * static_cast<std::size_t>(td->width()));
    EXPECT_EQ(set_intersection(out, s), s);
  }
}

TEST(Protrusion, RejectsBrokenDecomposition) {
  Graph g = shapes::path(3);
  TreeDecomposition td{{{0, 1}}, {-1}};
  EXPECT_THROW(protrusion_decompose(g, td, VertexSet{0}), PreconditionError);
}

TEST(Prune, KeepsBudgetPlusOnePerPairAndParity) {
  for (int ell = 0; ell <= 2; ++ell) {
    // p=0, q=1; ell+5 single vertices adjacent to both
    Graph g(2);
    for (int i = 0; i < ell + 5; ++i) {
      Vertex c = g.add_vertex();
      g.add_edge(0, c);
      g.add_edge(1, c);
    }
    AnnotatedInstance inst{g, {0, 1}, {}, ell};
    auto out = prune_components(inst, {});
    EXPECT_EQ(out.graph.num_vertices(), 2 + ell + 1);
    EXPECT_EQ(solve_annotated(out).has_value(), solve_annotated(inst).has_value());
  }
}

TEST(Prune, DropsDetachedAndKeepsMarked) {
  Graph g = shapes::make(5, {{0, 2}, {1, 2}, {3, 4}});
  AnnotatedInstance inst{g, {0, 1}, {}, 1};
  auto out = prune_components(inst, {});
  EXPECT_TRUE(out.graph.has_vertex(2));
  EXPECT_FALSE(out.graph.has_vertex(3));
  EXPECT_FALSE(out.graph.has_vertex(4));
  Graph small = shapes::make(3, {{0, 2}, {1, 2}});
  AnnotatedInstance inst2{small, {0, 1}, {}, 1};
  EXPECT_EQ(prune_components(inst2, {}), inst2);
}

TEST(Prune, RejectsHittingSetInsideModulator) {
  AnnotatedInstance inst{shapes::path(3), {0}, {}, 1};
  EXPECT_THROW(prune_components(inst, VertexSet{0}), PreconditionError);
}

TEST(Restrict, SingleVertexComponent) {
  // X = {0, 1}; H = {2}; component {3} attached to 0 and 2
  Graph g = shapes::make(4, {{0, 2}, {2, 1}, {0, 3}, {3, 2}});
  AnnotatedInstance inst{g, {0, 1}, {}, 1};
  auto r = restrict_deletable(inst, VertexSet{2}, 1);
  auto marked = set_difference(r.deletable, VertexSet{0, 1, 2});
  EXPECT_LE(marked.size(), 1u);
}

TEST(Restrict, PreservesOptimum) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 60; ++seed) {
    RandomSpec spec;
    spec.n = 13;
    spec.modulator_size = 3;
    spec.w = 1 + static_cast<int>(seed % 2);
    auto inst = random_instance(seed, spec);
    inst.budget = static_cast<std::int64_t>(inst.modulator.size());
    auto [ann, h] = prepare(inst, spec.w);
    if (ann.modulator.empty()) continue;
    ++checked;
    auto r = restrict_deletable(ann, h, spec.w);
    auto before = solve_annotated(ann);
    auto after = solve_restricted(r);
    ASSERT_EQ(before.has_value(), after.has_value()) << "seed " << seed;
    if (before) {
      EXPECT_EQ(before->cost, after->cost) << "seed " << seed;
    }
  }
}

TEST(Restrict, TooManyTerminalsRejected) {
  // component {4} has terminals 1, 2, 3 in H; width 1 allows 2
  Graph g = shapes::make(5, {{4, 1}, {4, 2}, {4, 3}, {0, 1}});
  AnnotatedInstance inst{g, {0}, {}, 1};
  EXPECT_THROW(restrict_deletable(inst, VertexSet{1, 2, 3}, 1), PreconditionError);
}

TEST(SeparatorReplace, IdentityAndSwaps) {
  int swaps = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    RandomSpec spec;
    spec.n = 12;
    spec.modulator_size = 3;
    auto inst = random_instance(seed, spec);
    inst.budget = 3;
    auto [ann, h] = prepare(inst, 1);
    auto sol = solve_annotated(ann);
    if (!sol) continue;
    for (auto& comp : residual_components(ann, h)) {
      auto old = set_intersection(sol->deleted, comp);
      EXPECT_EQ(separator_replace(ann, h, sol->deleted, comp, old), sol->deleted);
      auto cl = component_labeling(ann, comp);
      auto key = cut_characteristic(cl.labeled, cl.terminals, old);
      // every subset of the component with the same characteristic
      if (comp.size() > 10) continue;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << comp.size()); ++mask) {
        auto s = oracle::pick(comp, mask);
        if (s == old || cut_characteristic(cl.labeled, cl.terminals, s) != key) continue;
        auto r = separator_replace(ann, h, sol->deleted, comp, s);
        EXPECT_TRUE(oracle::colorable(ann.graph, ann.mono, r)) << "seed " << seed;
        ++swaps;
        if (s.size() < old.size()) {
          EXPECT_LT(r.size(), sol->deleted.size());
        }
      }
    }
  }
  EXPECT_GT(swaps, 0);
}

TEST(SeparatorReplace, RefusesMismatch) {
  // X = {0}; triangle 0-1-2 with H = {} ; component {1, 2}
  Graph g = shapes::complete(3);
  AnnotatedInstance inst{g, {0}, {}, 1};
  VertexSet sol{1}, comp{1, 2};
  EXPECT_THROW(separator_replace(inst, {}, sol, comp, VertexSet{0}), PreconditionError);
  EXPECT_THROW(separator_replace(inst, {}, sol, VertexSet{1}, VertexSet{1}), PreconditionError);
}

TEST(BackTransform, TriangleOutsideZ) {
  RestrictedInstance r{AnnotatedInstance{shapes::complete(4), {0}, {}, 3}, {0}};
  EXPECT_EQ(back_transform(r), canonical_no());
}

TEST(BackTransform, MonoPairGadget) {
  // u=0, v=1 adjacent and annotated; both deletable, nothing else
  RestrictedInstance r{AnnotatedInstance{shapes::make(2, {{0, 1}}), {0, 1}, {{0, 1}}, 2}, {0, 1}};
  auto out = back_transform(r);
  EXPECT_EQ(out.budget, 2);
  EXPECT_EQ(out.modulator, (VertexSet{0, 1}));
  // ell + 1 common neighbours encode the odd path through the gadget vertex
  int common = 0;
  for (Vertex w : out.graph.vertices())
    if (out.graph.has_edge(w, 0) && out.graph.has_edge(w, 1)) ++common;
  EXPECT_EQ(common, 3);
  EXPECT_EQ(solve_oct(out.graph, 0).has_value(), false);
  EXPECT_EQ(solve_oct(out.graph, 1)->cost, 1);
}

TEST(BackTransform, AgreesWithRestrictedSolver) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 150; ++round) {
    Graph g = oracle::random_graph(rng(), 10, 0.3);
    RestrictedInstance r;
    r.base.graph = g;
    r.base.modulator = {0, 1, 2};
    if (rng() % 2) r.base.mono.push_back({0, 1});
    r.base.budget = static_cast<std::int64_t>(rng() % 4);
    for (Vertex v : g.vertices())
      if (v < 3 || rng() % 3 == 0) r.deletable.push_back(v);
    auto out = back_transform(r);
    EXPECT_EQ(solve_restricted(r).has_value(), solve_oct(out.graph, out.budget).has_value()) << "round " << round;
  }
}

TEST(Kernelize, LargeBudgetIsYes) {
  OctInstance inst{shapes::complete(4), {0, 1}, 2};
  auto r = kernelize(inst, 1);
  EXPECT_EQ(r.instance, canonical_yes());
  EXPECT_EQ(r.decided, std::optional<bool>(true));
}

TEST(Kernelize, BipartiteZeroBudget) {
  OctInstance inst{shapes::cycle(6), {0}, 0};
  auto r = kernelize(inst, 1);
  EXPECT_EQ(r.decided, std::optional<bool>(true));
  EXPECT_EQ(r.instance, canonical_yes());
}

TEST(Kernelize, Preconditions) {
  EXPECT_THROW(kernelize(OctInstance{shapes::complete(3), {}, 1}, 1), PreconditionError);
  EXPECT_THROW(kernelize(OctInstance{shapes::complete(4), {0}, 0}, 3), PreconditionError);
  EXPECT_THROW(kernelize(OctInstance{shapes::cycle(4), {0}, 0}, 0), PreconditionError);
  EXPECT_THROW(kernelize(OctInstance{shapes::cycle(4), {9}, 0}, 1), PreconditionError);
}

TEST(Kernelize, EquivalentAndWithinBounds) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    RandomSpec spec;
    spec.n = 14;
    spec.w = 1 + static_cast<int>(seed % 2);
    spec.modulator_size = 2 + static_cast<int>(seed % 3);
    auto inst = random_instance(seed, spec);
    auto r = kernelize(inst, spec.w);
    EXPECT_TRUE(r.bounds_hold()) << format_trace(r.trace);
    EXPECT_EQ(yes(inst), yes(r.instance)) << "seed " << seed;
    EXPECT_EQ(r.trace.front().stage, "input");
    EXPECT_EQ(r.trace.back().stage, "output");
  }
}

TEST(Kernelize, FaultHookBreaksEquivalence) {
  KernelOptions opts;
  opts.fault = Fault::drop_budget;
  int broken = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomSpec spec;
    spec.n = 12;
    auto inst = random_instance(seed, spec);
    if (yes(inst) != yes(kernelize(inst, 1, opts).instance)) ++broken;
  }
  EXPECT_GT(broken, 0);
}

TEST(Trace, LineFormat) {
  TraceRecord t{"prune", 10, 12, 3, 0, "components", 4, 9};
  EXPECT_EQ(t.line(), "stage=prune vertices=10 edges=12 h=3 z=0 metric=components value=4 bound=9 slack=5");
  EXPECT_TRUE(t.holds());
  t.value = 10;
  EXPECT_FALSE(t.holds());
}
