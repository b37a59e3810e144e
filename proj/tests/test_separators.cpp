#include <gtest/gtest.h>

#include <random>

#include "octk/errors.hpp"
#include "octk/separators.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace octk;

namespace {

// Paths are internally disjoint, start at s, end at t and walk real edges.
void expect_valid_packing(const Graph& g, Vertex s, Vertex t, const std::vector<std::vector<Vertex>>& paths) {
  std::set<Vertex> used;
  for (const auto& p : paths) {
    ASSERT_GE(p.size(), 3u);
    EXPECT_EQ(p.front(), s);
    EXPECT_EQ(p.back(), t);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_TRUE(g.has_edge(p[i], p[i + 1]));
    for (std::size_t i = 1; i + 1 < p.size(); ++i) EXPECT_TRUE(used.insert(p[i]).second) << "shared vertex " << p[i];
  }
}

LabeledGraph random_labeled(std::mt19937_64& rng, int n, int r) {
  LabeledGraph lg;
  lg.graph = oracle::random_graph(rng(), n, 0.35);
  lg.num_labels = r;
  lg.labeling.assign(static_cast<std::size_t>(n), LabelSet(r));
  for (int v = 0; v < n; ++v)
    for (int l = 0; l < r; ++l)
      if (rng() % 3 == 0) lg.labeling[static_cast<std::size_t>(v)].insert(l);
  return lg;
}

}  // namespace

TEST(MinCut, TwoDisjointPaths) {
  Graph g = shapes::make(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  auto r = min_vertex_cut(g, 0, 3);
  EXPECT_EQ(r.cut, (VertexSet{1, 2}));
  EXPECT_EQ(r.paths.size(), 2u);
  expect_valid_packing(g, 0, 3, r.paths);
}

TEST(MinCut, DifferentComponents) {
  auto r = min_vertex_cut(Graph(2), 0, 1);
  EXPECT_TRUE(r.cut.empty());
  EXPECT_TRUE(r.paths.empty());
}

TEST(MinCut, AdjacentTerminalsRejected) {
  EXPECT_THROW(min_vertex_cut(shapes::path(2), 0, 1), PreconditionError);
}

TEST(MinCut, MatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Graph g = oracle::random_graph(seed, 10, 0.3);
    if (g.has_edge(0, 9)) continue;
    auto r = min_vertex_cut(g, 0, 9);
    EXPECT_EQ(static_cast<int>(r.cut.size()), oracle::min_vertex_cut(g, 0, 9)) << "seed " << seed;
    EXPECT_EQ(r.cut.size(), r.paths.size());
    expect_valid_packing(g, 0, 9, r.paths);
    Vertex s[] = {0}, t[] = {9};
    EXPECT_FALSE(oracle::connected_without(g, s, t, r.cut));
  }
}

TEST(MinCut, BoundStopsEarly) {
  Graph g = shapes::make(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
  auto r = min_vertex_cut(g, 0, 4, 2);
  EXPECT_TRUE(r.exceeds_bound);
  EXPECT_TRUE(r.cut.empty());
  EXPECT_EQ(r.paths.size(), 3u);
  EXPECT_FALSE(min_vertex_cut(g, 0, 4, 3).exceeds_bound);
}

TEST(TypedCut, TriangleSingleton) {
  // v = 0 in X, P = {1}, Q = {2}
  Graph g = shapes::complete(3);
  Bipartition bip{{1}, {2}};
  auto r = vertex_cut_typed(g, bip, 0, 0, Side::p, Side::q);
  ASSERT_EQ(r.cut.size(), 1u);
  EXPECT_TRUE(r.cut[0] == 1 || r.cut[0] == 2);
}

TEST(TypedCut, IsolatedSourceGivesEmpty) {
  Graph g = shapes::make(4, {{1, 2}, {2, 3}});
  Bipartition bip{{1, 3}, {2}};
  EXPECT_TRUE(vertex_cut_typed(g, bip, 0, 0, Side::p, Side::q).cut.empty());
}

TEST(TypedCut, MatchesExhaustiveSearch) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 120; ++seed) {
    Graph g = oracle::random_graph(seed, 10, 0.3);
    VertexSet rest{2, 3, 4, 5, 6, 7, 8, 9};
    auto b = bipartition(g, rest);
    if (!std::holds_alternative<Bipartition>(b)) continue;
    ++checked;
    auto bip = std::get<Bipartition>(b);
    for (Side in : {Side::p, Side::q})
      for (Side out : {Side::p, Side::q})
        for (auto [u, v] : {std::pair{0, 1}, std::pair{0, 0}}) {
          auto r = vertex_cut_typed(g, bip, u, v, in, out);
          EXPECT_EQ(static_cast<int>(r.cut.size()), oracle::min_typed_cut(g, bip, u, v, in, out)) << "seed " << seed;
          EXPECT_EQ(r.cut.size(), r.paths.size());
        }
  }
}

TEST(ImportantSeparators, DifferentComponents) {
  Graph g(2);
  auto r = enumerate_important_separators(g, VertexSet{0}, VertexSet{1}, 2);
  EXPECT_EQ(r, (std::vector<VertexSet>{{}}));
}

TEST(ImportantSeparators, PathPrefersFarVertex) {
  // x - a - b - y; separators may contain y itself, and {y} reaches furthest
  Graph g = shapes::path(4);
  auto r = enumerate_important_separators(g, VertexSet{0}, VertexSet{3}, 2);
  EXPECT_EQ(r, (std::vector<VertexSet>{{3}}));
  EXPECT_FALSE(is_important_separator(g, VertexSet{0}, VertexSet{3}, VertexSet{1}));  // {b} dominates {a}
  EXPECT_FALSE(is_important_separator(g, VertexSet{0}, VertexSet{3}, VertexSet{2}));  // {y} dominates {b}
  EXPECT_FALSE(is_important_separator(g, VertexSet{0}, VertexSet{3}, VertexSet{1, 2}));  // not minimal
}

TEST(ImportantSeparators, MatchDefinition) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 60; ++round) {
    Graph g = oracle::random_graph(rng(), 9, 0.25);
    VertexSet x{0, 1}, y{7, 8};
    for (int m = 0; m <= 3; ++m) {
      auto got = enumerate_important_separators(g, x, y, m);
      EXPECT_EQ(got, oracle::important_separators(g, x, y, m)) << "round " << round << " m " << m;
      EXPECT_LE(got.size(), std::size_t{1} << (2 * m));
    }
  }
}

TEST(Labels, ReachableLabels) {
  // edge t - v, f(v) = {x}
  LabeledGraph lg{shapes::path(2), 2, {LabelSet(2), LabelSet(2)}};
  lg.labeling[0].insert(0);  // f(t)
  lg.labeling[1].insert(1);  // f(v)
  EXPECT_EQ(reachable_labels(lg, 0, {}).members(), (std::vector<int>{0, 1}));
  EXPECT_EQ(reachable_labels(lg, 0, VertexSet{1}).members(), (std::vector<int>{0}));
  EXPECT_TRUE(reachable_labels(lg, 0, VertexSet{0}).empty());
}

TEST(Labels, ReachableMatchesBfsUnion) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    LabeledGraph lg = random_labeled(rng, 8, 4);
    VertexSet s;
    for (Vertex v = 1; v < 8; ++v)
      if (rng() % 4 == 0) s.push_back(v);
    LabelSet expect(4);
    for (Vertex v = 0; v < 8; ++v) {
      Vertex from[] = {0}, to[] = {v};
      if (!set_contains(s, v) && oracle::connected_without(lg.graph, from, to, s)) expect |= lg.labeling[v];
    }
    EXPECT_EQ(reachable_labels(lg, 0, s), expect);
  }
}

TEST(Characteristics, EmptyAndFullSeparators) {
  LabeledGraph lg{shapes::path(4), 3, std::vector<LabelSet>(4, LabelSet(3))};
  lg.labeling[0].insert(0);
  lg.labeling[1].insert(1);
  lg.labeling[3].insert(2);
  VertexSet terms{0, 3};
  auto none = cut_characteristic(lg, terms, {});
  for (const auto& e : none) EXPECT_EQ(e.members(), (std::vector<int>{0, 1, 2}));
  auto all = cut_characteristic(lg, terms, VertexSet{1, 2});
  EXPECT_EQ(all[0], lg.labeling[0]);
  EXPECT_EQ(all[1], lg.labeling[3]);
}

TEST(Characteristics, NoCandidatesSingleClass) {
  LabeledGraph lg{shapes::path(2), 1, std::vector<LabelSet>(2, LabelSet(1))};
  auto classes = enumerate_characteristics(lg, VertexSet{0}, {}, 2);
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_TRUE(classes[0].representative.empty());
}

TEST(Characteristics, SameClassSameLabelsRecomputed) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 60; ++round) {
    LabeledGraph lg = random_labeled(rng, 8, 3);
    VertexSet terms{0, 1};
    VertexSet cand{2, 3, 4, 5, 6, 7};
    auto classes = enumerate_characteristics(lg, terms, cand, 2);
    EXPECT_LE(classes.size(), kappa_bound(2, 2, 3));
    for (const auto& c : classes) {
      EXPECT_EQ(cut_characteristic(lg, terms, c.representative), c.key);
      for (std::size_t i = 0; i < terms.size(); ++i)
        EXPECT_EQ(reachable_labels(lg, terms[i], c.representative), c.key[i]);
    }
  }
}

TEST(Characteristics, CeilingEnforced) {
  LabeledGraph lg{Graph(30), 1, std::vector<LabelSet>(30, LabelSet(1))};
  VertexSet cand;
  for (Vertex v = 1; v < 30; ++v) cand.push_back(v);
  EXPECT_THROW(enumerate_characteristics(lg, VertexSet{0}, cand, 5, 1000), CeilingExceeded);
}

TEST(Kappa, Formula) {
  EXPECT_EQ(kappa_bound(3, 0, 5), 1u);
  EXPECT_EQ(kappa_bound(1, 1, 1), 8u);
  EXPECT_EQ(binom_at_most(5, 2), 16u);
  EXPECT_LE(kappa_bound(2, 1, 3), kappa_bound(2, 1, 4));
  EXPECT_LE(kappa_bound(2, 1, 3), kappa_bound(2, 2, 3));
  EXPECT_LE(kappa_bound(2, 1, 3), kappa_bound(3, 1, 3));
  EXPECT_EQ(kappa_bound(50, 6, 1000), std::numeric_limits<std::uint64_t>::max());
}
