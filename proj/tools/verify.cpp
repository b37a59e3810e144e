#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "octk/generators.hpp"
#include "octk/instance_io.hpp"
#include "octk/kernel.hpp"
#include "octk/separators.hpp"
#include "octk/solvers.hpp"

namespace cli {

using namespace octk;

namespace {

struct Report {
  explicit Report(std::string n) : name(std::move(n)) {}
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> witnesses;

  void fail(std::string witness) {
    ++failures;
    if (witnesses.size() < 3) witnesses.push_back(std::move(witness));
  }
};

Graph gnp(Rng& rng, int n, double p) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

std::string dump(const OctInstance& inst) { return format_instance(to_file(inst)); }

std::string dump_graph(const Graph& g, const std::string& extra) {
  std::ostringstream s;
  s << "# " << extra << "\n" << format_instance(InstanceFile{g, {}, {}, std::nullopt, std::nullopt});
  return s.str();
}

struct Suite {
  const Common& c;
  const VerifyArgs& a;
  SolverLimits lim;
  std::vector<std::pair<std::string, OctInstance>> instances;
  std::vector<KernelResult> runs;

  void load() {
    for (auto& path : a.inputs) instances.push_back({path, oct_from_file(read_instance_file(path))});
    if (!a.inputs.empty()) return;
    for (int i = 0; i < a.instances; ++i) {
      RandomSpec spec;
      spec.n = 8 + i % 9;
      spec.w = a.w;
      spec.modulator_size = 1 + i % 4;
      instances.push_back({"seed " + std::to_string(c.seed + static_cast<std::uint64_t>(i)),
                           random_instance(c.seed + static_cast<std::uint64_t>(i), spec)});
    }
  }

  Report equivalence() {
    Report r("equivalence");
    KernelOptions opts;
    opts.enum_ceiling = c.ceiling_enum;
    if (a.fault == "drop-budget") opts.fault = Fault::drop_budget;
    for (auto& [id, inst] : instances) {
      ++r.cases;
      auto k = kernelize(inst, a.w, opts);
      runs.push_back(k);
      bool before = solve_oct(inst.graph, inst.budget, lim).has_value();
      bool after = solve_oct(k.instance.graph, k.instance.budget, lim).has_value();
      if (before != after)
        r.fail("# " + id + ": input " + (before ? "YES" : "NO") + ", kernel " + (after ? "YES" : "NO") + "\n" +
               dump(inst));
    }
    return r;
  }

  Report ledger() {
    Report r("bound-ledger");
    for (std::size_t i = 0; i < runs.size(); ++i)
      for (auto& t : runs[i].trace) {
        if (t.metric.empty()) continue;
        ++r.cases;
        if (!t.holds()) r.fail("# " + instances[i].first + ": " + t.line() + "\n" + dump(instances[i].second));
      }
    return r;
  }

  Report menger() {
    Report r("menger-duality");
    Rng rng(c.seed ^ 0x6d656e67ULL);
    for (int i = 0; i < 200; ++i) {
      int n = 4 + static_cast<int>(rng.below(11));
      Graph g = gnp(rng, n, 0.15 + 0.05 * static_cast<double>(rng.below(8)));
      Vertex s = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      Vertex t = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      if (s == t || g.has_edge(s, t)) continue;
      ++r.cases;
      auto res = min_vertex_cut(g, s, t);
      bool ok = res.cut.size() == res.paths.size();
      std::set<Vertex> inner;
      for (auto& p : res.paths) {
        ok = ok && p.size() >= 2 && p.front() == s && p.back() == t;
        for (std::size_t k = 0; ok && k + 1 < p.size(); ++k) ok = g.has_edge(p[k], p[k + 1]);
        for (std::size_t k = 1; ok && k + 1 < p.size(); ++k) ok = inner.insert(p[k]).second;
      }
      Vertex ss[] = {s}, ts[] = {t};
      ok = ok && separates(g, ss, ts, res.cut);
      if (!ok) r.fail(dump_graph(g, "s=" + std::to_string(s) + " t=" + std::to_string(t)));
    }
    return r;
  }

  Report important() {
    Report r("important-separators");
    Rng rng(c.seed ^ 0x696d70ULL);
    for (int i = 0; i < 100; ++i) {
      int n = 4 + static_cast<int>(rng.below(9));
      Graph g = gnp(rng, n, 0.3);
      auto vs = g.vertices();
      rng.shuffle(vs);
      VertexSet x{vs[0]}, y{vs[1]};
      int m = 1 + static_cast<int>(rng.below(3));
      ++r.cases;
      auto seps = enumerate_important_separators(g, x, y, m);
      bool ok = seps.size() <= (std::size_t{1} << (2 * m));
      for (auto& s : seps) ok = ok && s.size() <= static_cast<std::size_t>(m) && is_important_separator(g, x, y, s);
      if (!ok)
        r.fail(dump_graph(g, "x=" + std::to_string(x[0]) + " y=" + std::to_string(y[0]) + " m=" + std::to_string(m) +
                                 " count=" + std::to_string(seps.size())));
    }
    return r;
  }

  Report kappa() {
    Report r("kappa-bound");
    Rng rng(c.seed ^ 0x6b617070ULL);
    for (int i = 0; i < 100; ++i) {
      int n = 4 + static_cast<int>(rng.below(7));
      LabeledGraph lg;
      lg.graph = gnp(rng, n, 0.3);
      lg.num_labels = 1 + static_cast<int>(rng.below(6));
      lg.labeling.assign(static_cast<std::size_t>(n), LabelSet(lg.num_labels));
      for (Vertex v = 0; v < n; ++v)
        for (int l = 0; l < lg.num_labels; ++l)
          if (rng.bernoulli(0.3)) lg.labeling[static_cast<std::size_t>(v)].insert(l);
      int nt = 1 + static_cast<int>(rng.below(3)), m = 1 + static_cast<int>(rng.below(2));
      VertexSet terms;
      for (Vertex v = 0; v < nt; ++v) terms.push_back(v);
      auto all = lg.graph.vertices();
      ++r.cases;
      auto classes = enumerate_characteristics(lg, terms, all, m, c.ceiling_enum);
      auto bound = kappa_bound(static_cast<std::uint64_t>(nt), static_cast<std::uint64_t>(m),
                               static_cast<std::uint64_t>(lg.num_labels));
      if (classes.size() > bound)
        r.fail(dump_graph(lg.graph, "classes=" + std::to_string(classes.size()) + " bound=" + std::to_string(bound)));
    }
    return r;
  }

  Report or_equivalence() {
    Report r("or-equivalence");
    Rng rng(c.seed ^ 0x6f72ULL);
    auto draw = [&](int n, int m) {
      std::vector<VertexPair> all;
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) all.push_back({u, v});
      rng.shuffle(all);
      Graph g(n);
      for (int e = 0; e < m; ++e) g.add_edge(all[static_cast<std::size_t>(e)].first, all[static_cast<std::size_t>(e)].second);
      return g;
    };
    using Compose = CompositionOutput (*)(const std::vector<GraphBudget>&);
    struct Kind {
      const char* name;
      Compose fn;
      bool vc, weighted;
      int n, m;
      std::int64_t ell;
    };
    const Kind kinds[] = {{"outerplanar", compose_outerplanar, true, false, 4, 3, 1},
                          {"cluster", compose_cluster, false, false, 4, 4, 0},
                          {"cocluster", compose_cocluster, false, false, 4, 4, 0},
                          {"weighted-vc", compose_weighted_vc, false, true, 4, 4, 0}};
    for (auto& k : kinds)
      for (int i = 0; i < 6; ++i) {
        std::vector<GraphBudget> in{{draw(k.n, k.m), k.ell}, {draw(k.n, k.m), k.ell}};
        bool want = false;
        for (auto& x : in)
          want |= (k.vc ? solve_vertex_cover(x.graph, x.budget, lim) : solve_oct(x.graph, x.budget, lim)).has_value();
        auto out = k.fn(in);
        ++r.cases;
        auto& g = out.instance.graph;
        bool got = (k.weighted ? solve_weighted_oct(g, out.instance.budget, lim) : solve_oct(g, out.instance.budget, lim))
                       .has_value();
        if (validate_composition(out) || got != want) {
          std::string w = std::string("# ") + k.name + ": inputs " + (want ? "YES" : "NO") + ", composed " +
                          (got ? "YES" : "NO") + "\n";
          for (auto& x : in) w += format_instance(InstanceFile{x.graph, {}, {}, std::nullopt, x.budget});
          r.fail(w);
        }
      }
    return r;
  }
};

}  // namespace

int cmd_verify(const Common& c, const VerifyArgs& a) {
  Suite s{c, a, {}, {}, {}};
  s.lim.max_nodes = c.ceiling_solver;
  s.load();
  std::vector<std::function<Report()>> checks{
      [&] { return s.equivalence(); }, [&] { return s.ledger(); },    [&] { return s.menger(); },
      [&] { return s.important(); },   [&] { return s.kappa(); },     [&] { return s.or_equivalence(); },
  };
  int failed = 0;
  for (auto& run : checks) {
    Report r = run();
    bool pass = r.failures == 0;
    failed += !pass;
    std::cout << "check=" << r.name << " status=" << (pass ? "pass" : "fail") << " cases=" << r.cases
              << " failures=" << r.failures << "\n";
    for (auto& w : r.witnesses) std::cout << "witness check=" << r.name << "\n" << w << "end witness\n";
  }
  std::cout << "summary status=" << (failed ? "fail" : "pass") << " checks=" << checks.size() << " failed=" << failed
            << " seed=" << c.seed << "\n";
  return kOk;
}

}  // namespace cli
