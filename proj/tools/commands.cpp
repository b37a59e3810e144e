#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "octk/errors.hpp"
#include "octk/generators.hpp"
#include "octk/instance_io.hpp"
#include "octk/kernel.hpp"
#include "octk/solvers.hpp"

namespace cli {

using namespace octk;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

SolverLimits limits(const Common& c) {
  SolverLimits lim;
  lim.max_nodes = c.ceiling_solver;
  return lim;
}

}  // namespace

int cmd_kernelize(const Common& c, const KernelizeArgs& a) {
  auto f = read_instance_file(a.input);
  if (f.modulator.empty()) throw PreconditionError("instance has no modulator (no x lines)");
  if (!f.mono.empty() || f.deletable) throw PreconditionError("kernelize takes plain instances (no m or z lines)");
  if (!f.budget) throw PreconditionError("instance has no budget (no l line)");
  if (f.graph.has_nonunit_weights()) throw PreconditionError("kernelize takes unweighted instances");
  KernelOptions opts;
  opts.enum_ceiling = c.ceiling_enum;
  auto r = kernelize(oct_from_file(f), a.w, opts);
  emit(a.output, format_instance(to_file(r.instance)));
  if (a.trace == "-")
    std::cerr << format_trace(r.trace);
  else if (!a.trace.empty())
    emit(a.trace, format_trace(r.trace));
  return kOk;
}

int cmd_solve(const Common& c, const SolveArgs& a) {
  auto f = read_instance_file(a.input);
  // without an l line the optimum is reported
  std::int64_t budget = f.budget.value_or(std::numeric_limits<std::int64_t>::max() / 16);
  std::optional<Solution> s;
  if (f.deletable) {
    auto r = restricted_from_file(f);
    r.base.budget = budget;
    s = solve_restricted(r, limits(c));
  } else if (!f.mono.empty()) {
    auto r = annotated_from_file(f);
    r.budget = budget;
    s = solve_annotated(r, limits(c));
  } else if (f.graph.has_nonunit_weights()) {
    s = solve_weighted_oct(f.graph, budget, limits(c));
  } else {
    s = solve_oct(f.graph, budget, limits(c));
  }
  if (!s) {
    std::cout << "NO\n";
    return kOk;
  }
  std::cout << "YES " << s->cost;
  for (Vertex v : s->deleted) std::cout << ' ' << v;
  std::cout << '\n';
  return kOk;
}

namespace {

std::vector<GraphBudget> composition_inputs(const Common& c, const GenerateArgs& a) {
  std::vector<GraphBudget> in;
  for (auto& path : a.inputs) {
    auto f = read_instance_file(path);
    if (!f.budget) throw PreconditionError(path + ": composition inputs need an l line");
    in.push_back({f.graph, *f.budget});
  }
  if (!in.empty()) return in;
  // draw a.count graphs with a.n vertices and a.edges edges
  Rng rng(c.seed);
  const int n = a.n;
  if (a.edges > n * (n - 1) / 2) throw PreconditionError("more edges than vertex pairs");
  for (int i = 0; i < a.count; ++i) {
    std::vector<VertexPair> all;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) all.push_back({u, v});
    rng.shuffle(all);
    Graph g(n);
    for (int e = 0; e < a.edges; ++e) g.add_edge(all[static_cast<std::size_t>(e)].first, all[static_cast<std::size_t>(e)].second);
    in.push_back({std::move(g), a.budget.value_or(0)});
  }
  return in;
}

}  // namespace

int cmd_generate(const Common& c, const GenerateArgs& a) {
  if (a.kind == "random") {
    if (!a.inputs.empty()) throw UsageError("generate random takes no input files");
    RandomSpec spec;
    spec.n = a.n;
    spec.edge_prob = a.p;
    spec.w = a.w;
    spec.modulator_size = a.modulator;
    spec.strategy = a.strategy == "computed" ? ModulatorStrategy::computed : ModulatorStrategy::planted;
    spec.budget = a.budget;
    emit(a.output, format_instance(to_file(random_instance(c.seed, spec))));
    return kOk;
  }
  auto in = composition_inputs(c, a);
  CompositionOutput out;
  if (a.kind == "outerplanar")
    out = compose_outerplanar(in);
  else if (a.kind == "cluster")
    out = compose_cluster(in);
  else if (a.kind == "cocluster")
    out = compose_cocluster(in);
  else
    out = compose_weighted_vc(in);
  if (auto bad = validate_composition(out)) throw std::runtime_error("composition failed validation: " + *bad);
  emit(a.output, format_instance(to_file(out.instance)));

  nlohmann::ordered_json side;
  side["composition"] = a.kind;
  side["class"] = class_name(out.cls);
  side["inputs"] = in.size();
  side["padded_inputs"] = out.padded_count;
  side["budget"] = out.instance.budget;
  side["parameter"] = out.declared_parameter;
  side["vertices"] = out.instance.graph.num_vertices();
  side["edges"] = out.instance.graph.num_edges();
  side["modulator_roles"] = out.modulator_roles;
  side["roles"] = nlohmann::ordered_json::object();
  for (auto& [name, vs] : out.roles) side["roles"][name] = vs;
  side["seed"] = a.inputs.empty() ? nlohmann::ordered_json(c.seed) : nlohmann::ordered_json(nullptr);
  std::string text = side.dump(2) + "\n";
  if (a.output.empty() || a.output == "-")
    std::cerr << text;
  else
    emit(a.output + ".json", text);
  return kOk;
}

}  // namespace cli
