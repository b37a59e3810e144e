#include "octk/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "octk/errors.hpp"
#include "octk/instances.hpp"

namespace octk {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view tok, int line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "bad number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

InstanceFile parse_instance(std::string_view text) {
  InstanceFile inst;
  bool have_header = false;
  std::int64_t n = 0, m = 0;
  std::set<VertexPair> mono;
  std::set<Vertex> modulator, deletable;
  bool any_z = false;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    auto vertex = [&](std::string_view t) {
      auto v = to_int(t, lineno);
      if (v < 0 || v >= n) throw ParseError(lineno, "vertex " + std::string(t) + " out of range");
      return static_cast<Vertex>(v);
    };
    auto arity = [&](std::size_t k) {
      if (tok.size() != k + 1) throw ParseError(lineno, "directive '" + std::string(tok[0]) + "' expects " + std::to_string(k) + " arguments");
    };
    const std::string_view d = tok[0];
    if (d == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header");
      arity(3);
      if (tok[1] != "oct") throw ParseError(lineno, "unknown problem '" + std::string(tok[1]) + "'");
      n = to_int(tok[2], lineno);
      m = to_int(tok[3], lineno);
      if (n < 0 || m < 0 || n > (1 << 28)) throw ParseError(lineno, "bad header sizes");
      inst.graph = Graph(static_cast<int>(n));
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "directive before 'p' header");
    if (d == "e") {
      arity(2);
      Vertex u = vertex(tok[1]), v = vertex(tok[2]);
      if (u == v) throw ParseError(lineno, "self-loop on " + std::to_string(u));
      if (!inst.graph.add_edge(u, v)) throw ParseError(lineno, "duplicate edge");
    } else if (d == "x") {
      arity(1);
      modulator.insert(vertex(tok[1]));
    } else if (d == "m") {
      arity(2);
      Vertex u = vertex(tok[1]), v = vertex(tok[2]);
      if (u == v) throw ParseError(lineno, "monochromatic pair needs two vertices");
      mono.insert(make_pair_sorted(u, v));
    } else if (d == "z") {
      arity(1);
      any_z = true;
      deletable.insert(vertex(tok[1]));
    } else if (d == "w") {
      arity(2);
      Vertex v = vertex(tok[1]);
      auto w = to_int(tok[2], lineno);
      if (w < 0) throw ParseError(lineno, "negative weight");
      inst.graph.set_weight(v, w);
    } else if (d == "l") {
      arity(1);
      if (inst.budget) throw ParseError(lineno, "duplicate budget");
      inst.budget = to_int(tok[1], lineno);
    } else {
      throw ParseError(lineno, "unknown directive '" + std::string(d) + "'");
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p oct' header");
  if (static_cast<std::int64_t>(inst.graph.num_edges()) != m)
    throw ParseError(lineno, "header declares " + std::to_string(m) + " edges, found " +
                                 std::to_string(inst.graph.num_edges()));
  inst.modulator.assign(modulator.begin(), modulator.end());
  inst.mono.assign(mono.begin(), mono.end());
  if (any_z) inst.deletable = VertexSet(deletable.begin(), deletable.end());
  return inst;
}

InstanceFile read_instance(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_instance(in);
}

std::string format_instance(const InstanceFile& inst) {
  const Graph& g = inst.graph;
  if (g.num_vertices() != g.id_bound()) throw PreconditionError("instance ids are not dense; compact first");
  std::ostringstream out;
  out << "p oct " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
  for (Vertex v : normalized(inst.modulator)) out << "x " << v << '\n';
  auto mono = inst.mono;
  for (auto& p : mono) p = make_pair_sorted(p.first, p.second);
  std::sort(mono.begin(), mono.end());
  mono.erase(std::unique(mono.begin(), mono.end()), mono.end());
  for (auto [u, v] : mono) out << "m " << u << ' ' << v << '\n';
  if (inst.deletable)
    for (Vertex v : normalized(*inst.deletable)) out << "z " << v << '\n';
  for (Vertex v : g.vertices())
    if (g.weight(v) != 1) out << "w " << v << ' ' << g.weight(v) << '\n';
  if (inst.budget) out << "l " << *inst.budget << '\n';
  return out.str();
}

void write_instance(std::ostream& out, const InstanceFile& inst) { out << format_instance(inst); }

void write_instance_file(const std::string& path, const InstanceFile& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_instance(out, inst);
}

std::vector<Vertex> compact_instance(InstanceFile& inst) {
  auto old_of = inst.graph.compact();
  std::vector<Vertex> new_of;
  for (std::size_t i = 0; i < old_of.size(); ++i) {
    auto o = static_cast<std::size_t>(old_of[i]);
    if (new_of.size() <= o) new_of.resize(o + 1, -1);
    new_of[o] = static_cast<Vertex>(i);
  }
  auto map = [&](Vertex v) {
    if (v < 0 || static_cast<std::size_t>(v) >= new_of.size() || new_of[static_cast<std::size_t>(v)] < 0)
      throw PreconditionError("instance references missing vertex " + std::to_string(v));
    return new_of[static_cast<std::size_t>(v)];
  };
  for (auto& v : inst.modulator) v = map(v);
  inst.modulator = normalized(inst.modulator);
  for (auto& [a, b] : inst.mono) {
    auto p = make_pair_sorted(map(a), map(b));
    a = p.first;
    b = p.second;
  }
  std::sort(inst.mono.begin(), inst.mono.end());
  if (inst.deletable) {
    for (auto& v : *inst.deletable) v = map(v);
    inst.deletable = normalized(*inst.deletable);
  }
  return old_of;
}

}  // namespace octk

namespace octk {

OctInstance canonical_yes() { return OctInstance{Graph(1), {}, 0}; }

OctInstance canonical_no() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  return OctInstance{std::move(g), {0}, 0};
}

AnnotatedInstance annotate(const OctInstance& inst) { return AnnotatedInstance{inst.graph, inst.modulator, {}, inst.budget}; }

InstanceFile to_file(const OctInstance& inst) {
  return InstanceFile{inst.graph, normalized(inst.modulator), {}, std::nullopt, inst.budget};
}

InstanceFile to_file(const AnnotatedInstance& inst) {
  return InstanceFile{inst.graph, normalized(inst.modulator), inst.mono, std::nullopt, inst.budget};
}

InstanceFile to_file(const RestrictedInstance& inst) {
  auto f = to_file(inst.base);
  f.deletable = normalized(inst.deletable);
  return f;
}

OctInstance oct_from_file(const InstanceFile& f) {
  return OctInstance{f.graph, normalized(f.modulator), f.budget.value_or(0)};
}

AnnotatedInstance annotated_from_file(const InstanceFile& f) {
  auto mono = f.mono;
  std::sort(mono.begin(), mono.end());
  return AnnotatedInstance{f.graph, normalized(f.modulator), std::move(mono), f.budget.value_or(0)};
}

RestrictedInstance restricted_from_file(const InstanceFile& f) {
  return RestrictedInstance{annotated_from_file(f), f.deletable ? normalized(*f.deletable) : f.graph.vertices()};
}

}  // namespace octk
