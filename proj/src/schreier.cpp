#include "tg/schreier.hpp"

#include <ostream>

#include "tg/errors.hpp"
#include "tg/kernels.hpp"

namespace tg {

std::string SchreierGraph::vertex_name(std::uint32_t v) const {
  std::string out(level, '1');
  for (std::size_t i = level; i-- > 0;) {
    out[i] = static_cast<char>('1' + v % arity);
    v /= static_cast<std::uint32_t>(arity);
  }
  return out;
}

SchreierGraph schreier_graph(const Group& g, std::size_t n, bool parallel) {
  if (!g.shape().is_regular()) throw ValidationError("Schreier graphs are built for regular trees");
  SchreierGraph out;
  out.level = n;
  out.arity = static_cast<std::size_t>(g.shape().arity(0));
  const Layer& l = g.layer(0);
  std::vector<std::uint32_t> named;
  for (auto s : g.generating_set())
    if (l.symbols[s].named) named.push_back(s);
  for (auto s : named) {
    const Symbol& sym = l.symbols[s];
    out.labels.push_back(sym.name);
    out.perms.push_back(parallel ? kernels::level_permutation_parallel(g.pool(), sym.state, n)
                                 : kernels::level_permutation_serial(g.pool(), sym.state, n));
    out.involution.push_back(sym.inverse == s);
  }
  out.basepoint = static_cast<std::uint32_t>(out.vertex_count() - 1);
  return out;
}

// ---------------------------------------------------------------- substitution

namespace {

std::vector<std::uint32_t> cycle_perm(std::size_t m, int step) {
  std::vector<std::uint32_t> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = static_cast<std::uint32_t>((i + m + step) % m);
  return p;
}

std::vector<std::uint32_t> identity_perm(std::size_t m) { return cycle_perm(m, 0); }

}  // namespace

SubstitutionSystem substitution_system(const std::string& name) {
  SubstitutionSystem s;
  s.name = name;
  if (name == "Gg") {
    s.arity = 2;
    s.labels = {"a", "b", "c", "d"};
    s.involution = {true, true, true, true};
    s.axiom = {cycle_perm(2, 1), identity_perm(2), identity_perm(2), identity_perm(2)};
    s.inclusion_letter = 1;
    // an a-edge {s,t} becomes 2s -a- 1s -b,c- 1t -a- 2t with d-loops at 1s, 1t
    s.rules.push_back({"a", 2,
                       {{"a", 1, 0, 0, 0},
                        {"a", 0, 0, 1, 0},
                        {"b", 0, 0, 0, 1},
                        {"c", 0, 0, 0, 1},
                        {"d", 0, 0, 0, 0}}});
    s.rules.push_back({"b", 0, {{"d", 1, 0, 1, 1}}});
    s.rules.push_back({"c", 0, {{"b", 1, 0, 1, 1}}});
    s.rules.push_back({"d", 0, {{"c", 1, 0, 1, 1}}});
    return s;
  }
  if (name == "FGg" || name == "BGg" || name == "GSg") {
    s.arity = 3;
    s.labels = {"a", "t"};
    s.involution = {false, false};
    s.axiom = {cycle_perm(3, 1), identity_perm(3)};
    s.inclusion_letter = 2;
    // an a-triangle (r, s, t) becomes three a-triangles joined by t-edges
    SubstitutionRule tri{"a", 3, {{"a", 0, 0, 1, 0}, {"a", 1, 0, 2, 0}, {"a", 2, 0, 0, 0}, {"t", 0, 0, 0, 1}}};
    if (name == "FGg") tri.pieces.push_back({"t", 1, 0, 1, 0});
    if (name == "BGg") tri.pieces.push_back({"t", 1, 0, 1, 1});
    if (name == "GSg") tri.pieces.push_back({"t", 1, 0, 1, -1});
    s.rules.push_back(tri);
    s.rules.push_back({"t", 0, {{"t", 2, 0, 2, 1}}});
    return s;
  }
  throw ValidationError("no substitution rules for '" + name + "'");
}

SchreierGraph substitutional_expand(const SubstitutionSystem& sys, std::size_t steps) {
  SchreierGraph g;
  g.level = 1;
  g.arity = sys.arity;
  g.labels = sys.labels;
  g.involution = sys.involution;
  g.perms = sys.axiom;
  g.basepoint = static_cast<std::uint32_t>(sys.inclusion_letter);
  const std::size_t m = sys.arity;
  auto label_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < sys.labels.size(); ++i)
      if (sys.labels[i] == name) return i;
    throw ValidationError("unknown label '" + name + "' in substitution rules");
  };

  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t nv = g.vertex_count();
    const std::size_t big = nv * m;
    const std::uint32_t unset = UINT32_MAX;
    std::vector<std::vector<std::uint32_t>> next(sys.labels.size(), std::vector<std::uint32_t>(big, unset));
    auto vertex = [&](int letter, std::uint32_t v) { return static_cast<std::uint32_t>(letter * nv + v); };

    for (std::size_t li = 0; li < sys.labels.size(); ++li) {
      const auto& perm = g.perms[li];
      std::vector<char> seen(nv, 0);
      for (std::uint32_t v0 = 0; v0 < nv; ++v0) {
        if (seen[v0]) continue;
        std::vector<std::uint32_t> cyc;
        for (std::uint32_t v = v0; !seen[v]; v = perm[v]) {
          seen[v] = 1;
          cyc.push_back(v);
        }
        const SubstitutionRule* rule = nullptr;
        for (const auto& r : sys.rules)
          if (r.match == sys.labels[li] && (r.cycle_length == 0 || r.cycle_length == cyc.size())) rule = &r;
        if (!rule) throw ValidationError("no rule for a " + sys.labels[li] + "-cycle of length " + std::to_string(cyc.size()));
        const auto len = static_cast<int>(cyc.size());
        for (int j = 0; j < len; ++j)
          for (const auto& piece : rule->pieces) {
            auto from = vertex(piece.from_letter, cyc[((j + piece.from_offset) % len + len) % len]);
            auto to = vertex(piece.to_letter, cyc[((j + piece.to_offset) % len + len) % len]);
            auto& slot = next[label_index(piece.label)][from];
            if (slot != unset && slot != to) throw ValidationError("substitution rules overlap");
            slot = to;
          }
      }
    }
    for (const auto& p : next)
      for (auto x : p)
        if (x == unset) throw ValidationError("substitution rules leave a vertex without an edge");
    g.perms = std::move(next);
    g.level += 1;
    g.basepoint = vertex(sys.inclusion_letter, g.basepoint);
  }
  return g;
}

SchreierGraph substitutional_graph(const SubstitutionSystem& sys, std::size_t n) {
  if (n == 0) throw ValidationError("substitution systems start at level 1");
  return substitutional_expand(sys, n - 1);
}

// ---------------------------------------------------------------- growth

GraphGrowth graph_growth(const SchreierGraph& g, bool parallel) {
  auto adj = kernels::adjacency_from_tables(g.perms);
  GraphGrowth out;
  if (g.vertex_count() == 0) return out;
  auto dist = kernels::bfs_distances(adj, g.basepoint);
  for (auto d : dist) {
    if (d == UINT32_MAX) continue;
    if (out.series.size() <= d) out.series.resize(d + 1, 0);
    ++out.series[d];
  }
  out.diameter = parallel ? kernels::diameter_parallel(adj) : kernels::diameter_serial(adj);
  return out;
}

std::vector<std::uint64_t> binary_growth_polynomial(std::size_t n, std::uint64_t c) {
  std::vector<std::uint64_t> poly{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t shift = std::size_t(1) << i;
    std::vector<std::uint64_t> next(poly.size() + shift, 0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + shift] += c * poly[k];
    }
    poly = std::move(next);
  }
  return poly;
}

void write_dot(std::ostream& os, const SchreierGraph& g) {
  os << "graph schreier {\n";
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    os << "  \"" << g.vertex_name(v) << "\"";
    if (v == g.basepoint) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (std::size_t s = 0; s < g.labels.size(); ++s)
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      std::uint32_t w = g.perms[s][v];
      if (g.involution[s] && w < v) continue;
      os << "  \"" << g.vertex_name(v) << "\" -- \"" << g.vertex_name(w) << "\" [label=" << g.labels[s];
      if (!g.involution[s]) os << ", dir=forward";
      os << "];\n";
    }
  os << "}\n";
}

}  // namespace tg
