#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tg/group.hpp"

namespace tg {

/// Schreier graph of the level-n vertices. Each label carries the permutation
/// of the vertices it induces; involutions are drawn as undirected edges.
struct SchreierGraph {
  std::size_t level = 0;
  std::size_t arity = 2;  // regular trees only
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint32_t>> perms;  // perms[s][v] = v^s
  std::vector<bool> involution;
  std::uint32_t basepoint = 0;

  std::size_t vertex_count() const { return perms.empty() ? 0 : perms[0].size(); }
  std::string vertex_name(std::uint32_t v) const;
  /// Same labels and the same permutation for every label.
  friend bool operator==(const SchreierGraph& x, const SchreierGraph& y) {
    return x.level == y.level && x.arity == y.arity && x.labels == y.labels && x.perms == y.perms &&
           x.basepoint == y.basepoint;
  }
};

/// Direct construction from the action of the named generators on level n.
/// The basepoint is the rightmost vertex (m m ... m).
SchreierGraph schreier_graph(const Group& g, std::size_t n, bool parallel = true);

/// One piece of the right-hand side of a substitution rule. For a cycle
/// (v_0, ..., v_{L-1}) of the matched label, and every j, it adds the edge
/// from_letter v_{j+from_offset} --label--> to_letter v_{j+to_offset}.
struct RulePiece {
  std::string label;
  int from_letter = 0;
  int from_offset = 0;
  int to_letter = 0;
  int to_offset = 0;
};

/// Replacement for every cycle of one label in the current graph.
struct SubstitutionRule {
  std::string match;
  std::size_t cycle_length = 0;  // 0 matches any length
  std::vector<RulePiece> pieces;
};

/// Substitutional graph: an axiom at level 1 and a rule per label. Vertices
/// of G_n are included in G_{n+1} by prepending the inclusion letter.
struct SubstitutionSystem {
  std::string name;
  std::size_t arity = 2;
  std::vector<std::string> labels;
  std::vector<bool> involution;
  std::vector<std::vector<std::uint32_t>> axiom;  // level-1 permutation per label
  int inclusion_letter = 0;
  std::vector<SubstitutionRule> rules;
};

/// Built-in systems: "Gg", "FGg", "BGg", "GSg".
SubstitutionSystem substitution_system(const std::string& name);
/// Graph after the given number of expansion steps of the level-1 axiom.
SchreierGraph substitutional_expand(const SubstitutionSystem& sys, std::size_t steps);
/// The level-n graph of the system (n >= 1).
SchreierGraph substitutional_graph(const SubstitutionSystem& sys, std::size_t n);

struct GraphGrowth {
  std::uint32_t diameter = 0;
  std::vector<std::uint64_t> series;  // series[k] = vertices at distance k from the basepoint
};
GraphGrowth graph_growth(const SchreierGraph& g, bool parallel = true);

/// Coefficients of prod_{i<n} (1 + c X^{2^i}).
std::vector<std::uint64_t> binary_growth_polynomial(std::size_t n, std::uint64_t c);

void write_dot(std::ostream& os, const SchreierGraph& g);

}  // namespace tg
