#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tg/group.hpp"
#include "tg/perm_groups.hpp"

namespace tg {

/// Permutation group on the level-n vertices of a tree. When the group lies in
/// the iterated wreath product of C_p it is handled by a layered pc sequence,
/// otherwise by a Schreier-Sims chain.
class PermGroup {
 public:
  /// p > 0 and degree == p^level enable the pc representation when possible.
  PermGroup(std::vector<Perm> gens, std::size_t degree, int p = 0, std::size_t level = 0);

  const std::vector<Perm>& generators() const { return gens_; }
  std::size_t degree() const { return degree_; }
  bool is_pc() const { return pc_ != nullptr; }
  const PcGroup& pc() const { return *pc_; }
  int prime() const { return p_; }

  BigInt order() const;
  bool contains(const Perm& g) const;
  /// Generators that also form a pc sequence or a strong generating set.
  std::vector<Perm> strong_generators() const;

  PermGroup subgroup(const std::vector<Perm>& gens) const;
  /// Normal closure of gens under conjugation by the elements of by.
  PermGroup normal_closure(const std::vector<Perm>& gens, const std::vector<Perm>& by) const;
  PermGroup pointwise_stabilizer(const std::vector<std::uint32_t>& points) const;
  std::vector<std::vector<std::uint32_t>> orbits() const;

 private:
  PermGroup(std::vector<Perm> gens, std::size_t degree, int p, std::size_t level, std::shared_ptr<const PcGroup> pc);

  std::vector<Perm> gens_;
  std::size_t degree_;
  int p_;
  std::size_t level_;
  std::shared_ptr<const PcGroup> pc_;
  std::shared_ptr<const StabChain> chain_;
};

/// Finite quotient G_n = G / Stab_G(L_n) acting on the level-n vertices.
class LevelQuotient {
 public:
  LevelQuotient(const Group& g, std::size_t n);

  const Group& group() const { return *g_; }
  std::size_t level() const { return n_; }
  std::size_t degree() const { return perms_.degree(); }
  const PermGroup& perms() const { return perms_; }

  /// Image of a word of layer 0.
  Perm image(const Word& w) const;
  Perm image(StateId f) const;

  BigInt order() const { return perms_.order(); }
  /// Closure by enumeration; for small degrees.
  std::size_t brute_force_order(std::size_t cap = 1u << 20) const;

  /// Subgroup fixing every leaf outside the subtree at v (|v| <= n).
  PermGroup rigid_stabilizer(const Vertex& v) const;
  /// Product of the rigid stabilizers of the level-k vertices.
  PermGroup rigid_level_stabilizer(std::size_t k) const;

  /// Ranks of gamma_k / gamma_{k+1} gamma_k^p for k = 1..kmax.
  std::vector<std::size_t> lower_central_ranks(std::size_t kmax) const;
  /// Least c with gamma_{c+1} trivial.
  std::size_t nilpotency_class() const;
  /// Orders of G_n^(k) for k = 0..kmax; stops early once a term is trivial.
  std::vector<BigInt> derived_series(std::size_t kmax) const;
  PermGroup derived_subgroup() const;

  /// Orbit sizes of the stabilizer of the basepoint (rightmost vertex), ascending.
  std::vector<std::size_t> suborbit_profile() const;

  double hausdorff_ratio() const;
  double hausdorff_ratio_full() const;

 private:
  std::shared_ptr<const Group> g_;  // a copy shares the state pool
  std::size_t n_;
  PermGroup perms_;
};

LevelQuotient level_quotient(const Group& g, std::size_t n);

/// Order of the quotient of Aut(T) acting on level n: m_1! (m_2!)^{m_1} ...
BigInt full_aut_order(const TreeShape& shape, std::size_t n);
/// Order of the iterated wreath product of the cyclic groups C_{m_i} on level n.
BigInt cyclic_wreath_order(const TreeShape& shape, std::size_t n);

double log_big(const BigInt& x);
/// "p^e" when x is a power of p > 1, otherwise decimal.
std::string format_order(const BigInt& x, int p);

}  // namespace tg
