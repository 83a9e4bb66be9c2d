#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tg/group.hpp"
#include "tg/perm_groups.hpp"

namespace tg {

/// Subset of the 16 cosets of K = <[a,b]>^G in the first Grigorchuk group.
struct CosetSet {
  std::uint16_t bits = 0;
  static CosetSet all() { return {0xffff}; }
  bool contains(unsigned c) const { return (bits >> c) & 1u; }
  void insert(unsigned c) { bits = static_cast<std::uint16_t>(bits | (1u << c)); }
  bool empty() const { return bits == 0; }
  std::size_t size() const { return static_cast<std::size_t>(__builtin_popcount(bits)); }
  friend bool operator==(CosetSet x, CosetSet y) { return x.bits == y.bits; }
};

/// Conjugacy solver for the first Grigorchuk group via the sets
/// Q(g,h) = { Kf : g^f = h }.
class GgConjugacy {
 public:
  /// g must be the first Grigorchuk group with generators a, b, c, d.
  explicit GgConjugacy(const Group& g, std::size_t witness_radius = 10);

  const Group& group() const { return g_; }
  /// Least level n at which the image of K has index 16.
  std::size_t k_level() const { return nk_; }

  static constexpr unsigned kCosets = 16;
  unsigned coset_of(const Word& w) const;
  unsigned coset_of_perm(const Perm& level_nk) const;
  unsigned mul(unsigned x, unsigned y) const { return mul_[x][y]; }
  unsigned inv(unsigned x) const { return inv_[x]; }
  /// Shortest word in the coset; the identity coset is 0.
  const Word& coset_word(unsigned c) const { return rep_words_[c]; }
  std::string coset_name(unsigned c) const;
  std::string format(CosetSet s) const;

  /// Coset of the element of Stab(L_1) with sections in cosets (x, y), if one exists.
  std::optional<unsigned> lift(unsigned x, unsigned y) const;

  CosetSet q_set(const Word& g, const Word& h);
  bool are_conjugate(const Word& g, const Word& h) { return !q_set(g, h).empty(); }

  /// Cycles in the recursion where the witness-seeded least fixpoint and the
  /// greatest fixpoint disagreed.
  std::size_t unresolved_cycles() const { return unresolved_; }

 private:
  using Pair = std::pair<Word, Word>;
  struct Dep {
    std::size_t node;
    unsigned c, d;  // Q(dep) = c * Q(node) * d^-1
  };
  enum class Kind { Empty, Identity, Stab, Moving };
  struct Node {
    Pair key;
    Kind kind = Kind::Empty;
    std::vector<Dep> deps;  // Stab: 1a x, 1a y, 1b x, 1b y; Moving: 2a, 2b
    unsigned g1 = 0, g2 = 0, h2 = 0;  // section cosets used by the moving case
    CosetSet value;
    bool done = false;
    // Tarjan bookkeeping
    std::size_t index = 0, low = 0;
    bool on_stack = false, visited = false;
  };

  std::size_t node_for(const Pair& p);
  void visit(std::size_t v);
  void resolve_scc(const std::vector<std::size_t>& scc);
  CosetSet evaluate(const Node& n) const;
  CosetSet transform(CosetSet s, unsigned c, unsigned d) const;
  CosetSet witnesses(const Pair& p);
  bool images_conjugate(unsigned x, unsigned y) const;

  const Group& g_;
  std::size_t witness_radius_;
  std::size_t nk_ = 0;
  unsigned a_coset_ = 0;
  std::array<std::array<unsigned, kCosets>, kCosets> mul_{};
  std::array<unsigned, kCosets> inv_{};
  std::array<std::array<int, kCosets>, kCosets> lift_{};
  std::vector<Word> rep_words_;
  std::unordered_map<Perm, unsigned> coset_by_perm_;

  std::recursive_mutex mu_;
  std::map<Pair, std::size_t> index_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> stack_;
  std::size_t counter_ = 0;
  std::size_t unresolved_ = 0;
  std::vector<StateId> ball_states_;
  std::vector<Word> ball_words_;
};

}  // namespace tg
