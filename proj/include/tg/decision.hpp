#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tg/group.hpp"

namespace tg {

/// Self-similarity witness for an element of infinite order.
///
/// With g the queried word: section(g^descent_power, descent_vertex) equals
/// descent_conj^-1 h descent_conj, and section(h^power, vertex) equals
/// conj^-1 h^sign conj, where vertex is fixed by h^power and power >= 2.
struct InfiniteCertificate {
  Word h;
  std::size_t h_layer = 0;
  std::uint64_t descent_power = 1;
  Vertex descent_vertex;
  Word descent_conj;
  std::uint64_t power = 0;
  Vertex vertex;
  int sign = 1;
  Word conj;
};

struct OrderResult {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  std::uint64_t order = 0;  // Finite only
  std::optional<InfiniteCertificate> certificate;
  std::string note;
  bool finite() const { return kind == Kind::Finite; }
  bool infinite() const { return kind == Kind::Infinite; }
};

/// Word-problem and order oracle for one group, memoised by reduced word.
class Decider {
 public:
  explicit Decider(const Group& g, std::size_t visit_cap = 1u << 20);

  const Group& group() const { return g_; }

  /// Recursion on first-level section words; a word whose section closure
  /// revisits only words with trivial root permutations is trivial.
  bool is_trivial(const Word& w, std::size_t layer = 0);
  bool equal(const Word& x, const Word& y, std::size_t layer = 0);

  /// Pruned period decomposition. bound caps the number of recursion nodes.
  OrderResult order(const Word& w, std::size_t bound = 4096);

  /// Checks a certificate against the automaton representation.
  bool verify(const Word& g, const InfiniteCertificate& c) const;

  void clear();

 private:
  struct Key {
    std::size_t layer;
    Word w;
    friend bool operator<(const Key& a, const Key& b) {
      return a.layer != b.layer ? a.layer < b.layer : a.w < b.w;
    }
  };
  bool trivial_rec(std::size_t layer, const Word& w, std::map<Key, char>& open, std::map<Key, bool>& tentative,
                   std::size_t& visits);

  const Group& g_;
  std::size_t cap_;
  std::mutex mu_;
  std::map<Key, bool> trivial_memo_;
};

/// Exact triviality through the minimal automaton of the product.
bool is_trivial_automaton(const Group& g, const Word& w, std::size_t layer = 0);

/// Conjugate (c^-1 w c) that is cyclically reduced and the least rotation; returns c.
std::pair<Word, Word> normalize_conjugate(const Group& g, const Word& w, std::size_t layer = 0);

/// Shortest-word representatives of the ball of given radius over the generating set,
/// in breadth-first order; sphere_sizes[i] counts elements of length exactly i.
struct Ball {
  std::vector<Word> elements;
  std::vector<StateId> states;
  std::vector<std::size_t> sphere_sizes;
};
Ball ball(const Group& g, std::size_t radius, std::size_t cap = 1u << 22);

/// Largest finite order over the ball; elements of infinite or unknown order are skipped.
std::uint64_t torsion_growth(const Group& g, std::size_t radius);

struct EtaWeights {
  double eta = 0;
  std::vector<double> tau;  // tau[0..r]
};
EtaWeights eta_weights(int r);

/// Minimal weighted word length of every element up to max_weight (Dijkstra over
/// the Cayley graph); weights are indexed like Group::generating_set().
std::unordered_map<StateId, double> weighted_norms(const Group& g, const std::vector<double>& weights,
                                                   double max_weight);

/// Reduced section words on level r of the iterated decomposition, lexicographic order;
/// nullopt if some root permutation above level r is nontrivial.
std::optional<std::vector<Word>> level_sections(const Group& g, const Word& w, std::size_t r);

struct SectionWord {
  std::size_t layer = 0;
  Word word;
};
/// Word portrait: depth-limited, or canonical (stop at words of length <= 1) when depth is 0.
Portrait<SectionWord> word_portrait(const Group& g, const Word& w, std::size_t depth, std::size_t node_cap = 1u << 20);
std::size_t canonical_portrait_depth(const Group& g, const Word& w);

}  // namespace tg
