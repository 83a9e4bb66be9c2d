#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tg/perm.hpp"
#include "tg/tree.hpp"
#include "tg/word_io.hpp"

namespace tg {

enum class Flavor { SpinalTriple, GGSequence, GGSVector, ExplicitRecursion };
const char* flavor_name(Flavor f);

/// Section entry of a recursive generator: gen^power, or the identity when gen is empty.
struct Entry {
  std::string gen;
  int power = 1;
  friend bool operator==(const Entry&, const Entry&) = default;
};

struct GenSpec {
  std::string name;
  bool recursive = false;
  Perm root;              // rooted permutation, or the root of a recursive generator
  std::string root_name;  // rooted generator named after the tuple, if any
  std::vector<Entry> entries;
  friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

/// Generators living on one phase of the defining data.
struct LayerSpec {
  int phase = 0;
  std::vector<GenSpec> gens;
  /// Optional grouping of recursive generators into finite families; empty means auto-detect.
  std::vector<std::vector<std::string>> families;
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Complete description of a self-similar group by wreath recursion.
struct GroupSpec {
  std::string name;
  TreeShape shape = TreeShape::regular(2);
  Flavor flavor = Flavor::ExplicitRecursion;
  std::vector<LayerSpec> layers;
  std::vector<std::uint32_t> next_layer;
  /// Generating set at layer 0; empty means every layer-0 generator.
  std::vector<std::string> generators;
  int prime = 0;  // 0: derive from the level-1 image
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

enum class FamilyKind { Rooted, Directed, Cyclic, Free };

/// A finite subgroup (rooted or directed) inside which adjacent letters merge,
/// or a free letter pair.
struct Family {
  FamilyKind kind = FamilyKind::Free;
  std::vector<StateId> elements;              // element 0 is the identity
  std::vector<std::uint32_t> symbol;          // element -> symbol id (element 0 unused)
  std::vector<std::vector<std::uint32_t>> table;  // element product, finite kinds only
  bool finite() const { return kind != FamilyKind::Free; }
};

struct Symbol {
  std::string name;
  StateId state = 0;
  std::uint32_t family = 0;
  std::uint32_t element = 0;  // for Free: 1 = generator, 2 = inverse
  std::uint32_t inverse = 0;
  bool named = false;
  Perm root;
  FreeWord spelling;               // over the named generators of the layer
  std::vector<std::vector<std::uint32_t>> sections;  // reduced words of the next layer
};

using Word = std::vector<std::uint32_t>;

struct Layer {
  int phase = 0;
  std::uint32_t next = 0;
  std::vector<Symbol> symbols;
  std::vector<Family> families;
  std::vector<std::string> named_names;   // named generators in declaration order
  std::vector<std::uint32_t> named;       // their symbol ids
  std::unordered_map<std::string, std::uint32_t> by_name;
  std::unordered_map<StateId, std::uint32_t> by_state;
};

/// Returns the process-wide state pool for a tree shape.
std::shared_ptr<StatePool> pool_for(const TreeShape& shape);

class Group {
 public:
  explicit Group(GroupSpec spec);

  const std::string& name() const { return spec_.name; }
  const GroupSpec& spec() const { return spec_; }
  Flavor flavor() const { return spec_.flavor; }
  int prime() const { return prime_; }
  const TreeShape& shape() const { return pool_->shape(); }
  StatePool& pool() const { return *pool_; }

  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t k = 0) const { return layers_.at(k); }

  std::uint32_t symbol(const std::string& name, std::size_t layer = 0) const;
  StateId state(const std::string& name, std::size_t layer = 0) const;

  /// Named generators of the generating set plus their inverses (duplicates dropped), layer 0.
  const std::vector<std::uint32_t>& generating_set() const { return gen_set_; }
  std::vector<StateId> generating_states() const;
  /// True if every layer is one rooted family plus one directed family.
  bool is_spinal() const { return spinal_; }

  Word reduce(const Word& w, std::size_t layer = 0) const;
  Word cyclic_reduce(const Word& w, std::size_t layer = 0) const;
  Word inverse(const Word& w, std::size_t layer = 0) const;
  Word concat(const Word& x, const Word& y, std::size_t layer = 0) const;
  Word power(const Word& w, long long k, std::size_t layer = 0) const;
  Word conjugate(const Word& w, const Word& by, std::size_t layer = 0) const;

  Word parse(const std::string& text, std::size_t layer = 0) const;
  Word from_free(const FreeWord& w, std::size_t layer = 0) const;
  FreeWord spell(const Word& w, std::size_t layer = 0) const;
  std::string format(const Word& w, std::size_t layer = 0) const;

  StateId eval(const Word& w, std::size_t layer = 0) const;
  Perm root_perm(const Word& w, std::size_t layer = 0) const;

  struct Decomposition {
    Perm root;
    std::vector<Word> sections;  // reduced, in layer(next)
    std::size_t next_layer = 0;
  };
  Decomposition decompose(const Word& w, std::size_t layer = 0) const;

  /// Section word at a vertex, following layers.
  Word section_word(const Word& w, const Vertex& u, std::size_t layer = 0) const;

 private:
  void build_states();
  void build_families(std::size_t k);
  void build_sections();

  GroupSpec spec_;
  std::shared_ptr<StatePool> pool_;
  std::vector<Layer> layers_;
  std::vector<std::unordered_map<std::string, StateId>> gen_states_;
  std::vector<std::uint32_t> gen_set_;
  int prime_ = 0;
  bool spinal_ = false;
};

// ---------------------------------------------------------------- constructors

/// Defining triple over an eventually periodic tree.
struct DefiningTriple {
  TreeShape shape = TreeShape::regular(2);
  /// Generators of A at each phase of the shape.
  std::vector<std::vector<Perm>> a_gens;
  /// B as a multiplication table on named elements; element 0 is the identity.
  std::vector<std::string> b_names;
  std::vector<std::vector<std::uint32_t>> b_table;
  /// Generators of B by index, used as the directed generators.
  std::vector<std::uint32_t> b_gens;
  /// omega[level][j][b] for level in prefix+cycle, child j = 0..m-2.
  std::vector<std::vector<std::vector<Perm>>> omega;
  std::size_t omega_prefix = 0;
  std::string name = "spinal";
};

Group from_triple(const DefiningTriple& t);

/// GGS group: a = (1 2 ... m), t = (a^e1, ..., a^e_{m-1}, t).
Group from_ggs(int m, const std::vector<int>& e, const std::string& name = "", const std::string& directed = "t");

/// Grigorchuk 2-group over a sequence in {0,1,2}: prefix then repeating cycle.
Group grigorchuk_2group(const std::string& cycle, const std::string& prefix = "", const std::string& name = "");

Group gupta_sidki(int p);

/// Torsion criterion for GGS vectors over m = p^n.
bool is_ggs_torsion(int m, const std::vector<int>& e);

/// Names: Gg, G2, FGg, BGg, GSg, Sg, BSV, Dinf, GS3, GS5.
Group builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace tg
