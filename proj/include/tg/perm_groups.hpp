#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "tg/perm.hpp"

namespace tg {

using BigInt = boost::multiprecision::cpp_int;

/// Deterministic Schreier-Sims stabilizer chain.
class StabChain {
 public:
  /// base_prefix fixes the first base points; further points are taken in increasing order.
  StabChain(std::vector<Perm> gens, std::size_t degree, std::vector<std::uint32_t> base_prefix = {});

  std::size_t degree() const { return degree_; }
  const std::vector<std::uint32_t>& base() const { return base_; }
  BigInt order() const;
  bool contains(const Perm& p) const;
  /// Strong generators of the pointwise stabilizer of the first depth base points.
  std::vector<Perm> stabilizer_generators(std::size_t depth) const;
  std::size_t orbit_size(std::size_t depth) const { return levels_.at(depth).orbit.size(); }

 private:
  struct Level {
    std::uint32_t point;
    std::vector<Perm> gens;                 // strong generators fixing earlier base points
    std::vector<std::uint32_t> orbit;
    std::vector<std::optional<Perm>> transversal;  // point -> element mapping base point there
  };
  void rebuild_orbit(Level& l) const;
  std::pair<Perm, std::size_t> strip(const Perm& p) const;

  std::size_t degree_;
  std::vector<std::uint32_t> base_;
  std::vector<Level> levels_;
};

/// Subgroup of the iterated wreath product of the cyclic group C_p acting on
/// level n of the p-regular tree, given by a polycyclic generating sequence
/// adapted to the level filtration: the elements at layer i fix level i and
/// their exponent vectors on level i form an echelon basis.
class PcGroup {
 public:
  /// nullopt unless every vertex permutation of every generator is a power of (0 1 ... p-1).
  static std::optional<PcGroup> build(const std::vector<Perm>& gens, int p, std::size_t n);

  int prime() const { return p_; }
  std::size_t level() const { return n_; }
  std::size_t degree() const { return degree_; }

  /// log_p of the order.
  std::size_t exponent() const;
  BigInt order() const;
  /// Dimension of the layer-i subspace.
  std::size_t layer_rank(std::size_t i) const { return layers_.at(i).size(); }
  bool contains(const Perm& g) const;
  /// The polycyclic sequence, layer by layer.
  std::vector<Perm> pcgs() const;

  PcGroup subgroup(const std::vector<Perm>& gens) const;
  /// Closure of gens under conjugation by the given elements.
  PcGroup normal_closure(const std::vector<Perm>& gens, const std::vector<Perm>& by) const;
  PcGroup stabilizer(std::uint32_t point) const;
  /// Pointwise stabilizer of a set of points.
  PcGroup pointwise_stabilizer(const std::vector<std::uint32_t>& points) const;
  /// Orbits on the points, each sorted, ordered by least element.
  std::vector<std::vector<std::uint32_t>> orbits() const;

 private:
  PcGroup(int p, std::size_t n);
  std::vector<std::uint8_t> layer_vector(const Perm& g, std::size_t i) const;
  // Sifts g; adds a new pcgs element if g is outside, returning it.
  std::optional<Perm> sift(Perm g, bool add);
  void close(std::vector<Perm> pending, const std::vector<Perm>& conjugators = {});

  struct Elem {
    std::size_t pivot;
    std::vector<std::uint8_t> vec;
    Perm g, inv;
  };
  int p_;
  std::size_t n_;
  std::size_t degree_;
  std::vector<std::vector<Elem>> layers_;  // sorted by pivot
};

}  // namespace tg
