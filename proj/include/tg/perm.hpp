#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tg {

/// Permutation of {0, ..., n-1} acting on the right: x^(p*q) = (x^p)^q.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t n);
  explicit Perm(std::vector<std::uint32_t> images);

  /// Builds a permutation from disjoint cycles given with 0-based points.
  static Perm from_cycles(std::size_t n, const std::vector<std::vector<std::uint32_t>>& cycles);

  std::size_t degree() const { return img_.size(); }
  std::uint32_t operator[](std::uint32_t x) const { return img_[x]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  bool is_identity() const;
  Perm inverse() const;
  Perm pow(long long k) const;

  /// Order as lcm of cycle lengths; throws tg::ResourceBound on 64-bit overflow.
  std::uint64_t order() const;

  /// Disjoint cycles of length at least two, each starting at its smallest point.
  std::vector<std::vector<std::uint32_t>> cycles() const;
  /// Cycle lengths sorted ascending, fixed points included.
  std::vector<std::uint32_t> cycle_type() const;

  /// Cycle notation with 1-based points, "()" for the identity.
  std::string to_string() const;

  Perm& operator*=(const Perm& q);
  friend Perm operator*(const Perm& p, const Perm& q);
  friend bool operator==(const Perm& p, const Perm& q) { return p.img_ == q.img_; }
  friend bool operator<(const Perm& p, const Perm& q) { return p.img_ < q.img_; }

  std::size_t hash() const;

 private:
  std::vector<std::uint32_t> img_;
};

/// Closure of a set of permutations under products; throws tg::ResourceBound past cap.
std::vector<Perm> perm_closure(const std::vector<Perm>& gens, std::size_t degree, std::size_t cap = 100000);

/// True if the group generated by gens has a single orbit on {0, ..., degree-1}.
bool is_transitive(const std::vector<Perm>& gens, std::size_t degree);

}  // namespace tg

template <>
struct std::hash<tg::Perm> {
  std::size_t operator()(const tg::Perm& p) const noexcept { return p.hash(); }
};
