#include "tg/perm.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "tg/errors.hpp"

namespace tg {

Perm::Perm(std::size_t n) : img_(n) { std::iota(img_.begin(), img_.end(), 0u); }

Perm::Perm(std::vector<std::uint32_t> images) : img_(std::move(images)) {
  std::vector<char> seen(img_.size(), 0);
  for (auto y : img_) {
    if (y >= img_.size() || seen[y]) throw ValidationError("not a permutation");
    seen[y] = 1;
  }
}

Perm Perm::from_cycles(std::size_t n, const std::vector<std::vector<std::uint32_t>>& cycles) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0u);
  std::vector<char> used(n, 0);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= n) throw ValidationError("cycle point out of range");
      if (used[c[i]]) throw ValidationError("cycles are not disjoint");
      used[c[i]] = 1;
      img[c[i]] = c[(i + 1) % c.size()];
    }
  }
  return Perm(std::move(img));
}

bool Perm::is_identity() const {
  for (std::uint32_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

Perm Perm::inverse() const {
  std::vector<std::uint32_t> inv(img_.size());
  for (std::uint32_t i = 0; i < img_.size(); ++i) inv[img_[i]] = i;
  Perm p;
  p.img_ = std::move(inv);
  return p;
}

Perm Perm::pow(long long k) const {
  Perm base = k < 0 ? inverse() : *this;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Perm acc(img_.size());
  while (e) {
    if (e & 1) acc *= base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

std::uint64_t Perm::order() const {
  std::uint64_t l = 1;
  for (auto len : cycle_type()) {
    std::uint64_t g = std::gcd(l, static_cast<std::uint64_t>(len));
    std::uint64_t f = len / g;
    if (l > UINT64_MAX / f) throw ResourceBound("permutation order overflows 64 bits");
    l *= f;
  }
  return l;
}

std::vector<std::vector<std::uint32_t>> Perm::cycles() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<char> seen(img_.size(), 0);
  for (std::uint32_t i = 0; i < img_.size(); ++i) {
    if (seen[i] || img_[i] == i) continue;
    std::vector<std::uint32_t> c;
    for (std::uint32_t j = i; !seen[j]; j = img_[j]) {
      seen[j] = 1;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::uint32_t> Perm::cycle_type() const {
  std::vector<std::uint32_t> t;
  std::vector<char> seen(img_.size(), 0);
  for (std::uint32_t i = 0; i < img_.size(); ++i) {
    if (seen[i]) continue;
    std::uint32_t len = 0;
    for (std::uint32_t j = i; !seen[j]; j = img_[j]) {
      seen[j] = 1;
      ++len;
    }
    t.push_back(len);
  }
  std::sort(t.begin(), t.end());
  return t;
}

std::string Perm::to_string() const {
  auto cs = cycles();
  if (cs.empty()) return "()";
  std::string s;
  for (const auto& c : cs) {
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(c[i] + 1);
    }
    s += ')';
  }
  return s;
}

Perm& Perm::operator*=(const Perm& q) {
  if (q.img_.size() != img_.size()) throw ShapeMismatch("permutation degrees differ");
  for (auto& y : img_) y = q.img_[y];
  return *this;
}

Perm operator*(const Perm& p, const Perm& q) {
  Perm r = p;
  r *= q;
  return r;
}

std::size_t Perm::hash() const {
  std::size_t h = img_.size();
  for (auto y : img_) h = h * 1000003u ^ y;
  return h;
}

std::vector<Perm> perm_closure(const std::vector<Perm>& gens, std::size_t degree, std::size_t cap) {
  std::vector<Perm> elems{Perm(degree)};
  std::unordered_set<Perm> seen{elems[0]};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gens) {
      Perm h = elems[i] * g;
      if (seen.insert(h).second) {
        if (elems.size() >= cap) throw ResourceBound("permutation closure exceeds cap");
        elems.push_back(std::move(h));
      }
    }
  }
  return elems;
}

bool is_transitive(const std::vector<Perm>& gens, std::size_t degree) {
  if (degree == 0) return true;
  std::vector<char> seen(degree, 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      auto y = g[x];
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == degree;
}

}  // namespace tg
