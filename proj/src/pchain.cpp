#include <deque>

#include "tg/errors.hpp"
#include "tg/perm_groups.hpp"

namespace tg {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Every vertex permutation above level n is a rotation of the children.
bool is_layered(const Perm& g, std::size_t p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t block = ipow(p, n - i - 1);
    std::size_t verts = ipow(p, i);
    for (std::size_t u = 0; u < verts; ++u) {
      std::size_t base = u * p;
      std::size_t img0 = g[base * block] / block;
      std::size_t target = img0 / p;
      std::size_t shift = img0 % p;
      for (std::size_t j = 1; j < p; ++j) {
        std::size_t img = g[(base + j) * block] / block;
        if (img / p != target || img % p != (j + shift) % p) return false;
      }
    }
  }
  return true;
}

Perm comm(const Perm& x, const Perm& y) { return x.inverse() * y.inverse() * x * y; }

}  // namespace

PcGroup::PcGroup(int p, std::size_t n) : p_(p), n_(n), degree_(ipow(p, n)), layers_(n) {}

std::optional<PcGroup> PcGroup::build(const std::vector<Perm>& gens, int p, std::size_t n) {
  if (p < 2) throw ValidationError("prime must be at least 2");
  PcGroup out(p, n);
  for (const auto& g : gens) {
    if (g.degree() != out.degree_) throw ShapeMismatch("generator degree does not match level");
    if (!is_layered(g, p, n)) return std::nullopt;
  }
  out.close(gens);
  return out;
}

std::vector<std::uint8_t> PcGroup::layer_vector(const Perm& g, std::size_t i) const {
  std::size_t p = p_;
  std::size_t block = ipow(p, n_ - i - 1);
  std::size_t verts = ipow(p, i);
  std::vector<std::uint8_t> v(verts);
  for (std::size_t u = 0; u < verts; ++u) {
    std::size_t img = g[u * p * block] / block;
    v[u] = static_cast<std::uint8_t>(img % p);  // g fixes u, so img = u*p + shift
  }
  return v;
}

std::optional<Perm> PcGroup::sift(Perm g, bool add) {
  std::size_t p = p_;
  for (std::size_t i = 0; i < n_; ++i) {
    auto v = layer_vector(g, i);
    for (const Elem& e : layers_[i]) {
      unsigned c = v[e.pivot];
      if (!c) continue;
      for (std::size_t k = e.pivot; k < v.size(); ++k) v[k] = static_cast<std::uint8_t>((v[k] + (p - c) * e.vec[k]) % p);
      for (unsigned r = 0; r < c; ++r) g *= e.inv;
    }
    std::size_t q = 0;
    while (q < v.size() && v[q] == 0) ++q;
    if (q == v.size()) continue;
    if (!add) return g;
    // scale so the pivot entry is 1
    unsigned c = v[q], k = 1;
    while ((k * c) % p != 1) ++k;
    if (k != 1) {
      g = g.pow(k);
      for (auto& x : v) x = static_cast<std::uint8_t>((x * k) % p);
    }
    Elem e{q, std::move(v), g, g.inverse()};
    auto& layer = layers_[i];
    auto pos = std::lower_bound(layer.begin(), layer.end(), q, [](const Elem& a, std::size_t b) { return a.pivot < b; });
    layer.insert(pos, std::move(e));
    return g;
  }
  return std::nullopt;
}

void PcGroup::close(std::vector<Perm> pending, const std::vector<Perm>& conjugators) {
  std::deque<Perm> work(pending.begin(), pending.end());
  std::vector<Perm> basis;
  for (const auto& layer : layers_)
    for (const auto& e : layer) basis.push_back(e.g);
  while (!work.empty()) {
    Perm g = std::move(work.front());
    work.pop_front();
    auto added = sift(std::move(g), true);
    if (!added) continue;
    const Perm& x = *added;
    work.push_back(x.pow(p_));
    for (const auto& y : basis) work.push_back(comm(x, y));
    for (const auto& c : conjugators) work.push_back(c.inverse() * x * c);
    basis.push_back(x);
  }
}

std::size_t PcGroup::exponent() const {
  std::size_t e = 0;
  for (const auto& l : layers_) e += l.size();
  return e;
}

BigInt PcGroup::order() const {
  BigInt o = 1;
  for (std::size_t i = 0; i < exponent(); ++i) o *= p_;
  return o;
}

bool PcGroup::contains(const Perm& g) const {
  if (g.degree() != degree_ || !is_layered(g, p_, n_)) return false;
  return !const_cast<PcGroup*>(this)->sift(g, false);
}

std::vector<Perm> PcGroup::pcgs() const {
  std::vector<Perm> out;
  for (const auto& l : layers_)
    for (const auto& e : l) out.push_back(e.g);
  return out;
}

PcGroup PcGroup::subgroup(const std::vector<Perm>& gens) const {
  for (const auto& g : gens)
    if (!contains(g)) throw ValidationError("element outside the group");
  PcGroup out(p_, n_);
  out.close(gens);
  return out;
}

PcGroup PcGroup::normal_closure(const std::vector<Perm>& gens, const std::vector<Perm>& by) const {
  for (const auto& g : gens)
    if (!contains(g)) throw ValidationError("element outside the group");
  PcGroup out(p_, n_);
  out.close(gens, by);
  return out;
}

PcGroup PcGroup::stabilizer(std::uint32_t point) const {
  if (point >= degree_) throw ValidationError("point out of range");
  // orbit-stabilizer along the composition series, deepest element first
  auto seq = pcgs();
  std::vector<std::uint32_t> orbit{point};
  std::vector<std::optional<Perm>> trans(degree_);
  trans[point] = Perm(degree_);
  std::vector<Perm> stab;
  for (std::size_t k = seq.size(); k-- > 0;) {
    const Perm& x = seq[k];
    std::uint32_t img = x[point];
    if (trans[img]) {
      Perm s = x * trans[img]->inverse();
      if (!s.is_identity()) stab.push_back(std::move(s));
      continue;
    }
    std::size_t sz = orbit.size();
    Perm xp = x;
    for (int j = 1; j < p_; ++j) {
      for (std::size_t t = 0; t < sz; ++t) {
        std::uint32_t b = xp[orbit[t]];
        trans[b] = *trans[orbit[t]] * xp;
        orbit.push_back(b);
      }
      xp *= x;
    }
  }
  PcGroup out(p_, n_);
  out.close(stab);
  return out;
}

PcGroup PcGroup::pointwise_stabilizer(const std::vector<std::uint32_t>& points) const {
  PcGroup cur = *this;
  for (auto pt : points) {
    bool moved = false;
    for (const auto& l : cur.layers_)
      for (const auto& e : l)
        if (e.g[pt] != pt) moved = true;
    if (moved) cur = cur.stabilizer(pt);
  }
  return cur;
}

std::vector<std::vector<std::uint32_t>> PcGroup::orbits() const {
  auto seq = pcgs();
  std::vector<char> seen(degree_, 0);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t s = 0; s < degree_; ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> orb{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < orb.size(); ++h)
      for (const auto& g : seq) {
        auto y = g[orb[h]];
        if (!seen[y]) {
          seen[y] = 1;
          orb.push_back(y);
        }
      }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

}  // namespace tg
