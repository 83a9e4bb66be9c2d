#include "tg/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tg/errors.hpp"

namespace tg {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

Perm comm(const Perm& x, const Perm& y) { return x.inverse() * y.inverse() * x * y; }

std::vector<Perm> dedupe(std::vector<Perm> gens) {
  std::vector<Perm> out;
  std::set<Perm> seen;
  for (auto& g : gens)
    if (!g.is_identity() && seen.insert(g).second) out.push_back(std::move(g));
  return out;
}

std::vector<Perm> commutators(const std::vector<Perm>& xs, const std::vector<Perm>& ys) {
  std::vector<Perm> out;
  for (const auto& x : xs)
    for (const auto& y : ys) {
      Perm c = comm(x, y);
      if (!c.is_identity()) out.push_back(std::move(c));
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- PermGroup

PermGroup::PermGroup(std::vector<Perm> gens, std::size_t degree, int p, std::size_t level)
    : gens_(dedupe(std::move(gens))), degree_(degree), p_(p), level_(level) {
  for (const auto& g : gens_)
    if (g.degree() != degree) throw ShapeMismatch("generator degree mismatch");
  if (p > 1 && ipow(p, level) == degree) {
    if (auto pc = PcGroup::build(gens_, p, level)) pc_ = std::make_shared<const PcGroup>(std::move(*pc));
  }
  if (!pc_) chain_ = std::make_shared<const StabChain>(gens_, degree_);
}

PermGroup::PermGroup(std::vector<Perm> gens, std::size_t degree, int p, std::size_t level,
                     std::shared_ptr<const PcGroup> pc)
    : gens_(dedupe(std::move(gens))), degree_(degree), p_(p), level_(level), pc_(std::move(pc)) {}

BigInt PermGroup::order() const { return pc_ ? pc_->order() : chain_->order(); }

bool PermGroup::contains(const Perm& g) const { return pc_ ? pc_->contains(g) : chain_->contains(g); }

std::vector<Perm> PermGroup::strong_generators() const {
  if (pc_) return pc_->pcgs();
  return dedupe(chain_->stabilizer_generators(0));
}

PermGroup PermGroup::subgroup(const std::vector<Perm>& gens) const {
  if (pc_) {
    auto sub = std::make_shared<const PcGroup>(pc_->subgroup(gens));
    return PermGroup(gens, degree_, p_, level_, std::move(sub));
  }
  for (const auto& g : gens)
    if (!contains(g)) throw ValidationError("element outside the group");
  PermGroup out(gens, degree_, 0, 0);
  return out;
}

PermGroup PermGroup::normal_closure(const std::vector<Perm>& gens, const std::vector<Perm>& by) const {
  if (pc_) {
    auto sub = std::make_shared<const PcGroup>(pc_->normal_closure(gens, by));
    auto pcgs = sub->pcgs();
    return PermGroup(pcgs, degree_, p_, level_, std::move(sub));
  }
  for (const auto& g : gens)
    if (!contains(g)) throw ValidationError("element outside the group");
  std::vector<Perm> cur = dedupe(gens);
  auto chain = std::make_shared<StabChain>(cur, degree_);
  for (std::size_t i = 0; i < cur.size(); ++i)
    for (const auto& b : by) {
      Perm c = b.inverse() * cur[i] * b;
      if (chain->contains(c)) continue;
      cur.push_back(std::move(c));
      chain = std::make_shared<StabChain>(cur, degree_);
    }
  PermGroup out(cur, degree_, 0, 0, nullptr);
  out.chain_ = std::move(chain);
  return out;
}

PermGroup PermGroup::pointwise_stabilizer(const std::vector<std::uint32_t>& points) const {
  if (pc_) {
    auto sub = std::make_shared<const PcGroup>(pc_->pointwise_stabilizer(points));
    auto pcgs = sub->pcgs();
    return PermGroup(pcgs, degree_, p_, level_, std::move(sub));
  }
  std::vector<std::uint32_t> pts;
  std::set<std::uint32_t> seen;
  for (auto x : points)
    if (seen.insert(x).second) pts.push_back(x);
  StabChain c(gens_, degree_, pts);
  return PermGroup(c.stabilizer_generators(pts.size()), degree_, 0, 0);
}

std::vector<std::vector<std::uint32_t>> PermGroup::orbits() const {
  if (pc_) return pc_->orbits();
  std::vector<char> seen(degree_, 0);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t s = 0; s < degree_; ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> orb{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < orb.size(); ++h)
      for (const auto& g : gens_) {
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

// ---------------------------------------------------------------- LevelQuotient

namespace {

PermGroup quotient_perms(const Group& g, std::size_t n) {
  const auto& shape = g.shape();
  std::size_t degree = shape.level_size(n);
  std::vector<Perm> gens;
  for (StateId s : g.generating_states()) gens.emplace_back(g.pool().level_permutation(s, n));
  int p = g.prime();
  bool regular_p = p > 1 && shape.is_regular() && shape.arity(0) == p;
  return PermGroup(std::move(gens), degree, regular_p ? p : 0, n);
}

}  // namespace

LevelQuotient::LevelQuotient(const Group& g, std::size_t n) : g_(std::make_shared<const Group>(g)), n_(n), perms_(quotient_perms(g, n)) {}

LevelQuotient level_quotient(const Group& g, std::size_t n) { return LevelQuotient(g, n); }

Perm LevelQuotient::image(StateId f) const { return Perm(g_->pool().level_permutation(f, n_)); }

Perm LevelQuotient::image(const Word& w) const { return image(g_->eval(w)); }

std::size_t LevelQuotient::brute_force_order(std::size_t cap) const {
  return perm_closure(perms_.generators(), degree(), cap).size();
}

PermGroup LevelQuotient::rigid_stabilizer(const Vertex& v) const {
  if (v.size() > n_) throw ValidationError("vertex below the quotient level");
  const auto& shape = g_->shape();
  std::size_t idx = vertex_index(shape, v);
  std::size_t block = shape.level_size(n_ - v.size(), shape.phase_of_level(v.size()));
  std::vector<std::uint32_t> outside;
  for (std::size_t x = 0; x < degree(); ++x)
    if (x / block != idx) outside.push_back(static_cast<std::uint32_t>(x));
  return perms_.pointwise_stabilizer(outside);
}

PermGroup LevelQuotient::rigid_level_stabilizer(std::size_t k) const {
  if (k > n_) throw ValidationError("level below the quotient level");
  const auto& shape = g_->shape();
  std::vector<Perm> gens;
  for (std::size_t i = 0; i < shape.level_size(k); ++i) {
    auto r = rigid_stabilizer(vertex_from_index(shape, k, i));
    auto sg = r.strong_generators();
    gens.insert(gens.end(), sg.begin(), sg.end());
  }
  return perms_.subgroup(gens);
}

std::vector<std::size_t> LevelQuotient::lower_central_ranks(std::size_t kmax) const {
  if (!perms_.is_pc()) throw ValidationError("lower central ranks need a p-group quotient");
  const int p = perms_.prime();
  auto g_gens = perms_.generators();
  std::vector<std::size_t> ranks;
  PermGroup cur = perms_;
  for (std::size_t k = 1; k <= kmax; ++k) {
    auto cur_gens = cur.strong_generators();
    PermGroup next = perms_.normal_closure(commutators(cur_gens, g_gens), g_gens);
    std::vector<Perm> frattini = next.strong_generators();
    for (const auto& x : cur_gens) frattini.push_back(x.pow(p));
    PermGroup below = cur.subgroup(frattini);
    ranks.push_back(cur.pc().exponent() - below.pc().exponent());
    cur = std::move(next);
  }
  return ranks;
}

std::size_t LevelQuotient::nilpotency_class() const {
  if (!perms_.is_pc()) throw ValidationError("nilpotency class needs a p-group quotient");
  auto g_gens = perms_.generators();
  PermGroup cur = perms_;
  std::size_t c = 0;
  while (cur.order() > 1) {
    cur = perms_.normal_closure(commutators(cur.strong_generators(), g_gens), g_gens);
    ++c;
  }
  return c;
}

PermGroup LevelQuotient::derived_subgroup() const {
  auto gens = perms_.generators();
  return perms_.normal_closure(commutators(gens, gens), gens);
}

std::vector<BigInt> LevelQuotient::derived_series(std::size_t kmax) const {
  std::vector<BigInt> out{perms_.order()};
  PermGroup cur = perms_;
  for (std::size_t k = 1; k <= kmax && out.back() > 1; ++k) {
    auto gens = cur.strong_generators();
    cur = cur.normal_closure(commutators(gens, gens), gens);
    out.push_back(cur.order());
  }
  return out;
}

std::vector<std::size_t> LevelQuotient::suborbit_profile() const {
  std::uint32_t base = static_cast<std::uint32_t>(degree() - 1);
  auto stab = perms_.pointwise_stabilizer({base});
  std::vector<std::size_t> sizes;
  for (const auto& o : stab.orbits()) sizes.push_back(o.size());
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

double LevelQuotient::hausdorff_ratio() const {
  double den = log_big(cyclic_wreath_order(g_->shape(), n_));
  return den > 0 ? log_big(order()) / den : 1.0;
}

double LevelQuotient::hausdorff_ratio_full() const {
  double den = log_big(full_aut_order(g_->shape(), n_));
  return den > 0 ? log_big(order()) / den : 1.0;
}

// ---------------------------------------------------------------- helpers

BigInt full_aut_order(const TreeShape& shape, std::size_t n) {
  BigInt out = 1;
  BigInt verts = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt fact = 1;
    for (int k = 2; k <= shape.arity(i); ++k) fact *= k;
    out *= boost::multiprecision::pow(fact, static_cast<unsigned>(verts));
    verts *= shape.arity(i);
  }
  return out;
}

BigInt cyclic_wreath_order(const TreeShape& shape, std::size_t n) {
  BigInt out = 1;
  BigInt verts = 1;
  for (std::size_t i = 0; i < n; ++i) {
    out *= boost::multiprecision::pow(BigInt(shape.arity(i)), static_cast<unsigned>(verts));
    verts *= shape.arity(i);
  }
  return out;
}

double log_big(const BigInt& x) {
  if (x <= 0) throw ValidationError("log of a non-positive integer");
  std::size_t bits = boost::multiprecision::msb(x);
  std::size_t shift = bits > 60 ? bits - 60 : 0;
  BigInt top = x >> shift;
  return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

std::string format_order(const BigInt& x, int p) {
  if (p > 1 && x > 1) {
    BigInt y = x;
    std::size_t e = 0;
    while (y % p == 0) {
      y /= p;
      ++e;
    }
    if (y == 1) return std::to_string(p) + "^" + std::to_string(e);
  }
  return x.str();
}

}  // namespace tg
