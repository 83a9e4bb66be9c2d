#include "tg/errors.hpp"
#include "tg/perm_groups.hpp"

namespace tg {

StabChain::StabChain(std::vector<Perm> gens, std::size_t degree, std::vector<std::uint32_t> base_prefix)
    : degree_(degree) {
  for (const auto& g : gens)
    if (g.degree() != degree) throw ShapeMismatch("generator degree mismatch");
  std::erase_if(gens, [](const Perm& g) { return g.is_identity(); });
  for (auto b : base_prefix) {
    if (b >= degree) throw ValidationError("base point out of range");
    base_.push_back(b);
    levels_.push_back({b, {}, {}, {}});
  }
  if (gens.empty()) {
    for (auto& l : levels_) rebuild_orbit(l);
    return;
  }
  // every generator must move some base point
  auto ensure_moved = [&](const Perm& g) {
    for (auto b : base_)
      if (g[b] != b) return;
    for (std::uint32_t x = 0; x < degree; ++x)
      if (g[x] != x) {
        base_.push_back(x);
        levels_.push_back({x, {}, {}, {}});
        return;
      }
  };
  for (const auto& g : gens) ensure_moved(g);
  for (auto& g : gens) {
    levels_[0].gens.push_back(g);
    for (std::size_t i = 1; i < levels_.size(); ++i) {
      bool fixes = true;
      for (std::size_t j = 0; j < i; ++j)
        if (g[base_[j]] != base_[j]) fixes = false;
      if (fixes) levels_[i].gens.push_back(g);
    }
  }
  for (auto& l : levels_) rebuild_orbit(l);

  // classic deterministic Schreier-Sims, bottom level first
  std::size_t i = levels_.size();
  while (i-- > 0) {
    bool changed = true;
    while (changed) {
      changed = false;
      Level& l = levels_[i];
      for (std::size_t oi = 0; oi < l.orbit.size() && !changed; ++oi) {
        std::uint32_t x = l.orbit[oi];
        const Perm& ux = *l.transversal[x];
        for (std::size_t gi = 0; gi < l.gens.size() && !changed; ++gi) {
          const Perm& s = l.gens[gi];
          Perm schreier = ux * s * l.transversal[s[x]]->inverse();
          if (schreier.is_identity()) continue;
          // strip through levels below i
          Perm h = schreier;
          std::size_t j = i + 1;
          for (; j < levels_.size(); ++j) {
            const Level& lj = levels_[j];
            auto y = h[lj.point];
            if (!lj.transversal[y]) break;
            h = h * lj.transversal[y]->inverse();
          }
          if (j == levels_.size() && h.is_identity()) continue;
          if (j == levels_.size()) {
            for (std::uint32_t x2 = 0; x2 < degree_; ++x2)
              if (h[x2] != x2) {
                base_.push_back(x2);
                levels_.push_back({x2, {}, {}, {}});
                break;
              }
          }
          for (std::size_t k = i + 1; k <= j && k < levels_.size(); ++k) {
            levels_[k].gens.push_back(h);
            rebuild_orbit(levels_[k]);
          }
          i = j;  // restart from the level that grew
          changed = true;
        }
      }
      if (changed) {
        // re-run the outer loop from the deepest modified level upward
        ++i;
        break;
      }
    }
    if (i > levels_.size()) i = levels_.size();
  }
}

void StabChain::rebuild_orbit(Level& l) const {
  l.orbit.assign(1, l.point);
  l.transversal.assign(degree_, std::nullopt);
  l.transversal[l.point] = Perm(degree_);
  for (std::size_t h = 0; h < l.orbit.size(); ++h) {
    std::uint32_t x = l.orbit[h];
    for (const auto& g : l.gens) {
      std::uint32_t y = g[x];
      if (!l.transversal[y]) {
        l.transversal[y] = *l.transversal[x] * g;
        l.orbit.push_back(y);
      }
    }
  }
}

std::pair<Perm, std::size_t> StabChain::strip(const Perm& p) const {
  Perm h = p;
  std::size_t j = 0;
  for (; j < levels_.size(); ++j) {
    auto y = h[levels_[j].point];
    if (!levels_[j].transversal[y]) break;
    h = h * levels_[j].transversal[y]->inverse();
  }
  return {h, j};
}

BigInt StabChain::order() const {
  BigInt o = 1;
  for (const auto& l : levels_) o *= l.orbit.size();
  return o;
}

bool StabChain::contains(const Perm& p) const {
  if (p.degree() != degree_) return false;
  auto [h, j] = strip(p);
  return j == levels_.size() && h.is_identity();
}

std::vector<Perm> StabChain::stabilizer_generators(std::size_t depth) const {
  if (depth >= levels_.size()) return {};
  return levels_[depth].gens;
}

}  // namespace tg
