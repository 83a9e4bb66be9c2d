#pragma once

// Randomised property checks shared by the unit tests and the acceptance run.
// Each check returns the number of cases tried and the failures seen.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tg/decision.hpp"
#include "tg/group.hpp"

namespace tg::props {

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;  // description of the first failure
  bool ok() const { return cases > 0 && failures == 0; }
  void fail(std::string what) {
    if (failures++ == 0) first = std::move(what);
  }
};

inline Word random_word(const Group& g, std::mt19937_64& rng, std::size_t len) {
  const auto& gs = g.generating_set();
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(gs[pick(rng)]);
  return w;
}

inline Word random_reduced(const Group& g, std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  return g.reduce(random_word(g, rng, len(rng)));
}

inline Vertex random_vertex(const TreeShape& shape, std::mt19937_64& rng, std::size_t len) {
  Vertex v;
  for (std::size_t i = 0; i < len; ++i) {
    std::uniform_int_distribution<int> x(0, shape.arity(i) - 1);
    v.push_back(x(rng));
  }
  return v;
}

inline std::size_t total_length(const std::vector<Word>& ws) {
  std::size_t n = 0;
  for (const auto& w : ws) n += w.size();
  return n;
}

/// act(fg, u) = act(g, act(f, u)) for vertices up to level 4.
inline Outcome right_action_law(const Group& g, std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  StatePool& pool = g.pool();
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    StateId f = g.eval(random_reduced(g, rng, 16)), h = g.eval(random_reduced(g, rng, 16));
    Vertex u = random_vertex(g.shape(), rng, 1 + i % 4);
    ++out.cases;
    if (pool.act(pool.compose(f, h), u) != pool.act(h, pool.act(f, u))) out.fail("case " + std::to_string(i));
  }
  return out;
}

/// section(fg, u) = section(f, u) section(g, act(f, u)).
inline Outcome section_homomorphism(const Group& g, std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  StatePool& pool = g.pool();
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    StateId f = g.eval(random_reduced(g, rng, 16)), h = g.eval(random_reduced(g, rng, 16));
    Vertex u = random_vertex(g.shape(), rng, 1 + i % 4);
    ++out.cases;
    StateId lhs = pool.section(pool.compose(f, h), u);
    StateId rhs = pool.compose(pool.section(f, u), pool.section(h, pool.act(f, u)));
    if (lhs != rhs) out.fail("case " + std::to_string(i));
  }
  return out;
}

/// Reducing the pieces of a random split first, in random order, gives the same normal form.
inline Outcome reduce_confluence(const Group& g, std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    std::uniform_int_distribution<std::size_t> len(0, 40);
    Word w = random_word(g, rng, len(rng));
    Word direct = g.reduce(w);
    ++out.cases;
    if (g.reduce(direct) != direct) {
      out.fail("not idempotent on " + g.format(w));
      continue;
    }
    // collapse random adjacent pieces until one remains
    std::vector<Word> pieces;
    for (auto x : w) pieces.push_back({x});
    if (pieces.empty()) continue;
    while (pieces.size() > 1) {
      std::uniform_int_distribution<std::size_t> at(0, pieces.size() - 2);
      std::size_t k = at(rng);
      Word joined = pieces[k];
      joined.insert(joined.end(), pieces[k + 1].begin(), pieces[k + 1].end());
      pieces[k] = g.reduce(joined);
      pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    }
    if (g.reduce(pieces[0]) != direct) out.fail("order dependent on " + g.format(w));
  }
  return out;
}

/// First-level section words of a reduced word F have length at most (|F|+1)/2.
inline Outcome section_contraction(const Group& g, std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    Word f = random_reduced(g, rng, 64);
    auto d = g.decompose(f);
    ++out.cases;
    for (const auto& s : d.sections)
      if (2 * s.size() > f.size() + 1) {
        out.fail(g.format(f) + " has a section of length " + std::to_string(s.size()));
        break;
      }
  }
  return out;
}

/// Shortest word for every element of the level-n quotient, keyed by its level permutation.
inline std::map<std::vector<std::uint32_t>, Word> quotient_words(const Group& g, std::size_t n) {
  std::map<std::vector<std::uint32_t>, Word> out;
  for (std::size_t radius = 4;; radius += 2) {
    Ball b = ball(g, radius);
    out.clear();
    for (std::size_t i = 0; i < b.elements.size(); ++i)
      out.emplace(g.pool().level_permutation(b.states[i], n), b.elements[i]);
    if (b.sphere_sizes.back() == 0) return out;
    // done once the collected images are closed under right multiplication by generators
    bool closed = true;
    for (const auto& [perm, w] : out) {
      for (auto s : g.generating_set()) {
        Word ws = w;
        ws.push_back(s);
        if (!out.count(g.pool().level_permutation(g.eval(ws), n))) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    if (closed) return out;
  }
}

/// Random reduced words in Stab(L_r): a random word times a shortest word correcting its level-r image.
class StabilizerSampler {
 public:
  StabilizerSampler(const Group& g, std::size_t r) : g_(g), r_(r), words_(quotient_words(g, r)) {}

  std::size_t quotient_size() const { return words_.size(); }

  Word sample(std::mt19937_64& rng, std::size_t max_len) const {
    Word w = random_reduced(g_, rng, max_len);
    Perm p(g_.pool().level_permutation(g_.eval(w), r_));
    const Word& fix = words_.at(p.inverse().images());
    return g_.reduce(g_.concat(w, fix));
  }

 private:
  const Group& g_;
  std::size_t r_;
  std::map<std::vector<std::uint32_t>, Word> words_;
};

/// |L_r(F)| <= 3/4 |F| + M^r on random reduced F in Stab(L_r).
inline Outcome shortening_three_quarters(const Group& g, std::size_t r, std::size_t cases, std::uint64_t seed) {
  StabilizerSampler sampler(g, r);
  std::mt19937_64 rng(seed);
  const double mr = std::pow(static_cast<double>(g.shape().arity(0)), static_cast<double>(r));
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    Word f = sampler.sample(rng, 120);
    auto secs = level_sections(g, f, r);
    ++out.cases;
    if (!secs) {
      out.fail(g.format(f) + " is not in the level stabilizer");
      continue;
    }
    double lr = static_cast<double>(total_length(*secs));
    if (lr > 0.75 * static_cast<double>(f.size()) + mr) out.fail(g.format(f));
  }
  return out;
}

/// |L_r(F)| < 2/3 |F| + 3 M^r on random reduced F in Stab(L_r).
inline Outcome shortening_two_thirds(const Group& g, std::size_t r, std::size_t cases, std::uint64_t seed) {
  StabilizerSampler sampler(g, r);
  std::mt19937_64 rng(seed);
  const double mr = std::pow(static_cast<double>(g.shape().arity(0)), static_cast<double>(r));
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    Word f = sampler.sample(rng, 120);
    auto secs = level_sections(g, f, r);
    ++out.cases;
    if (!secs) {
      out.fail(g.format(f) + " is not in the level stabilizer");
      continue;
    }
    double lr = static_cast<double>(total_length(*secs));
    if (!(lr < 2.0 / 3.0 * static_cast<double>(f.size()) + 3 * mr)) out.fail(g.format(f));
  }
  return out;
}

/// Weights of the generators of the first Grigorchuk group for r = 3:
/// a gets tau_0, and a directed letter gets tau_i for the first level i whose
/// homomorphism kills it (d at 1, c at 2, b at 3).
inline std::vector<double> gg_eta_weights(const Group& g, const EtaWeights& ew) {
  std::vector<double> w;
  for (auto s : g.generating_set()) {
    const std::string& n = g.layer(0).symbols[s].name;
    w.push_back(n == "a" ? ew.tau[0] : n == "d" ? ew.tau[1] : n == "c" ? ew.tau[2] : ew.tau[3]);
  }
  return w;
}

/// sum_i d(f_i) <= eta (d(f) + tau_0) for the r = 3 weights on random elements.
inline Outcome eta_shortening(const Group& g, std::size_t cases, std::uint64_t seed, double max_weight = 6.0) {
  const EtaWeights ew = eta_weights(3);
  auto norms = weighted_norms(g, gg_eta_weights(g, ew), max_weight);
  // sections of f satisfy the bound only if they are inside the computed ball
  const double sample_weight = max_weight / ew.eta - ew.tau[0];
  std::vector<StateId> pool_ids;
  for (const auto& [f, w] : norms)
    if (w <= sample_weight) pool_ids.push_back(f);
  std::sort(pool_ids.begin(), pool_ids.end());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool_ids.size() - 1);
  const StatePool& pool = g.pool();
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    StateId f = pool_ids[pick(rng)];
    double lhs = 0;
    bool known = true;
    for (StateId s : pool.node(f).children) {
      auto it = norms.find(s);
      if (it == norms.end()) {
        known = false;
        break;
      }
      lhs += it->second;
    }
    ++out.cases;
    if (!known) {
      out.fail("a section left the weight ball");
      continue;
    }
    if (lhs > ew.eta * (norms.at(f) + ew.tau[0]) + 1e-9) out.fail("state " + std::to_string(f));
  }
  return out;
}

/// Canonical portrait depth of a word w is at most ceil(log2 |w|) + 1.
inline Outcome portrait_depth_bound(const Group& g, std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  while (out.cases < cases) {
    Word w = random_reduced(g, rng, 256);
    if (w.empty()) continue;
    ++out.cases;
    auto depth = canonical_portrait_depth(g, w);
    auto bound = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(w.size())))) + 1;
    if (depth > bound) out.fail(g.format(w) + " has depth " + std::to_string(depth));
  }
  return out;
}

}  // namespace tg::props
