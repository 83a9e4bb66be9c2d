#include "tg/conjugacy.hpp"

#include <algorithm>
#include <sstream>

#include "tg/decision.hpp"
#include "tg/errors.hpp"
#include "tg/quotient.hpp"

namespace tg {

namespace {

constexpr std::size_t kMaxLevel = 8;

// Breadth-first enumeration of a small permutation group, with shortest words.
std::vector<std::pair<Perm, Word>> enumerate(const std::vector<Perm>& gens, const std::vector<std::uint32_t>& syms,
                                             std::size_t degree) {
  std::vector<std::pair<Perm, Word>> out;
  std::unordered_map<Perm, std::size_t> seen;
  out.push_back({Perm(degree), {}});
  seen.emplace(Perm(degree), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Perm q = out[i].first * gens[k];
      if (seen.count(q)) continue;
      Word w = out[i].second;
      w.push_back(syms[k]);
      seen.emplace(q, out.size());
      out.push_back({std::move(q), std::move(w)});
    }
  }
  return out;
}

}  // namespace

GgConjugacy::GgConjugacy(const Group& g, std::size_t witness_radius) : g_(g), witness_radius_(witness_radius) {
  for (const char* s : {"a", "b", "c", "d"}) g.symbol(s);
  if (!g.shape().is_regular() || g.shape().arity(0) != 2) throw ValidationError("conjugacy solver needs the binary tree");
  Word ab = g.parse("[a,b]");

  const auto& gens = g.generating_set();
  std::unique_ptr<PermGroup> kgroup;
  std::vector<Perm> gen_perms;
  for (std::size_t n = 1; n <= kMaxLevel; ++n) {
    LevelQuotient q(g, n);
    Perm k = q.image(ab);
    auto all = q.perms().generators();
    auto kn = q.perms().normal_closure({k}, all);
    if (q.order() == kn.order() * kCosets) {
      nk_ = n;
      kgroup = std::make_unique<PermGroup>(kn);
      for (auto s : gens) gen_perms.push_back(q.image(g.layer(0).symbols[s].state));
      break;
    }
  }
  if (!nk_) throw ResourceBound("index of K did not reach 16");

  std::size_t degree = std::size_t(1) << nk_;
  auto elems = enumerate(gen_perms, gens, degree);
  std::vector<Perm> reps;
  for (const auto& [p, w] : elems) {
    unsigned found = kCosets;
    for (unsigned r = 0; r < reps.size(); ++r)
      if (kgroup->contains(p * reps[r].inverse())) {
        found = r;
        break;
      }
    if (found == kCosets) {
      if (reps.size() == kCosets) throw Error("more than 16 cosets of K");
      found = static_cast<unsigned>(reps.size());
      reps.push_back(p);
      rep_words_.push_back(w);
    }
    coset_by_perm_.emplace(p, found);
  }
  if (reps.size() != kCosets) throw Error("K does not have index 16");
  for (unsigned x = 0; x < kCosets; ++x) {
    for (unsigned y = 0; y < kCosets; ++y) mul_[x][y] = coset_by_perm_.at(reps[x] * reps[y]);
    inv_[x] = coset_by_perm_.at(reps[x].inverse());
  }
  a_coset_ = coset_of(g.parse("a"));

  // liftable pairs, read off the level n_K + 1 quotient
  for (auto& row : lift_) row.fill(-1);
  LevelQuotient up(g, nk_ + 1);
  std::vector<Perm> up_gens;
  for (auto s : gens) up_gens.push_back(up.image(g.layer(0).symbols[s].state));
  auto up_elems = enumerate(up_gens, gens, 2 * degree);
  for (const auto& [p, w] : up_elems) {
    if (p[0] >= degree) continue;  // moves the first-level vertices
    std::vector<std::uint32_t> s1(degree), s2(degree), r(degree);
    for (std::uint32_t x = 0; x < degree; ++x) {
      s1[x] = p[x];
      s2[x] = p[x + degree] - static_cast<std::uint32_t>(degree);
      r[x] = p[2 * x] / 2;
    }
    unsigned x = coset_of_perm(Perm(s1)), y = coset_of_perm(Perm(s2)), z = coset_of_perm(Perm(r));
    if (lift_[x][y] >= 0 && lift_[x][y] != static_cast<int>(z)) throw Error("lift of a coset pair is not well defined");
    lift_[x][y] = static_cast<int>(z);
  }
}

unsigned GgConjugacy::coset_of_perm(const Perm& p) const {
  auto it = coset_by_perm_.find(p);
  if (it == coset_by_perm_.end()) throw ValidationError("permutation outside the level quotient");
  return it->second;
}

unsigned GgConjugacy::coset_of(const Word& w) const {
  return coset_of_perm(Perm(g_.pool().level_permutation(g_.eval(w), nk_)));
}

std::string GgConjugacy::coset_name(unsigned c) const {
  return rep_words_.at(c).empty() ? "1" : g_.format(rep_words_[c]);
}

std::string GgConjugacy::format(CosetSet s) const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (unsigned c = 0; c < kCosets; ++c)
    if (s.contains(c)) {
      os << (first ? "" : ", ") << "K" << coset_name(c);
      first = false;
    }
  os << "}";
  return os.str();
}

std::optional<unsigned> GgConjugacy::lift(unsigned x, unsigned y) const {
  int v = lift_.at(x).at(y);
  if (v < 0) return std::nullopt;
  return static_cast<unsigned>(v);
}

bool GgConjugacy::images_conjugate(unsigned x, unsigned y) const {
  for (unsigned z = 0; z < kCosets; ++z)
    if (mul_[mul_[inv_[z]][x]][z] == y) return true;
  return false;
}

CosetSet GgConjugacy::transform(CosetSet s, unsigned c, unsigned d) const {
  CosetSet out;
  for (unsigned x = 0; x < kCosets; ++x)
    if (s.contains(x)) out.insert(mul_[mul_[c][x]][inv_[d]]);
  return out;
}

std::size_t GgConjugacy::node_for(const Pair& p) {
  auto it = index_.find(p);
  if (it != index_.end()) return it->second;
  std::size_t id = nodes_.size();
  nodes_.push_back({});
  nodes_.back().key = p;
  index_.emplace(p, id);
  return id;
}

void GgConjugacy::visit(std::size_t v) {
  nodes_[v].visited = true;
  nodes_[v].index = nodes_[v].low = counter_++;
  stack_.push_back(v);
  nodes_[v].on_stack = true;

  const Word g = nodes_[v].key.first, h = nodes_[v].key.second;
  Kind kind;
  std::vector<Pair> dep_pairs;
  unsigned g1c = 0, g2c = 0, h2c = 0;
  if (g.empty() && h.empty()) {
    kind = Kind::Identity;
  } else if (!images_conjugate(coset_of(g), coset_of(h)) || !(g_.root_perm(g) == g_.root_perm(h))) {
    kind = Kind::Empty;
  } else {
    auto dg = g_.decompose(g), dh = g_.decompose(h);
    const Word &g1 = dg.sections[0], &g2 = dg.sections[1], &h1 = dh.sections[0], &h2 = dh.sections[1];
    if (dg.root.is_identity()) {
      kind = Kind::Stab;
      dep_pairs = {{g1, h1}, {g2, h2}, {g1, h2}, {g2, h1}};
    } else {
      kind = Kind::Moving;
      Word prod = g_.concat(g1, g2);
      dep_pairs = {{prod, g_.concat(h1, h2)}, {prod, g_.concat(h2, h1)}};
      g1c = coset_of(g1);
      g2c = coset_of(g2);
      h2c = coset_of(h2);
    }
  }
  std::vector<Dep> deps;
  for (const auto& [x, y] : dep_pairs) {
    auto [xn, cx] = normalize_conjugate(g_, x);
    auto [yn, cy] = normalize_conjugate(g_, y);
    deps.push_back({node_for({xn, yn}), coset_of(cx), coset_of(cy)});
  }
  nodes_[v].kind = kind;
  nodes_[v].deps = deps;
  nodes_[v].g1 = g1c;
  nodes_[v].g2 = g2c;
  nodes_[v].h2 = h2c;

  for (const auto& d : deps) {
    if (!nodes_[d.node].visited) {
      visit(d.node);
      nodes_[v].low = std::min(nodes_[v].low, nodes_[d.node].low);
    } else if (nodes_[d.node].on_stack) {
      nodes_[v].low = std::min(nodes_[v].low, nodes_[d.node].index);
    }
  }
  if (nodes_[v].low == nodes_[v].index) {
    std::vector<std::size_t> scc;
    while (true) {
      std::size_t w = stack_.back();
      stack_.pop_back();
      nodes_[w].on_stack = false;
      scc.push_back(w);
      if (w == v) break;
    }
    resolve_scc(scc);
  }
}

CosetSet GgConjugacy::evaluate(const Node& n) const {
  auto val = [&](std::size_t i) {
    const Dep& d = n.deps[i];
    return transform(nodes_[d.node].value, d.c, d.d);
  };
  CosetSet out;
  switch (n.kind) {
    case Kind::Empty:
      return out;
    case Kind::Identity:
      return CosetSet::all();
    case Kind::Stab: {
      CosetSet qa = val(0), qb = val(1), qc = val(2), qd = val(3);
      for (unsigned x = 0; x < kCosets; ++x)
        for (unsigned y = 0; y < kCosets; ++y) {
          if (qa.contains(x) && qb.contains(y))
            if (auto l = lift(x, y)) out.insert(*l);
          if (qc.contains(x) && qd.contains(y))
            if (auto l = lift(x, y)) out.insert(mul_[*l][a_coset_]);
        }
      return out;
    }
    case Kind::Moving: {
      CosetSet qe = val(0), qf = val(1);
      for (unsigned x = 0; x < kCosets; ++x) {
        if (qe.contains(x))
          if (auto l = lift(x, mul_[mul_[n.g2][x]][inv_[n.h2]])) out.insert(*l);
        if (qf.contains(x))
          if (auto l = lift(x, mul_[mul_[inv_[n.g1]][x]][n.h2])) out.insert(mul_[*l][a_coset_]);
      }
      return out;
    }
  }
  return out;
}

CosetSet GgConjugacy::witnesses(const Pair& p) {
  if (ball_states_.empty()) {
    Ball b = ball(g_, witness_radius_);
    ball_states_ = b.states;
    ball_words_ = b.elements;
  }
  auto& pool = g_.pool();
  StateId gs = g_.eval(p.first), hs = g_.eval(p.second);
  CosetSet out;
  for (std::size_t i = 0; i < ball_states_.size(); ++i) {
    StateId f = ball_states_[i];
    if (pool.compose(pool.compose(pool.invert(f), gs), f) == hs) out.insert(coset_of(ball_words_[i]));
  }
  return out;
}

void GgConjugacy::resolve_scc(const std::vector<std::size_t>& scc) {
  bool cyclic = scc.size() > 1;
  if (!cyclic)
    for (const auto& d : nodes_[scc[0]].deps)
      if (d.node == scc[0]) cyclic = true;
  if (!cyclic) {
    nodes_[scc[0]].value = evaluate(nodes_[scc[0]]);
    nodes_[scc[0]].done = true;
    return;
  }
  // least fixpoint above the conjugators found in a ball
  std::vector<CosetSet> seeds;
  for (auto v : scc) {
    seeds.push_back(witnesses(nodes_[v].key));
    nodes_[v].value = seeds.back();
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < scc.size(); ++i) {
      Node& n = nodes_[scc[i]];
      CosetSet next{static_cast<std::uint16_t>(evaluate(n).bits | seeds[i].bits | n.value.bits)};
      if (!(next == n.value)) {
        n.value = next;
        changed = true;
      }
    }
  }
  std::vector<CosetSet> least;
  for (auto v : scc) least.push_back(nodes_[v].value);
  // greatest fixpoint, as an upper bound
  for (auto v : scc) nodes_[v].value = CosetSet::all();
  for (bool changed = true; changed;) {
    changed = false;
    for (auto v : scc) {
      Node& n = nodes_[v];
      CosetSet next{static_cast<std::uint16_t>(evaluate(n).bits & n.value.bits)};
      if (!(next == n.value)) {
        n.value = next;
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < scc.size(); ++i) {
    Node& n = nodes_[scc[i]];
    if (!(n.value == least[i])) ++unresolved_;
    n.value = least[i];
    n.done = true;
  }
}

CosetSet GgConjugacy::q_set(const Word& g, const Word& h) {
  std::lock_guard lock(mu_);
  auto [gn, c] = normalize_conjugate(g_, g_.reduce(g));
  auto [hn, d] = normalize_conjugate(g_, g_.reduce(h));
  std::size_t v = node_for({gn, hn});
  if (!nodes_[v].done) visit(v);
  return transform(nodes_[v].value, coset_of(c), coset_of(d));
}

}  // namespace tg
