#include "tg/group.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>

#include "tg/errors.hpp"

namespace tg {

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::SpinalTriple: return "spinal-triple";
    case Flavor::GGSequence: return "GG-sequence";
    case Flavor::GGSVector: return "GGS-vector";
    case Flavor::ExplicitRecursion: return "explicit-recursion";
  }
  return "?";
}

std::shared_ptr<StatePool> pool_for(const TreeShape& shape) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, std::vector<int>>, std::shared_ptr<StatePool>> pools;
  std::lock_guard lk(mu);
  auto& slot = pools[{shape.prefix(), shape.cycle()}];
  if (!slot) slot = std::make_shared<StatePool>(shape);
  return slot;
}

namespace {

constexpr std::size_t kFamilyCap = 256;

// Closure of a state set under composition, starting from the identity.
std::optional<std::vector<StateId>> state_closure(StatePool& pool, int phase, const std::vector<StateId>& gens,
                                                  std::size_t cap) {
  std::vector<StateId> elems{pool.identity(phase)};
  std::unordered_map<StateId, std::size_t> index{{elems[0], 0}};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (StateId g : gens) {
      StateId x = pool.compose(elems[i], g);
      if (index.emplace(x, elems.size()).second) {
        if (elems.size() >= cap) return std::nullopt;
        elems.push_back(x);
      }
    }
  }
  return elems;
}

}  // namespace

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  if (spec_.layers.empty()) throw ValidationError("group has no generators");
  if (spec_.next_layer.empty()) {
    spec_.next_layer.resize(spec_.layers.size());
    for (std::size_t k = 0; k < spec_.layers.size(); ++k)
      spec_.next_layer[k] = static_cast<std::uint32_t>((k + 1) % spec_.layers.size());
  }
  if (spec_.next_layer.size() != spec_.layers.size()) throw ValidationError("layer successor table has wrong size");
  pool_ = pool_for(spec_.shape);
  build_states();
  for (std::size_t k = 0; k < layers_.size(); ++k) build_families(k);
  build_sections();

  const Layer& l0 = layers_[0];
  std::set<std::uint32_t> seen;
  for (auto s : l0.named) {
    if (seen.insert(s).second) gen_set_.push_back(s);
    auto inv = l0.symbols[s].inverse;
    if (seen.insert(inv).second) gen_set_.push_back(inv);
  }

  spinal_ = true;
  for (const auto& l : layers_) {
    int rooted = 0, directed = 0, other = 0;
    for (const auto& f : l.families) {
      if (f.kind == FamilyKind::Rooted) ++rooted;
      else if (f.kind == FamilyKind::Directed) ++directed;
      else ++other;
    }
    if (rooted != 1 || directed > 1 || other) spinal_ = false;
  }

  prime_ = spec_.prime;
  if (prime_ == 0) {
    std::uint64_t order = 1;
    for (const auto& l : layers_) {
      std::vector<Perm> roots;
      for (const auto& s : l.symbols) roots.push_back(s.root);
      auto deg = static_cast<std::size_t>(shape().arity_of_phase(l.phase));
      order *= perm_closure(roots, deg).size();
    }
    for (int p = 2; p <= 97; ++p) {
      std::uint64_t x = order;
      while (x % static_cast<std::uint64_t>(p) == 0) x /= static_cast<std::uint64_t>(p);
      if (x == 1 && order > 1) {
        prime_ = p;
        break;
      }
      if (x != order) break;
    }
  }
}

void Group::build_states() {
  const TreeShape& sh = shape();
  const std::size_t L = spec_.layers.size();
  layers_.resize(L);
  gen_states_.assign(L, {});
  for (std::size_t k = 0; k < L; ++k) {
    const auto& ls = spec_.layers[k];
    if (ls.phase < 0 || ls.phase >= sh.phase_count()) throw ShapeMismatch("layer phase out of range");
    layers_[k].phase = ls.phase;
    layers_[k].next = spec_.next_layer[k];
    if (spec_.next_layer[k] >= L) throw ValidationError("layer successor out of range");
    if (spec_.layers[spec_.next_layer[k]].phase != sh.next_phase(ls.phase))
      throw ShapeMismatch("layer successor lives on the wrong phase");
  }

  // generator nodes (layer, index)
  struct Ref {
    std::size_t layer, idx;
  };
  std::vector<Ref> nodes;
  std::map<std::pair<std::size_t, std::string>, std::size_t> id;
  for (std::size_t k = 0; k < L; ++k) {
    for (std::size_t i = 0; i < spec_.layers[k].gens.size(); ++i) {
      const auto& g = spec_.layers[k].gens[i];
      if (g.name.empty()) throw ValidationError("generator without a name");
      if (!id.emplace(std::make_pair(k, g.name), nodes.size()).second)
        throw ValidationError("generator '" + g.name + "' defined twice");
      nodes.push_back({k, i});
    }
  }
  auto lookup = [&](std::size_t layer, const std::string& name) {
    auto it = id.find({layer, name});
    if (it == id.end()) throw ValidationError("unknown generator '" + name + "'");
    return it->second;
  };

  // resolve roots and validate arities
  std::vector<Perm> roots(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const auto& g = spec_.layers[nodes[v].layer].gens[nodes[v].idx];
    auto m = static_cast<std::size_t>(sh.arity_of_phase(layers_[nodes[v].layer].phase));
    Perm r = g.root.degree() ? g.root : Perm(m);
    if (!g.root_name.empty()) {
      const auto& rg = spec_.layers[nodes[v].layer].gens[nodes[lookup(nodes[v].layer, g.root_name)].idx];
      if (rg.recursive) throw ValidationError("'" + g.root_name + "' is not a rooted generator");
      r = rg.root;
    }
    if (r.degree() != m) throw ShapeMismatch("generator '" + g.name + "': permutation degree does not match arity");
    if (g.recursive && g.entries.size() != m)
      throw ShapeMismatch("generator '" + g.name + "': tuple length does not match arity");
    roots[v] = r;
  }

  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const auto& g = spec_.layers[nodes[v].layer].gens[nodes[v].idx];
    for (const auto& e : g.entries)
      if (!e.gen.empty()) adj[v].push_back(lookup(spec_.next_layer[nodes[v].layer], e.gen));
  }

  // Tarjan over generators; components come out children first
  std::vector<int> index(nodes.size(), -1), low(nodes.size(), 0);
  std::vector<char> on(nodes.size(), 0);
  std::vector<std::size_t> stack;
  std::vector<std::optional<StateId>> state(nodes.size());
  int counter = 0;

  auto resolve_component = [&](const std::vector<std::size_t>& comp) {
    std::unordered_map<std::size_t, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < comp.size(); ++i) pos[comp[i]] = i;
    std::vector<SysNode> sys(2 * comp.size());
    for (std::uint32_t i = 0; i < comp.size(); ++i) {
      std::size_t v = comp[i];
      const auto& g = spec_.layers[nodes[v].layer].gens[nodes[v].idx];
      int phase = layers_[nodes[v].layer].phase;
      int nphase = sh.next_phase(phase);
      auto next = spec_.next_layer[nodes[v].layer];
      auto ref = [&](const Entry& e, bool invert) -> SysRef {
        int p = invert ? -e.power : e.power;
        if (e.gen.empty() || p == 0) return SysRef::state(pool_->identity(nphase));
        std::size_t w = lookup(next, e.gen);
        auto it = pos.find(w);
        if (it != pos.end()) {
          if (p == 1) return SysRef::node(2 * it->second);
          if (p == -1) return SysRef::node(2 * it->second + 1);
          throw ValidationError("generator '" + g.name + "': powers other than +-1 inside a recursive cycle");
        }
        return SysRef::state(pool_->power(*state[w], p));
      };
      Perm inv = roots[v].inverse();
      SysNode& fwd = sys[2 * i];
      SysNode& bwd = sys[2 * i + 1];
      fwd.phase = bwd.phase = phase;
      fwd.root = roots[v];
      bwd.root = inv;
      const std::size_t m = roots[v].degree();
      for (std::uint32_t j = 0; j < m; ++j) {
        if (g.recursive) {
          fwd.children.push_back(ref(g.entries[j], false));
          bwd.children.push_back(ref(g.entries[inv[j]], true));
        } else {
          fwd.children.push_back(SysRef::state(pool_->identity(nphase)));
          bwd.children.push_back(SysRef::state(pool_->identity(nphase)));
        }
      }
    }
    auto ids = pool_->intern(sys);
    for (std::uint32_t i = 0; i < comp.size(); ++i) state[comp[i]] = ids[2 * i];
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = 1;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = 0;
        comp.push_back(w);
      } while (w != v);
      resolve_component(comp);
    }
  };
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (index[v] < 0) dfs(v);

  for (std::size_t v = 0; v < nodes.size(); ++v)
    gen_states_[nodes[v].layer][spec_.layers[nodes[v].layer].gens[nodes[v].idx].name] = *state[v];
}

void Group::build_families(std::size_t k) {
  Layer& layer = layers_[k];
  const auto& ls = spec_.layers[k];
  StatePool& pool = *pool_;
  const int phase = layer.phase;
  const auto m = static_cast<std::size_t>(shape().arity_of_phase(phase));

  // named generators of this layer
  std::vector<const GenSpec*> named;
  if (k == 0 && !spec_.generators.empty()) {
    for (const auto& n : spec_.generators) {
      auto it = std::find_if(ls.gens.begin(), ls.gens.end(), [&](const GenSpec& g) { return g.name == n; });
      if (it == ls.gens.end()) throw ValidationError("unknown generator '" + n + "' in generating set");
      named.push_back(&*it);
    }
  } else {
    for (const auto& g : ls.gens) named.push_back(&g);
  }
  for (const auto* g : named) layer.named_names.push_back(g->name);
  std::vector<StateId> named_state;
  for (const auto* g : named) named_state.push_back(gen_states_[k].at(g->name));

  std::vector<int> assigned(named.size(), -1);  // family index
  auto elem_index = [&](const Family& f, StateId s) -> std::optional<std::uint32_t> {
    auto it = std::find(f.elements.begin(), f.elements.end(), s);
    if (it == f.elements.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - f.elements.begin());
  };
  auto add_finite = [&](FamilyKind kind, std::vector<StateId> elems) {
    Family f;
    f.kind = kind;
    f.elements = std::move(elems);
    std::unordered_map<StateId, std::uint32_t> idx;
    for (std::uint32_t i = 0; i < f.elements.size(); ++i) idx[f.elements[i]] = i;
    f.table.assign(f.elements.size(), std::vector<std::uint32_t>(f.elements.size()));
    for (std::uint32_t i = 0; i < f.elements.size(); ++i)
      for (std::uint32_t j = 0; j < f.elements.size(); ++j)
        f.table[i][j] = idx.at(pool.compose(f.elements[i], f.elements[j]));
    layer.families.push_back(std::move(f));
    return layer.families.size() - 1;
  };
  auto claim = [&](std::size_t fam) {
    for (std::size_t i = 0; i < named.size(); ++i)
      if (assigned[i] < 0 && elem_index(layer.families[fam], named_state[i])) assigned[i] = static_cast<int>(fam);
  };

  // rooted family
  {
    std::vector<Perm> gens;
    for (std::size_t i = 0; i < named.size(); ++i)
      if (!named[i]->recursive) gens.push_back(pool.node(named_state[i]).root);
    if (!gens.empty()) {
      auto perms = perm_closure(gens, m, 40320);
      std::vector<StateId> elems{pool.identity(phase)};
      for (const auto& p : perms)
        if (!p.is_identity()) elems.push_back(pool.rooted(phase, p));
      claim(add_finite(FamilyKind::Rooted, std::move(elems)));
    }
  }
  // declared families
  for (const auto& fam : ls.families) {
    std::vector<StateId> gens;
    for (const auto& n : fam) gens.push_back(gen_states_[k].at(n));
    auto elems = state_closure(pool, phase, gens, 4096);
    if (!elems) throw ValidationError("declared family is not a small finite group");
    bool level_stab = std::all_of(gens.begin(), gens.end(), [&](StateId s) { return pool.node(s).root.is_identity(); });
    claim(add_finite(level_stab ? FamilyKind::Directed : FamilyKind::Cyclic, std::move(*elems)));
  }
  // auto-detected directed family
  {
    std::vector<StateId> gens;
    for (std::size_t i = 0; i < named.size(); ++i)
      if (assigned[i] < 0 && named[i]->recursive && pool.node(named_state[i]).root.is_identity() &&
          !pool.is_identity(named_state[i]))
        gens.push_back(named_state[i]);
    if (!gens.empty()) {
      if (auto elems = state_closure(pool, phase, gens, kFamilyCap)) claim(add_finite(FamilyKind::Directed, std::move(*elems)));
    }
  }
  // leftovers: cyclic when of small finite order, otherwise free
  for (std::size_t i = 0; i < named.size(); ++i) {
    if (assigned[i] >= 0) continue;
    StateId s = named_state[i];
    if (pool.is_identity(s)) throw ValidationError("generator '" + named[i]->name + "' is the identity");
    if (auto elems = state_closure(pool, phase, {s}, kFamilyCap)) {
      claim(add_finite(FamilyKind::Cyclic, std::move(*elems)));
      continue;
    }
    Family f;
    f.kind = FamilyKind::Free;
    f.elements = {pool.identity(phase), s, pool.invert(s)};
    layer.families.push_back(std::move(f));
    assigned[i] = static_cast<int>(layer.families.size() - 1);
  }

  // symbols
  for (std::uint32_t fi = 0; fi < layer.families.size(); ++fi) {
    Family& f = layer.families[fi];
    f.symbol.assign(f.elements.size(), 0);
    // shortest spellings over the named members of this family
    std::vector<std::optional<FreeWord>> spell(f.elements.size());
    spell[0] = FreeWord{};
    if (f.kind == FamilyKind::Free) {
      std::uint32_t gi = 0;
      for (std::size_t i = 0; i < named.size(); ++i)
        if (assigned[i] == static_cast<int>(fi)) gi = static_cast<std::uint32_t>(i);
      spell[1] = FreeWord{Letter{gi, false}};
      spell[2] = FreeWord{Letter{gi, true}};
    } else {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> gens;  // (named index, element)
      for (std::size_t i = 0; i < named.size(); ++i)
        if (assigned[i] == static_cast<int>(fi))
          gens.push_back({static_cast<std::uint32_t>(i), *elem_index(f, named_state[i])});
      std::vector<std::uint32_t> queue{0};
      for (std::size_t h = 0; h < queue.size(); ++h) {
        for (auto [gi, ge] : gens) {
          std::uint32_t x = f.table[queue[h]][ge];
          if (!spell[x]) {
            FreeWord w = *spell[queue[h]];
            w.push_back(Letter{gi, false});
            spell[x] = w;
            queue.push_back(x);
          }
        }
      }
    }
    for (std::uint32_t e = 1; e < f.elements.size(); ++e) {
      if (!spell[e]) throw ValidationError("family element not reachable from its named generators");
      Symbol s;
      s.state = f.elements[e];
      s.family = fi;
      s.element = e;
      s.root = pool.node(s.state).root;
      s.spelling = *spell[e];
      s.named = s.spelling.size() == 1 && !s.spelling[0].inv;
      s.name = s.named ? layer.named_names[s.spelling[0].gen] : format_free_word(s.spelling, layer.named_names);
      f.symbol[e] = static_cast<std::uint32_t>(layer.symbols.size());
      layer.by_state.emplace(s.state, f.symbol[e]);
      layer.symbols.push_back(std::move(s));
    }
    for (std::uint32_t e = 1; e < f.elements.size(); ++e) {
      std::uint32_t inv = 0;
      if (f.kind == FamilyKind::Free) {
        inv = 3 - e;
      } else {
        for (std::uint32_t j = 1; j < f.elements.size(); ++j)
          if (f.table[e][j] == 0) inv = j;
      }
      layer.symbols[f.symbol[e]].inverse = f.symbol[inv];
    }
  }
  for (std::size_t i = 0; i < named.size(); ++i) {
    std::uint32_t sym = layer.by_state.at(named_state[i]);
    layer.named.push_back(sym);
    layer.by_name.emplace(named[i]->name, sym);
  }
  for (std::uint32_t s = 0; s < layer.symbols.size(); ++s) layer.by_name.emplace(layer.symbols[s].name, s);
}

void Group::build_sections() {
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    Layer& layer = layers_[k];
    const Layer& next = layers_[layer.next];
    const auto m = static_cast<std::size_t>(shape().arity_of_phase(layer.phase));
    std::vector<std::vector<Word>> named_sections(layer.named_names.size());
    for (std::size_t i = 0; i < layer.named_names.size(); ++i) {
      const auto& specs = spec_.layers[k].gens;
      const GenSpec& g = *std::find_if(specs.begin(), specs.end(),
                                       [&](const GenSpec& x) { return x.name == layer.named_names[i]; });
      auto& out = named_sections[i];
      out.assign(m, {});
      if (!g.recursive) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const Entry& e = g.entries[j];
        if (e.gen.empty() || e.power == 0) continue;
        auto it = next.by_name.find(e.gen);
        if (it == next.by_name.end() || !next.symbols[it->second].named)
          throw ValidationError("section of '" + g.name + "' uses '" + e.gen + "', which is outside the generating set");
        std::uint32_t s = e.power > 0 ? it->second : next.symbols[it->second].inverse;
        Word w(static_cast<std::size_t>(std::abs(e.power)), s);
        out[j] = reduce(w, layer.next);
      }
    }
    // every symbol from its spelling: (fg)_u = f_u g_{u^f}, (f^-1)_u = (f_{u^{f^-1}})^-1
    for (auto& s : layer.symbols) {
      s.sections.assign(m, {});
      for (std::uint32_t u = 0; u < m; ++u) {
        Word acc;
        std::uint32_t pos = u;
        for (const Letter& l : s.spelling) {
          const Symbol& g = layer.symbols[layer.named[l.gen]];
          if (!l.inv) {
            const Word& piece = named_sections[l.gen][pos];
            acc.insert(acc.end(), piece.begin(), piece.end());
            pos = g.root[pos];
          } else {
            std::uint32_t pre = g.root.inverse()[pos];
            Word piece = inverse(named_sections[l.gen][pre], layer.next);
            acc.insert(acc.end(), piece.begin(), piece.end());
            pos = pre;
          }
        }
        s.sections[u] = reduce(acc, layer.next);
      }
    }
  }
}

std::uint32_t Group::symbol(const std::string& name, std::size_t layer) const {
  const Layer& l = layers_.at(layer);
  auto it = l.by_name.find(name);
  if (it == l.by_name.end()) throw ValidationError("unknown symbol '" + name + "' in " + spec_.name);
  return it->second;
}

StateId Group::state(const std::string& name, std::size_t layer) const {
  auto it = gen_states_.at(layer).find(name);
  if (it != gen_states_.at(layer).end()) return it->second;
  return layers_.at(layer).symbols[symbol(name, layer)].state;
}

std::vector<StateId> Group::generating_states() const {
  std::vector<StateId> out;
  for (auto s : gen_set_) out.push_back(layers_[0].symbols[s].state);
  return out;
}

Word Group::reduce(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  Word out;
  out.reserve(w.size());
  for (std::uint32_t s : w) {
    const Symbol& sym = l.symbols.at(s);
    if (!out.empty()) {
      const Symbol& top = l.symbols[out.back()];
      if (top.family == sym.family) {
        const Family& f = l.families[sym.family];
        if (f.finite()) {
          std::uint32_t e = f.table[top.element][sym.element];
          out.pop_back();
          if (e != 0) out.push_back(f.symbol[e]);
          continue;
        }
        if (top.inverse == s) {
          out.pop_back();
          continue;
        }
      }
    }
    out.push_back(s);
  }
  return out;
}

Word Group::cyclic_reduce(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  Word cur = reduce(w, layer);
  while (cur.size() >= 2) {
    const Symbol& first = l.symbols[cur.front()];
    const Symbol& last = l.symbols[cur.back()];
    bool merge = first.family == last.family &&
                 (l.families[first.family].finite() || last.inverse == cur.front());
    if (!merge) break;
    Word next(cur.begin() + 1, cur.end());
    next.push_back(cur.front());
    cur = reduce(next, layer);
  }
  return cur;
}

Word Group::inverse(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(l.symbols[*it].inverse);
  return out;
}

Word Group::concat(const Word& x, const Word& y, std::size_t layer) const {
  Word w = x;
  w.insert(w.end(), y.begin(), y.end());
  return reduce(w, layer);
}

Word Group::power(const Word& w, long long k, std::size_t layer) const {
  Word base = k < 0 ? inverse(w, layer) : w;
  Word out;
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
  return reduce(out, layer);
}

Word Group::conjugate(const Word& w, const Word& by, std::size_t layer) const {
  Word out = inverse(by, layer);
  out.insert(out.end(), w.begin(), w.end());
  out.insert(out.end(), by.begin(), by.end());
  return reduce(out, layer);
}

Word Group::from_free(const FreeWord& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  Word out;
  out.reserve(w.size());
  for (const auto& x : w) {
    std::uint32_t s = l.named.at(x.gen);
    out.push_back(x.inv ? l.symbols[s].inverse : s);
  }
  return reduce(out, layer);
}

Word Group::parse(const std::string& text, std::size_t layer) const {
  return from_free(parse_free_word(text, layers_.at(layer).named_names), layer);
}

FreeWord Group::spell(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  FreeWord out;
  for (auto s : w) {
    const auto& sp = l.symbols[s].spelling;
    out.insert(out.end(), sp.begin(), sp.end());
  }
  return out;
}

std::string Group::format(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  if (w.empty()) return "1";
  bool spaced = std::any_of(l.named_names.begin(), l.named_names.end(), [](const std::string& n) { return n.size() > 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    // runs of a free letter print as powers; finite-family symbols print their spelling
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const Symbol& s = l.symbols[w[i]];
    std::string piece;
    if (l.families[s.family].kind == FamilyKind::Free) {
      FreeWord run(j - i, s.spelling[0]);
      piece = format_free_word(run, l.named_names);
    } else {
      j = i + 1;
      piece = format_free_word(s.spelling, l.named_names);
    }
    if (spaced && !out.empty()) out += ' ';
    out += piece;
    i = j;
  }
  return out;
}

StateId Group::eval(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  StateId acc = pool_->identity(l.phase);
  for (auto s : w) acc = pool_->compose(acc, l.symbols.at(s).state);
  return acc;
}

Perm Group::root_perm(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  Perm acc(static_cast<std::size_t>(shape().arity_of_phase(l.phase)));
  for (auto s : w) acc *= l.symbols.at(s).root;
  return acc;
}

Group::Decomposition Group::decompose(const Word& w, std::size_t layer) const {
  const Layer& l = layers_[layer];
  const auto m = static_cast<std::uint32_t>(shape().arity_of_phase(l.phase));
  Decomposition d;
  d.root = root_perm(w, layer);
  d.next_layer = l.next;
  d.sections.resize(m);
  for (std::uint32_t u = 0; u < m; ++u) {
    Word acc;
    std::uint32_t pos = u;
    for (auto s : w) {
      const Symbol& sym = l.symbols[s];
      const Word& piece = sym.sections[pos];
      acc.insert(acc.end(), piece.begin(), piece.end());
      pos = sym.root[pos];
    }
    d.sections[u] = reduce(acc, l.next);
  }
  return d;
}

Word Group::section_word(const Word& w, const Vertex& u, std::size_t layer) const {
  Word cur = reduce(w, layer);
  std::size_t k = layer;
  for (int x : u) {
    auto d = decompose(cur, k);
    if (x < 0 || static_cast<std::size_t>(x) >= d.sections.size()) throw ValidationError("vertex letter out of range");
    cur = std::move(d.sections[static_cast<std::size_t>(x)]);
    k = d.next_layer;
  }
  return cur;
}

}  // namespace tg
