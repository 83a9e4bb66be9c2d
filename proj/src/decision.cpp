#include "tg/decision.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_set>

#include "tg/errors.hpp"

namespace tg {

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool mul_overflows(std::uint64_t a, std::uint64_t b) { return a && b > UINT64_MAX / a; }

// Every vertex of length len below a vertex of the given phase.
std::vector<Vertex> all_vertices(const TreeShape& sh, int phase, std::size_t len) {
  std::vector<Vertex> out;
  std::size_t n = sh.level_size(len, phase);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(vertex_from_index(sh, len, i, phase));
  return out;
}

// Words of length <= len over the symbols of a layer, shortest first.
std::vector<Word> short_words(const Group& g, std::size_t layer, std::size_t len) {
  std::vector<Word> out{{}};
  std::size_t begin = 0;
  const auto nsym = static_cast<std::uint32_t>(g.layer(layer).symbols.size());
  for (std::size_t l = 1; l <= len; ++l) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::uint32_t s = 0; s < nsym; ++s) {
        Word w = out[i];
        w.push_back(s);
        if (g.reduce(w, layer).size() == l) out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace

Decider::Decider(const Group& g, std::size_t visit_cap) : g_(g), cap_(visit_cap) {}

void Decider::clear() {
  std::lock_guard lk(mu_);
  trivial_memo_.clear();
}

bool Decider::trivial_rec(std::size_t layer, const Word& w, std::map<Key, char>& open,
                          std::map<Key, bool>& tentative, std::size_t& visits) {
  if (w.empty()) return true;
  Key key{layer, w};
  {
    std::lock_guard lk(mu_);
    auto it = trivial_memo_.find(key);
    if (it != trivial_memo_.end()) return it->second;
  }
  if (auto it = tentative.find(key); it != tentative.end()) return it->second;
  if (open.count(key)) return true;  // revisit: assume trivial, settled by the caller
  if (!g_.root_perm(w, layer).is_identity()) {
    std::lock_guard lk(mu_);
    trivial_memo_[key] = false;
    return false;
  }
  if (++visits > cap_) throw ResourceBound("word problem exceeded the section cap");
  open.emplace(key, 1);
  auto d = g_.decompose(w, layer);
  bool ok = true;
  for (const auto& s : d.sections) {
    if (!trivial_rec(d.next_layer, s, open, tentative, visits)) {
      ok = false;
      break;
    }
  }
  open.erase(key);
  if (!ok) {
    std::lock_guard lk(mu_);
    trivial_memo_[key] = false;
  } else {
    tentative[key] = true;
  }
  return ok;
}

bool Decider::is_trivial(const Word& w, std::size_t layer) {
  Word r = g_.reduce(w, layer);
  std::map<Key, char> open;
  std::map<Key, bool> tentative;
  std::size_t visits = 0;
  bool res = trivial_rec(layer, r, open, tentative, visits);
  if (res) {
    // the visited closure has trivial roots everywhere, so all of it is trivial
    std::lock_guard lk(mu_);
    for (auto& [k, v] : tentative) trivial_memo_[k] = v;
  }
  return res;
}

bool Decider::equal(const Word& x, const Word& y, std::size_t layer) {
  return is_trivial(g_.concat(x, g_.inverse(y, layer), layer), layer);
}

bool is_trivial_automaton(const Group& g, const Word& w, std::size_t layer) {
  return g.pool().is_identity(g.eval(w, layer));
}

std::pair<Word, Word> normalize_conjugate(const Group& g, const Word& w, std::size_t layer) {
  const Layer& l = g.layer(layer);
  Word cur = g.reduce(w, layer);
  Word conj;
  while (cur.size() >= 2) {
    const Symbol& first = l.symbols[cur.front()];
    const Symbol& last = l.symbols[cur.back()];
    bool merge = first.family == last.family && (l.families[first.family].finite() || last.inverse == cur.front());
    if (!merge) break;
    conj.push_back(cur.front());
    Word next(cur.begin() + 1, cur.end());
    next.push_back(cur.front());
    cur = g.reduce(next, layer);
  }
  if (cur.size() >= 2) {
    std::size_t best = 0;
    const std::size_t n = cur.size();
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        auto x = cur[(r + i) % n], y = cur[(best + i) % n];
        if (x != y) {
          if (x < y) best = r;
          break;
        }
      }
    }
    if (best) {
      conj.insert(conj.end(), cur.begin(), cur.begin() + static_cast<long>(best));
      std::rotate(cur.begin(), cur.begin() + static_cast<long>(best), cur.end());
    }
  }
  return {cur, g.reduce(conj, layer)};
}

// ---------------------------------------------------------------- orders

namespace {

struct OrderSearch {
  const Group& g;
  std::size_t bound;
  std::size_t visits = 0;

  struct Step {
    std::size_t layer;
    Word w;
    std::uint64_t mult;  // multiplier on the edge into this node
  };
  std::vector<Step> path;
  std::map<std::pair<std::size_t, Word>, std::size_t> on_path;
  std::map<std::pair<std::size_t, Word>, std::uint64_t> memo;

  enum class Status { Ok, Infinite, Overflow };
  struct R {
    Status st = Status::Ok;
    std::uint64_t val = 1;
    std::size_t low = SIZE_MAX;
  };
  // set when an expanding cycle is found
  std::size_t cycle_start = 0;
  std::uint64_t cycle_last_mult = 1;
  std::vector<Step> cycle_path;

  R rec(std::size_t layer, const Word& x, std::uint64_t mult) {
    if (x.empty()) return {};
    auto key = std::make_pair(layer, x);
    if (auto it = memo.find(key); it != memo.end()) return {Status::Ok, it->second, SIZE_MAX};
    if (auto it = on_path.find(key); it != on_path.end()) {
      std::uint64_t prod = mult;
      for (std::size_t i = it->second + 1; i < path.size(); ++i) {
        if (mul_overflows(prod, path[i].mult)) return {Status::Overflow, 0, 0};
        prod *= path[i].mult;
      }
      if (prod == 1) return {Status::Ok, 1, it->second};
      cycle_start = it->second;
      cycle_last_mult = mult;
      cycle_path = path;
      return {Status::Infinite, 0, 0};
    }
    if (++visits > bound) return {Status::Overflow, 0, 0};
    const std::size_t depth = path.size();
    path.push_back({layer, x, mult});
    on_path.emplace(key, depth);

    auto d = g.decompose(x, layer);
    R out;
    std::vector<char> seen(d.root.degree(), 0);
    for (std::uint32_t i = 0; i < d.root.degree(); ++i) {
      if (seen[i]) continue;
      Word f;
      std::uint64_t len = 0;
      for (std::uint32_t j = i; !seen[j]; j = d.root[j]) {
        seen[j] = 1;
        f.insert(f.end(), d.sections[j].begin(), d.sections[j].end());
        ++len;
      }
      auto [y, c] = normalize_conjugate(g, f, d.next_layer);
      R r = rec(d.next_layer, y, len);
      if (r.st != Status::Ok) {
        out = r;
        break;
      }
      std::uint64_t term = len * r.val;
      if (mul_overflows(len, r.val)) {
        out = {Status::Overflow, 0, 0};
        break;
      }
      std::uint64_t q = out.val / std::gcd(out.val, term);
      if (mul_overflows(q, term)) {
        out = {Status::Overflow, 0, 0};
        break;
      }
      out.val = q * term;
      out.low = std::min(out.low, r.low);
    }
    path.pop_back();
    on_path.erase(key);
    if (out.st == Status::Ok) {
      if (out.low >= depth) {
        memo[key] = out.val;
        out.low = SIZE_MAX;
      }
    }
    return out;
  }
};

// Looks for v fixed by x^power with section(x^power, v) = c^-1 target c, c a short word.
std::optional<std::tuple<Vertex, Word, int>> find_section_match(const Group& g, StateId x, std::uint64_t power,
                                                                std::size_t len, std::size_t target_layer,
                                                                StateId target, bool allow_inverse) {
  StatePool& pool = g.pool();
  StateId p = pool.power(x, static_cast<long long>(power));
  StateId inv = pool.invert(target);
  auto verts = all_vertices(g.shape(), pool.node(x).phase, len);
  std::vector<std::pair<Vertex, StateId>> fixed;
  for (auto& v : verts)
    if (pool.act(p, v) == v) fixed.push_back({v, pool.section(p, v)});
  for (const auto& [v, s] : fixed) {
    if (s == target) return std::make_tuple(v, Word{}, 1);
    if (allow_inverse && s == inv) return std::make_tuple(v, Word{}, -1);
  }
  for (const auto& c : short_words(g, target_layer, 4)) {
    if (c.empty()) continue;
    StateId cs = g.eval(c, target_layer);
    StateId ci = pool.invert(cs);
    StateId conj_t = pool.compose(pool.compose(ci, target), cs);
    StateId conj_i = pool.compose(pool.compose(ci, inv), cs);
    for (const auto& [v, s] : fixed) {
      if (s == conj_t) return std::make_tuple(v, c, 1);
      if (allow_inverse && s == conj_i) return std::make_tuple(v, c, -1);
    }
  }
  return std::nullopt;
}

}  // namespace

OrderResult Decider::order(const Word& w, std::size_t bound) {
  OrderResult res;
  Word g = g_.reduce(w);
  if (g.empty()) {
    res.kind = OrderResult::Kind::Finite;
    res.order = 1;
    return res;
  }
  auto [x0, c0] = normalize_conjugate(g_, g, 0);
  OrderSearch search{g_, bound, 0, {}, {}, {}, 0, 1, {}};
  auto r = search.rec(0, x0, 1);
  StatePool& pool = g_.pool();
  StateId gs = g_.eval(g);
  if (r.st == OrderSearch::Status::Overflow) {
    res.note = "recursion bound reached";
    return res;
  }
  if (r.st == OrderSearch::Status::Ok) {
    // verify against the automaton: g^k = 1 and g^(k/p) != 1
    if (!pool.is_identity(pool.power(gs, static_cast<long long>(r.val)))) {
      res.note = "decomposition order failed verification";
      return res;
    }
    for (auto p : prime_factors(r.val)) {
      if (pool.is_identity(pool.power(gs, static_cast<long long>(r.val / p)))) {
        res.note = "decomposition order is not minimal";
        return res;
      }
    }
    res.kind = OrderResult::Kind::Finite;
    res.order = r.val;
    return res;
  }

  // expanding cycle: certify self-similarity of the node where it closes
  const auto& cp = search.cycle_path;
  const std::size_t j = search.cycle_start;
  InfiniteCertificate cert;
  cert.h = cp[j].w;
  cert.h_layer = cp[j].layer;
  std::uint64_t T = search.cycle_last_mult;
  for (std::size_t i = j + 1; i < cp.size(); ++i) T *= cp[i].mult;
  StateId hs = g_.eval(cert.h, cert.h_layer);
  auto m = find_section_match(g_, hs, T, cp.size() - j, cert.h_layer, hs, true);
  if (!m) {
    res.note = "expanding cycle found but no certificate located";
    return res;
  }
  cert.power = T;
  std::tie(cert.vertex, cert.conj, cert.sign) = *m;
  // descent from g to h
  std::uint64_t K = 1;
  for (std::size_t i = 1; i <= j; ++i) K *= cp[i].mult;
  if (j == 0) {
    cert.descent_power = 1;
    cert.descent_conj = g_.inverse(c0);
  } else {
    auto dm = find_section_match(g_, gs, K, j, cert.h_layer, hs, false);
    if (!dm) {
      res.note = "expanding section found but descent not certified";
      return res;
    }
    cert.descent_power = K;
    cert.descent_vertex = std::get<0>(*dm);
    cert.descent_conj = std::get<1>(*dm);
  }
  if (!verify(g, cert)) {
    res.note = "certificate failed verification";
    return res;
  }
  res.kind = OrderResult::Kind::Infinite;
  res.certificate = std::move(cert);
  return res;
}

bool Decider::verify(const Word& g, const InfiniteCertificate& c) const {
  StatePool& pool = g_.pool();
  if (c.power < 2) return false;
  StateId h = g_.eval(c.h, c.h_layer);
  if (pool.is_identity(h)) return false;
  auto conj = [&](StateId x, const Word& by) {
    StateId b = g_.eval(by, c.h_layer);
    return pool.compose(pool.compose(pool.invert(b), x), b);
  };
  StateId gs = g_.eval(g);
  StateId gp = pool.power(gs, static_cast<long long>(c.descent_power));
  if (pool.act(gp, c.descent_vertex) != c.descent_vertex) return false;
  if (pool.section(gp, c.descent_vertex) != conj(h, c.descent_conj)) return false;
  StateId hp = pool.power(h, static_cast<long long>(c.power));
  if (pool.act(hp, c.vertex) != c.vertex) return false;
  StateId target = c.sign > 0 ? h : pool.invert(h);
  return pool.section(hp, c.vertex) == conj(target, c.conj);
}

// ---------------------------------------------------------------- balls and growth

Ball ball(const Group& g, std::size_t radius, std::size_t cap) {
  Ball b;
  StatePool& pool = g.pool();
  std::unordered_set<StateId> seen;
  b.elements.push_back({});
  b.states.push_back(pool.identity(g.layer(0).phase));
  seen.insert(b.states[0]);
  b.sphere_sizes.push_back(1);
  std::size_t begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::size_t end = b.elements.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (auto s : g.generating_set()) {
        StateId x = pool.compose(b.states[i], g.layer(0).symbols[s].state);
        if (!seen.insert(x).second) continue;
        if (b.elements.size() >= cap) throw ResourceBound("ball exceeds cap");
        Word w = b.elements[i];
        w.push_back(s);
        b.elements.push_back(g.reduce(w));
        b.states.push_back(x);
      }
    }
    b.sphere_sizes.push_back(b.elements.size() - end);
    begin = end;
  }
  return b;
}

std::uint64_t torsion_growth(const Group& g, std::size_t radius) {
  Decider dec(g);
  auto b = ball(g, radius);
  std::uint64_t best = 1;
  for (const auto& w : b.elements) {
    auto r = dec.order(w);
    if (r.finite()) best = std::max(best, r.order);
  }
  return best;
}

EtaWeights eta_weights(int r) {
  if (r < 3) throw ValidationError("eta weights need r >= 3");
  auto f = [r](double x) { return std::pow(x, r) + std::pow(x, r - 1) + std::pow(x, r - 2) - 2; };
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  EtaWeights out;
  out.eta = (lo + hi) / 2;
  double er = std::pow(out.eta, r);
  out.tau.push_back(1 - er);
  for (int i = 1; i <= r; ++i) out.tau.push_back(er + std::pow(out.eta, r - i) - 1);
  return out;
}

std::unordered_map<StateId, double> weighted_norms(const Group& g, const std::vector<double>& weights,
                                                   double max_weight) {
  const auto& gens = g.generating_set();
  if (weights.size() != gens.size()) throw ValidationError("one weight per generator required");
  StatePool& pool = g.pool();
  std::unordered_map<StateId, double> dist;
  using Item = std::pair<double, StateId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  StateId id = pool.identity(g.layer(0).phase);
  dist[id] = 0;
  pq.push({0, id});
  std::unordered_set<StateId> done;
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (!done.insert(x).second) continue;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      double nd = d + weights[i];
      if (nd > max_weight + 1e-12) continue;
      StateId y = pool.compose(x, g.layer(0).symbols[gens[i]].state);
      auto it = dist.find(y);
      if (it == dist.end() || nd < it->second - 1e-12) {
        dist[y] = nd;
        pq.push({nd, y});
      }
    }
  }
  return dist;
}

std::optional<std::vector<Word>> level_sections(const Group& g, const Word& w, std::size_t r) {
  std::vector<std::pair<std::size_t, Word>> cur{{0, g.reduce(w)}};
  for (std::size_t lv = 0; lv < r; ++lv) {
    std::vector<std::pair<std::size_t, Word>> next;
    for (const auto& [layer, x] : cur) {
      auto d = g.decompose(x, layer);
      if (!d.root.is_identity()) return std::nullopt;
      for (auto& s : d.sections) next.push_back({d.next_layer, std::move(s)});
    }
    cur = std::move(next);
  }
  std::vector<Word> out;
  for (auto& [layer, x] : cur) out.push_back(std::move(x));
  return out;
}

Portrait<SectionWord> word_portrait(const Group& g, const Word& w, std::size_t depth, std::size_t node_cap) {
  Portrait<SectionWord> out;
  struct Item {
    std::size_t node, level, layer;
    Word w;
  };
  std::vector<Item> work{{0, 0, 0, g.reduce(w)}};
  out.nodes.push_back({});
  while (!work.empty()) {
    Item it = std::move(work.back());
    work.pop_back();
    bool stop = depth ? it.level >= depth : it.w.size() <= 1;
    if (!depth && it.level > 64) throw ResourceBound("canonical portrait does not terminate");
    if (stop) {
      out.nodes[it.node].payload = {it.layer, it.w};
      continue;
    }
    auto d = g.decompose(it.w, it.layer);
    out.nodes[it.node].leaf = false;
    out.nodes[it.node].perm = d.root;
    for (auto& s : d.sections) {
      if (out.nodes.size() >= node_cap) throw ResourceBound("portrait exceeds node cap");
      std::size_t idx = out.nodes.size();
      out.nodes.push_back({});
      out.nodes[it.node].children.push_back(idx);
      work.push_back({idx, it.level + 1, d.next_layer, std::move(s)});
    }
  }
  return out;
}

std::size_t canonical_portrait_depth(const Group& g, const Word& w) {
  std::function<std::size_t(std::size_t, const Word&, std::size_t)> rec = [&](std::size_t layer, const Word& x,
                                                                                std::size_t lvl) -> std::size_t {
    if (x.size() <= 1) return 0;
    if (lvl > 64) throw ResourceBound("canonical portrait does not terminate");
    auto d = g.decompose(x, layer);
    std::size_t best = 0;
    for (const auto& s : d.sections) best = std::max(best, rec(d.next_layer, s, lvl + 1));
    return best + 1;
  };
  return rec(0, g.reduce(w), 0);
}

}  // namespace tg
