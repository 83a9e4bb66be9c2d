#include "tg/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <deque>
#include <unordered_set>

#include "tg/errors.hpp"
#include "tg/kernels.hpp"

namespace tg {

// ---------------------------------------------------------------- TreeShape

TreeShape::TreeShape(std::vector<int> prefix, std::vector<int> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw ValidationError("branching cycle must be nonempty");
  for (int m : prefix_)
    if (m < 2) throw ValidationError("branching index below 2");
  for (int m : cycle_)
    if (m < 2) throw ValidationError("branching index below 2");
}

int TreeShape::phase_of_level(std::size_t level) const {
  if (level < prefix_.size()) return static_cast<int>(level);
  return static_cast<int>(prefix_.size() + (level - prefix_.size()) % cycle_.size());
}

int TreeShape::next_phase(int phase) const {
  int n = phase + 1;
  return n < phase_count() ? n : static_cast<int>(prefix_.size());
}

int TreeShape::arity_of_phase(int phase) const {
  auto p = static_cast<std::size_t>(phase);
  return p < prefix_.size() ? prefix_[p] : cycle_[p - prefix_.size()];
}

TreeShape TreeShape::shifted(std::size_t k) const {
  if (k < prefix_.size())
    return TreeShape(std::vector<int>(prefix_.begin() + static_cast<long>(k), prefix_.end()), cycle_);
  std::size_t r = (k - prefix_.size()) % cycle_.size();
  std::vector<int> c(cycle_.begin() + static_cast<long>(r), cycle_.end());
  c.insert(c.end(), cycle_.begin(), cycle_.begin() + static_cast<long>(r));
  return TreeShape({}, std::move(c));
}

std::size_t TreeShape::level_size(std::size_t n, int phase) const {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    auto m = static_cast<std::size_t>(arity_of_phase(phase));
    if (total > (std::size_t{1} << 40) / m) throw ResourceBound("level too large");
    total *= m;
    phase = next_phase(phase);
  }
  return total;
}

// ---------------------------------------------------------------- vertices

Vertex parse_vertex(const std::string& text) {
  Vertex v;
  bool separated = text.find_first_of(" ,.") != std::string::npos;
  if (separated) {
    std::size_t i = 0;
    while (i < text.size()) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (text[i] != ' ' && text[i] != ',' && text[i] != '.') throw ParseError("bad vertex character");
        ++i;
        continue;
      }
      int x = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) x = x * 10 + (text[i++] - '0');
      if (x < 1) throw ParseError("vertex letters are 1-based");
      v.push_back(x - 1);
    }
    return v;
  }
  for (char c : text) {
    if (c < '1' || c > '9') throw ParseError(std::string("bad vertex letter '") + c + "'");
    v.push_back(c - '1');
  }
  return v;
}

std::string vertex_to_string(const Vertex& v) {
  bool wide = std::any_of(v.begin(), v.end(), [](int x) { return x >= 9; });
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (wide && i) s += ',';
    s += std::to_string(v[i] + 1);
  }
  return s;
}

std::size_t vertex_index(const TreeShape& shape, const Vertex& v, int phase) {
  std::size_t idx = 0;
  for (int x : v) {
    int m = shape.arity_of_phase(phase);
    if (x < 0 || x >= m) throw ValidationError("vertex letter out of range");
    idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(x);
    phase = shape.next_phase(phase);
  }
  return idx;
}

Vertex vertex_from_index(const TreeShape& shape, std::size_t n, std::size_t index, int phase) {
  std::vector<int> arities(n);
  for (std::size_t i = 0; i < n; ++i) {
    arities[i] = shape.arity_of_phase(phase);
    phase = shape.next_phase(phase);
  }
  Vertex v(n);
  for (std::size_t i = n; i-- > 0;) {
    v[i] = static_cast<int>(index % static_cast<std::size_t>(arities[i]));
    index /= static_cast<std::size_t>(arities[i]);
  }
  return v;
}

void throw_resource_bound_portrait() { throw ResourceBound("portrait exceeds node cap"); }

// ---------------------------------------------------------------- StatePool

namespace {

void put_u32(std::string& s, std::uint32_t x) {
  char buf[4];
  std::memcpy(buf, &x, 4);
  s.append(buf, 4);
}

std::string node_key(int phase, const Perm& root, const std::vector<StateId>& kids) {
  std::string s;
  s.reserve(8 + 4 * (root.degree() + kids.size()));
  put_u32(s, static_cast<std::uint32_t>(phase));
  for (auto y : root.images()) put_u32(s, y);
  for (auto k : kids) put_u32(s, k);
  return s;
}

}  // namespace

StatePool::StatePool(TreeShape shape)
    : shape_(std::move(shape)), chunks_(new std::atomic<StateNode*>[kMaxChunks]) {
  for (std::size_t i = 0; i < kMaxChunks; ++i) chunks_[i].store(nullptr, std::memory_order_relaxed);
  // identity states: one per phase, cyclic through the periodic part
  std::vector<SysNode> sys(static_cast<std::size_t>(shape_.phase_count()));
  for (int p = 0; p < shape_.phase_count(); ++p) {
    auto& n = sys[static_cast<std::size_t>(p)];
    n.phase = p;
    n.root = Perm(static_cast<std::size_t>(shape_.arity_of_phase(p)));
    n.children.assign(static_cast<std::size_t>(shape_.arity_of_phase(p)),
                      SysRef::node(static_cast<std::uint32_t>(shape_.next_phase(p))));
  }
  identity_ = intern(sys);
}

StateId StatePool::push_locked(StateNode node) {
  std::size_t id = size_.load(std::memory_order_relaxed);
  std::size_t chunk = id >> kChunkBits;
  if (chunk >= kMaxChunks) throw ResourceBound("state pool exhausted");
  StateNode* block = chunks_[chunk].load(std::memory_order_relaxed);
  if (!block) {
    block = new StateNode[std::size_t{1} << kChunkBits];
    chunks_[chunk].store(block, std::memory_order_release);
  }
  block[id & kChunkMask] = std::move(node);
  size_.store(id + 1, std::memory_order_release);
  return static_cast<StateId>(id);
}

void StatePool::check_node(int phase, const Perm& root, std::size_t nkids) const {
  if (phase < 0 || phase >= shape_.phase_count()) throw ShapeMismatch("phase out of range");
  auto m = static_cast<std::size_t>(shape_.arity_of_phase(phase));
  if (root.degree() != m || nkids != m) throw ShapeMismatch("state arity does not match the tree");
}

std::optional<StateId> StatePool::find_node_locked(int phase, const Perm& root,
                                                   const std::vector<StateId>& kids) const {
  auto it = node_index_.find(node_key(phase, root, kids));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

StateId StatePool::make_locked(int phase, Perm root, std::vector<StateId> kids) {
  check_node(phase, root, kids.size());
  int np = shape_.next_phase(phase);
  for (auto k : kids)
    if (node(k).phase != np) throw ShapeMismatch("section lives on the wrong shifted tree");
  std::string key = node_key(phase, root, kids);
  auto it = node_index_.find(key);
  if (it != node_index_.end()) return it->second;
  StateId id = push_locked(StateNode{phase, std::move(root), std::move(kids)});
  node_index_.emplace(std::move(key), id);
  return id;
}

StateId StatePool::make(int phase, Perm root, std::vector<StateId> children) {
  std::unique_lock lock(mu_);
  return make_locked(phase, std::move(root), std::move(children));
}

StateId StatePool::rooted(int phase, const Perm& root) {
  int np = shape_.next_phase(phase);
  std::vector<StateId> kids(root.degree(), identity_[static_cast<std::size_t>(np)]);
  return make(phase, root, std::move(kids));
}

std::vector<StateId> StatePool::intern(const std::vector<SysNode>& sys) {
  const std::size_t n = sys.size();
  std::unique_lock lock(mu_);
  for (const auto& s : sys) {
    check_node(s.phase, s.root, s.children.size());
    int np = shape_.next_phase(s.phase);
    for (const auto& c : s.children) {
      int cp = c.local ? (c.index < n ? sys[c.index].phase : -1) : node(c.index).phase;
      if (c.local && c.index >= n) throw ShapeMismatch("dangling system reference");
      if (!c.local && c.index >= size()) throw ShapeMismatch("unknown state");
      if (cp != np) throw ShapeMismatch("section lives on the wrong shifted tree");
    }
  }

  std::vector<StateId> result(n, 0);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0), done(n, 0);
  std::vector<std::uint32_t> stack;
  int counter = 0;

  auto process_scc = [&](const std::vector<std::uint32_t>& members) {
    std::unordered_map<std::uint32_t, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < members.size(); ++i) pos[members[i]] = i;
    bool self_loop = false;
    for (const auto& c : sys[members[0]].children)
      if (c.local && c.index == members[0]) self_loop = true;
    if (members.size() == 1 && !self_loop) {
      const auto& s = sys[members[0]];
      std::vector<StateId> kids;
      kids.reserve(s.children.size());
      for (const auto& c : s.children) kids.push_back(c.local ? result[c.index] : c.index);
      result[members[0]] = make_locked(s.phase, s.root, std::move(kids));
      done[members[0]] = 1;
      return;
    }
    // Moore refinement inside the component
    const std::size_t k = members.size();
    std::vector<std::uint32_t> cls(k, 0);
    std::size_t nclasses = 0;
    for (int round = 0;; ++round) {
      std::unordered_map<std::string, std::uint32_t> sig_ids;
      std::vector<std::uint32_t> next(k);
      for (std::size_t i = 0; i < k; ++i) {
        const auto& s = sys[members[i]];
        std::string sig;
        put_u32(sig, static_cast<std::uint32_t>(s.phase));
        for (auto y : s.root.images()) put_u32(sig, y);
        if (round > 0) put_u32(sig, cls[i]);
        for (const auto& c : s.children) {
          if (c.local && pos.count(c.index)) {
            sig += 'L';
            put_u32(sig, round > 0 ? cls[pos[c.index]] : 0);
          } else {
            sig += 'E';
            put_u32(sig, c.local ? result[c.index] : c.index);
          }
        }
        auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<std::uint32_t>(sig_ids.size()));
        next[i] = it->second;
      }
      std::size_t count = sig_ids.size();
      cls = std::move(next);
      if (round > 0 && count == nclasses) break;
      nclasses = count;
    }
    // quotient automaton over classes
    std::vector<std::uint32_t> rep(nclasses, UINT32_MAX);
    for (std::uint32_t i = 0; i < k; ++i)
      if (rep[cls[i]] == UINT32_MAX) rep[cls[i]] = i;
    struct QNode {
      int phase;
      const Perm* root;
      std::vector<std::pair<bool, std::uint32_t>> kids;  // (internal, class or state)
    };
    std::vector<QNode> q(nclasses);
    for (std::size_t c = 0; c < nclasses; ++c) {
      const auto& s = sys[members[rep[c]]];
      q[c].phase = s.phase;
      q[c].root = &s.root;
      for (const auto& ch : s.children) {
        if (ch.local && pos.count(ch.index))
          q[c].kids.push_back({true, cls[pos[ch.index]]});
        else
          q[c].kids.push_back({false, ch.local ? result[ch.index] : ch.index});
      }
    }
    auto encode = [&](std::uint32_t start) {
      std::vector<std::int64_t> order(nclasses, -1);
      std::vector<std::uint32_t> bfs{start};
      order[start] = 0;
      std::string e;
      for (std::size_t h = 0; h < bfs.size(); ++h) {
        const auto& qn = q[bfs[h]];
        put_u32(e, static_cast<std::uint32_t>(qn.phase));
        for (auto y : qn.root->images()) put_u32(e, y);
        for (const auto& [internal, x] : qn.kids) {
          if (internal) {
            if (order[x] < 0) {
              order[x] = static_cast<std::int64_t>(bfs.size());
              bfs.push_back(x);
            }
            e += 'L';
            put_u32(e, static_cast<std::uint32_t>(order[x]));
          } else {
            e += 'E';
            put_u32(e, x);
          }
        }
      }
      return e;
    };
    std::vector<std::string> enc(nclasses);
    for (std::uint32_t c = 0; c < nclasses; ++c) enc[c] = encode(c);
    // An external child may sit inside an existing cyclic component that already
    // realises this one; the encodings then differ, so match by direct bisimulation.
    auto match_existing = [&]() -> std::optional<std::vector<StateId>> {
      std::unordered_set<std::uint32_t> groups;
      for (const auto& qn : q)
        for (const auto& [internal, x] : qn.kids)
          if (!internal) {
            auto g = scc_group_.find(x);
            if (g != scc_group_.end()) groups.insert(g->second);
          }
      for (auto g : groups) {
        for (StateId cand : scc_members_[g]) {
          std::vector<StateId> map(nclasses, UINT32_MAX);
          std::vector<std::uint32_t> todo{0};
          map[0] = cand;
          bool ok = true;
          for (std::size_t h = 0; ok && h < todo.size(); ++h) {
            const auto& qn = q[todo[h]];
            const StateNode& sn = node(map[todo[h]]);
            if (sn.phase != qn.phase || !(sn.root == *qn.root)) {
              ok = false;
              break;
            }
            for (std::size_t j = 0; j < qn.kids.size(); ++j) {
              auto [internal, x] = qn.kids[j];
              if (!internal) {
                if (sn.children[j] != x) ok = false;
              } else if (map[x] == UINT32_MAX) {
                map[x] = sn.children[j];
                todo.push_back(x);
              } else if (map[x] != sn.children[j]) {
                ok = false;
              }
            }
          }
          if (ok) return map;
        }
      }
      return std::nullopt;
    };
    std::vector<StateId> ids(nclasses);
    auto found = scc_index_.find(enc[0]);
    if (found != scc_index_.end()) {
      for (std::size_t c = 0; c < nclasses; ++c) {
        auto it = scc_index_.find(enc[c]);
        if (it == scc_index_.end()) throw std::logic_error("state pool lost minimality");
        ids[c] = it->second;
      }
    } else if (auto m = match_existing()) {
      ids = *m;
    } else {
      auto base = static_cast<StateId>(size());
      for (std::size_t c = 0; c < nclasses; ++c) ids[c] = base + static_cast<StateId>(c);
      for (std::size_t c = 0; c < nclasses; ++c) {
        StateNode nd;
        nd.phase = q[c].phase;
        nd.root = *q[c].root;
        for (const auto& [internal, x] : q[c].kids) nd.children.push_back(internal ? ids[x] : x);
        std::string key = node_key(nd.phase, nd.root, nd.children);
        StateId id = push_locked(std::move(nd));
        node_index_.emplace(std::move(key), id);
        scc_index_.emplace(enc[c], id);
        scc_group_.emplace(id, static_cast<std::uint32_t>(scc_members_.size()));
      }
      scc_members_.emplace_back(ids.begin(), ids.end());
    }
    for (std::size_t i = 0; i < k; ++i) {
      result[members[i]] = ids[cls[i]];
      done[members[i]] = 1;
    }
  };

  // iterative Tarjan
  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& kids = sys[f.v].children;
      if (f.next < kids.size()) {
        const SysRef c = kids[f.next++];
        if (!c.local) continue;
        std::uint32_t w = c.index;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> members;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          members.push_back(w);
        } while (w != v);
        process_scc(members);
      }
    }
  }
  return result;
}

StateId StatePool::compose(StateId f, StateId g) {
  if (is_identity(f)) return g;
  if (is_identity(g)) return f;
  if (node(f).phase != node(g).phase) throw ShapeMismatch("composing states of different phases");
  using Key = std::pair<StateId, StateId>;
  {
    std::lock_guard lk(memo_mu_);
    auto it = compose_memo_.find({f, g});
    if (it != compose_memo_.end()) return it->second;
  }
  std::unordered_map<Key, std::uint32_t, PairHash> local;
  std::vector<Key> pairs;
  std::vector<SysNode> sys;
  auto ref = [&](StateId x, StateId y) -> SysRef {
    if (is_identity(x)) return SysRef::state(y);
    if (is_identity(y)) return SysRef::state(x);
    {
      std::lock_guard lk(memo_mu_);
      auto it = compose_memo_.find({x, y});
      if (it != compose_memo_.end()) return SysRef::state(it->second);
    }
    auto [it, fresh] = local.emplace(Key{x, y}, static_cast<std::uint32_t>(pairs.size()));
    if (fresh) pairs.push_back({x, y});
    return SysRef::node(it->second);
  };
  ref(f, g);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    const StateNode& nx = node(x);
    const StateNode& ny = node(y);
    SysNode s;
    s.phase = nx.phase;
    s.root = nx.root * ny.root;
    s.children.reserve(nx.children.size());
    for (std::uint32_t j = 0; j < nx.children.size(); ++j)
      s.children.push_back(ref(nx.children[j], ny.children[nx.root[j]]));
    sys.push_back(std::move(s));
  }
  auto ids = intern(sys);
  std::lock_guard lk(memo_mu_);
  for (std::size_t i = 0; i < pairs.size(); ++i) compose_memo_.emplace(pairs[i], ids[i]);
  return ids[0];
}

StateId StatePool::invert(StateId f) {
  if (is_identity(f)) return f;
  {
    std::lock_guard lk(memo_mu_);
    auto it = invert_memo_.find(f);
    if (it != invert_memo_.end()) return it->second;
  }
  std::unordered_map<StateId, std::uint32_t> local;
  std::vector<StateId> states;
  auto ref = [&](StateId x) -> SysRef {
    if (is_identity(x)) return SysRef::state(x);
    auto [it, fresh] = local.emplace(x, static_cast<std::uint32_t>(states.size()));
    if (fresh) states.push_back(x);
    return SysRef::node(it->second);
  };
  ref(f);
  std::vector<SysNode> sys;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const StateNode& nx = node(states[i]);
    SysNode s;
    s.phase = nx.phase;
    s.root = nx.root.inverse();
    for (std::uint32_t j = 0; j < nx.children.size(); ++j) s.children.push_back(ref(nx.children[s.root[j]]));
    sys.push_back(std::move(s));
  }
  auto ids = intern(sys);
  std::lock_guard lk(memo_mu_);
  for (std::size_t i = 0; i < states.size(); ++i) {
    invert_memo_.emplace(states[i], ids[i]);
    invert_memo_.emplace(ids[i], states[i]);
  }
  return ids[0];
}

StateId StatePool::power(StateId f, long long k) {
  StateId base = k < 0 ? invert(f) : f;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  StateId acc = identity(node(f).phase);
  while (e) {
    if (e & 1) acc = compose(acc, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return acc;
}

Vertex StatePool::act(StateId f, const Vertex& u) const {
  Vertex out(u.size());
  StateId s = f;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const StateNode& nd = node(s);
    if (u[i] < 0 || static_cast<std::size_t>(u[i]) >= nd.root.degree()) throw ValidationError("vertex letter out of range");
    out[i] = static_cast<int>(nd.root[static_cast<std::uint32_t>(u[i])]);
    s = nd.children[static_cast<std::size_t>(u[i])];
  }
  return out;
}

StateId StatePool::section(StateId f, const Vertex& u) const {
  StateId s = f;
  for (int x : u) {
    const StateNode& nd = node(s);
    if (x < 0 || static_cast<std::size_t>(x) >= nd.children.size()) throw ValidationError("vertex letter out of range");
    s = nd.children[static_cast<std::size_t>(x)];
  }
  return s;
}

std::optional<std::vector<StateId>> StatePool::reachable(StateId f, std::size_t cap) const {
  std::vector<StateId> out{f};
  std::unordered_set<StateId> seen{f};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (StateId c : node(out[i]).children) {
      if (seen.insert(c).second) {
        if (out.size() >= cap) return std::nullopt;
        out.push_back(c);
      }
    }
  }
  return out;
}

std::vector<std::uint32_t> StatePool::level_permutation(StateId f, std::size_t n) const {
  return kernels::level_permutation_parallel(*this, f, n);
}

}  // namespace tg
