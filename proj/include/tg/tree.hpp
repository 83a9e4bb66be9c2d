#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tg/perm.hpp"

namespace tg {

/// Eventually periodic sequence of branching indices m_1, m_2, ...
class TreeShape {
 public:
  TreeShape(std::vector<int> prefix, std::vector<int> cycle);
  static TreeShape regular(int m) { return TreeShape({}, {m}); }

  const std::vector<int>& prefix() const { return prefix_; }
  const std::vector<int>& cycle() const { return cycle_; }

  /// Phases index the distinct shifted trees: prefix positions then cycle positions.
  int phase_count() const { return static_cast<int>(prefix_.size() + cycle_.size()); }
  int phase_of_level(std::size_t level) const;
  int next_phase(int phase) const;
  int arity_of_phase(int phase) const;
  int arity(std::size_t level) const { return arity_of_phase(phase_of_level(level)); }

  /// Shape of the subtree hanging at level k.
  TreeShape shifted(std::size_t k) const;

  /// Number of vertices on level n of the subtree starting at the given phase.
  std::size_t level_size(std::size_t n, int phase = 0) const;

  bool is_regular() const { return prefix_.empty() && cycle_.size() == 1; }

  friend bool operator==(const TreeShape& a, const TreeShape& b) {
    return a.prefix_ == b.prefix_ && a.cycle_ == b.cycle_;
  }

 private:
  std::vector<int> prefix_;
  std::vector<int> cycle_;
};

/// Vertex as a word of 0-based letters; the first letter hangs below the root.
using Vertex = std::vector<int>;

/// Parses "1 2 1" or "121" (1-based letters) into a vertex.
Vertex parse_vertex(const std::string& text);
std::string vertex_to_string(const Vertex& v);

/// Lexicographic index of a vertex on its level, first letter most significant.
std::size_t vertex_index(const TreeShape& shape, const Vertex& v, int phase = 0);
Vertex vertex_from_index(const TreeShape& shape, std::size_t n, std::size_t index, int phase = 0);

using StateId = std::uint32_t;

[[noreturn]] void throw_resource_bound_portrait();

/// One state of the transducer: root permutation plus one section per child.
struct StateNode {
  int phase = 0;
  Perm root;
  std::vector<StateId> children;
};

/// Reference inside a recursive system: either an existing state or a node of the system.
struct SysRef {
  bool local = false;
  std::uint32_t index = 0;
  static SysRef state(StateId id) { return {false, id}; }
  static SysRef node(std::uint32_t i) { return {true, i}; }
};

struct SysNode {
  int phase = 0;
  Perm root;
  std::vector<SysRef> children;
};

/// Decorated tree: interior vertices carry vertex permutations, leaves carry a payload.
template <class Leaf>
struct Portrait {
  struct Node {
    bool leaf = true;
    Perm perm;
    Leaf payload{};
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  std::size_t depth(std::size_t i = 0) const {
    std::size_t d = 0;
    for (std::size_t c : nodes[i].children) d = std::max(d, depth(c) + 1);
    return d;
  }
  std::size_t leaf_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.leaf ? 1 : 0;
    return n;
  }
};

/// Hash-consed pool of automaton states over one tree shape.
///
/// Every state in the pool is minimal: two distinct ids never denote the same
/// tree automorphism. Cyclic systems are interned one strongly connected
/// component at a time after Moore minimisation, with a canonical encoding of
/// each component used as the lookup key.
class StatePool {
 public:
  explicit StatePool(TreeShape shape);
  StatePool(const StatePool&) = delete;
  StatePool& operator=(const StatePool&) = delete;

  const TreeShape& shape() const { return shape_; }

  StateId identity(int phase = 0) const { return identity_[phase]; }
  bool is_identity(StateId f) const { return f == identity_[node(f).phase]; }

  const StateNode& node(StateId f) const {
    return chunks_[f >> kChunkBits].load(std::memory_order_acquire)[f & kChunkMask];
  }
  std::size_t size() const { return size_.load(std::memory_order_acquire); }

  /// Interns a recursive system; returns the pool id of each system node.
  std::vector<StateId> intern(const std::vector<SysNode>& system);

  /// Interns a state whose sections already exist.
  StateId make(int phase, Perm root, std::vector<StateId> children);
  /// The rooted automorphism acting by root at the top and trivially below.
  StateId rooted(int phase, const Perm& root);

  StateId compose(StateId f, StateId g);
  StateId invert(StateId f);
  StateId power(StateId f, long long k);

  Vertex act(StateId f, const Vertex& u) const;
  StateId section(StateId f, const Vertex& u) const;

  /// Closure of {f} under single-letter sections; nullopt if it exceeds cap.
  std::optional<std::vector<StateId>> reachable(StateId f, std::size_t cap) const;

  /// Portrait to a fixed depth, pruning below any section accepted by stop.
  template <class Stop>
  Portrait<StateId> portrait(StateId f, std::size_t depth, Stop stop, std::size_t node_cap = 1u << 20) const;

  /// Images of every level-n vertex (lexicographic order) under f.
  std::vector<std::uint32_t> level_permutation(StateId f, std::size_t n) const;

 private:
  static constexpr unsigned kChunkBits = 12;
  static constexpr std::uint32_t kChunkMask = (1u << kChunkBits) - 1;
  static constexpr std::size_t kMaxChunks = 1u << 14;

  StateId push_locked(StateNode node);
  std::optional<StateId> find_node_locked(int phase, const Perm& root, const std::vector<StateId>& kids) const;
  StateId make_locked(int phase, Perm root, std::vector<StateId> kids);
  void check_node(int phase, const Perm& root, std::size_t nkids) const;

  TreeShape shape_;
  std::unique_ptr<std::atomic<StateNode*>[]> chunks_;
  std::atomic<std::size_t> size_{0};
  std::vector<StateId> identity_;

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, StateId> node_index_;
  std::unordered_map<std::string, StateId> scc_index_;
  std::unordered_map<StateId, std::uint32_t> scc_group_;
  std::vector<std::vector<StateId>> scc_members_;

  struct PairHash {
    std::size_t operator()(const std::pair<StateId, StateId>& p) const noexcept {
      return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
  };
  std::mutex memo_mu_;
  std::unordered_map<std::pair<StateId, StateId>, StateId, PairHash> compose_memo_;
  std::unordered_map<StateId, StateId> invert_memo_;
};

template <class Stop>
Portrait<StateId> StatePool::portrait(StateId f, std::size_t depth, Stop stop, std::size_t node_cap) const {
  Portrait<StateId> out;
  struct Item {
    std::size_t node;
    StateId state;
    std::size_t level;
  };
  std::vector<Item> work;
  out.nodes.push_back({});
  work.push_back({0, f, 0});
  while (!work.empty()) {
    Item it = work.back();
    work.pop_back();
    const StateNode& s = node(it.state);
    if (it.level >= depth || is_identity(it.state) || stop(it.state)) {
      out.nodes[it.node].payload = it.state;
      continue;
    }
    out.nodes[it.node].leaf = false;
    out.nodes[it.node].perm = s.root;
    for (StateId c : s.children) {
      if (out.nodes.size() >= node_cap) throw_resource_bound_portrait();
      std::size_t idx = out.nodes.size();
      out.nodes.push_back({});
      out.nodes[it.node].children.push_back(idx);
      work.push_back({idx, c, it.level + 1});
    }
  }
  return out;
}


}  // namespace tg
