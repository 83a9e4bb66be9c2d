#include "tg/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <map>

namespace tg::kernels {

namespace {
int g_threads = 0;
}

void set_threads(int n) {
  g_threads = n;
  omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
}

int threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

std::vector<std::uint32_t> level_permutation_serial(const StatePool& pool, StateId f, std::size_t n) {
  const TreeShape& shape = pool.shape();
  std::map<std::pair<StateId, std::size_t>, std::vector<std::uint32_t>> memo;
  auto rec = [&](auto&& self, StateId s, std::size_t depth) -> const std::vector<std::uint32_t>& {
    auto key = std::make_pair(s, depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const StateNode& nd = pool.node(s);
    std::vector<std::uint32_t> out;
    if (depth == 0) {
      out = {0};
    } else if (pool.is_identity(s)) {
      out.resize(shape.level_size(depth, nd.phase));
      for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = i;
    } else {
      std::size_t block = shape.level_size(depth - 1, shape.next_phase(nd.phase));
      out.resize(block * nd.children.size());
      for (std::uint32_t x = 0; x < nd.children.size(); ++x) {
        const auto& sub = self(self, nd.children[x], depth - 1);
        std::size_t y = nd.root[x];
        for (std::size_t i = 0; i < block; ++i)
          out[x * block + i] = static_cast<std::uint32_t>(y * block + sub[i]);
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  return rec(rec, f, n);
}

std::vector<std::uint32_t> level_permutation_parallel(const StatePool& pool, StateId f, std::size_t n) {
  const TreeShape& shape = pool.shape();
  int phase = pool.node(f).phase;
  std::vector<std::size_t> arity(n), block(n);
  int p = phase;
  for (std::size_t i = 0; i < n; ++i) {
    arity[i] = static_cast<std::size_t>(shape.arity_of_phase(p));
    p = shape.next_phase(p);
  }
  for (std::size_t i = n, b = 1; i-- > 0;) {
    block[i] = b;
    b *= arity[i];
  }
  const std::size_t total = shape.level_size(n, phase);
  std::vector<std::uint32_t> out(total);
  const auto count = static_cast<long long>(total);
#pragma omp parallel for schedule(static) if (total > 4096)
  for (long long v = 0; v < count; ++v) {
    StateId s = f;
    std::size_t rest = static_cast<std::size_t>(v), img = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = static_cast<std::uint32_t>(rest / block[i]);
      rest %= block[i];
      if (pool.is_identity(s)) {
        img += x * block[i] + rest;
        break;
      }
      const StateNode& nd = pool.node(s);
      img += nd.root[x] * block[i];
      s = nd.children[x];
    }
    out[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(img);
  }
  return out;
}

Adjacency adjacency_from_tables(const std::vector<std::vector<std::uint32_t>>& tables) {
  std::size_t n = tables.empty() ? 0 : tables.front().size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& t : tables)
    for (std::uint32_t v = 0; v < n; ++v)
      if (t[v] != v) {
        adj[v].push_back(t[v]);
        adj[t[v]].push_back(v);
      }
  Adjacency g;
  g.offset.push_back(0);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    g.target.insert(g.target.end(), a.begin(), a.end());
    g.offset.push_back(static_cast<std::uint32_t>(g.target.size()));
  }
  return g;
}

std::vector<std::uint32_t> bfs_distances(const Adjacency& g, std::uint32_t src) {
  std::vector<std::uint32_t> dist(g.vertex_count(), UINT32_MAX);
  std::vector<std::uint32_t> queue{src};
  dist[src] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    std::uint32_t v = queue[h];
    for (std::uint32_t e = g.offset[v]; e < g.offset[v + 1]; ++e) {
      std::uint32_t w = g.target[e];
      if (dist[w] == UINT32_MAX) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

namespace {
std::uint32_t eccentricity(const Adjacency& g, std::uint32_t v) {
  auto d = bfs_distances(g, v);
  return *std::max_element(d.begin(), d.end());
}
}  // namespace

std::uint32_t diameter_serial(const Adjacency& g) {
  std::uint32_t best = 0;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) best = std::max(best, eccentricity(g, v));
  return best;
}

std::uint32_t diameter_parallel(const Adjacency& g) {
  std::uint32_t best = 0;
  const auto n = static_cast<long long>(g.vertex_count());
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (long long v = 0; v < n; ++v) best = std::max(best, eccentricity(g, static_cast<std::uint32_t>(v)));
  return best;
}

}  // namespace tg::kernels
