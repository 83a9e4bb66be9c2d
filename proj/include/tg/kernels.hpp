#pragma once

#include <cstdint>
#include <vector>

#include "tg/tree.hpp"

namespace tg::kernels {

/// Worker count for the OpenMP kernels; 0 restores the runtime default.
void set_threads(int n);
int threads();

/// Level-n image table of f. The serial version recurses on blocks with a
/// (state, depth) memo; the parallel one walks every vertex independently.
std::vector<std::uint32_t> level_permutation_serial(const StatePool& pool, StateId f, std::size_t n);
std::vector<std::uint32_t> level_permutation_parallel(const StatePool& pool, StateId f, std::size_t n);

/// Compressed adjacency lists of an undirected graph.
struct Adjacency {
  std::vector<std::uint32_t> offset;  // size n+1
  std::vector<std::uint32_t> target;
  std::size_t vertex_count() const { return offset.empty() ? 0 : offset.size() - 1; }
};

/// Builds the undirected simple adjacency induced by permutation tables
/// (loops and parallel edges dropped).
Adjacency adjacency_from_tables(const std::vector<std::vector<std::uint32_t>>& tables);

/// Breadth-first distances from src; UINT32_MAX marks unreachable vertices.
std::vector<std::uint32_t> bfs_distances(const Adjacency& g, std::uint32_t src);

/// Maximum eccentricity over all vertices (all-pairs BFS); UINT32_MAX if disconnected.
std::uint32_t diameter_serial(const Adjacency& g);
std::uint32_t diameter_parallel(const Adjacency& g);

}  // namespace tg::kernels
