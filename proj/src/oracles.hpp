#pragma once

#include <vector>

#include "graph.hpp"

namespace energysim::oracle {

// Classical references kept free of any code shared with the protocol
// pipelines they validate.

// queue-based BFS; -1 for unreachable vertices
std::vector<int> bfs_distances(const Graph& g, int s);

std::vector<std::vector<int>> all_pairs(const Graph& g);

int diameter(const Graph& g);

// deterministic minimum-cut-phase contraction (unit edge weights)
long long global_mincut(const Graph& g);

// exhaustive 2-partition enumeration; requires n <= 24
long long global_mincut_exhaustive(const Graph& g);

// augmenting-path max-flow with unit capacities; throws if s == t
long long st_mincut(const Graph& g, int s, int t);

}  // namespace energysim::oracle
