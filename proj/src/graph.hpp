#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace energysim {

// Immutable simple undirected graph with vertex ids 0..n-1.
// Adjacency is stored CSR-style with per-vertex sorted neighbor lists.
class Graph {
public:
    Graph() : n_(0) {}
    // Throws std::invalid_argument on self-loops, parallel edges or
    // out-of-range endpoints.
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    int m() const { return (int)edges_.size(); }
    int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
    int max_degree() const { return max_degree_; }

    std::span<const int> neighbors(int v) const {
        return {nbrs_.data() + offsets_[v], nbrs_.data() + offsets_[v + 1]};
    }

    bool has_edge(int u, int v) const;

    // Edges normalized to u < v, sorted lexicographically.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool connected() const;

    // List of vertices not reachable from vertex 0 (empty iff connected).
    std::vector<int> unreachable_from(int s) const;

private:
    int n_;
    int max_degree_ = 0;
    std::vector<int> offsets_;
    std::vector<int> nbrs_;
    std::vector<std::pair<int, int>> edges_;
};

// Plain text format: first line "n m", then m lines "u v" with 0 <= u < v < n.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);

}  // namespace energysim
