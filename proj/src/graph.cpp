#include "graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace energysim {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    for (auto& [u, v] : edges) {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw std::invalid_argument("graph: endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("graph: parallel edge");
    edges_ = std::move(edges);

    offsets_.assign(n_ + 1, 0);
    for (auto [u, v] : edges_) {
        offsets_[u + 1]++;
        offsets_[v + 1]++;
    }
    for (int i = 0; i < n_; i++) offsets_[i + 1] += offsets_[i];
    nbrs_.resize(2 * edges_.size());
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges_) {
        nbrs_[fill[u]++] = v;
        nbrs_[fill[v]++] = u;
    }
    for (int v = 0; v < n_; v++) {
        auto nb = neighbors(v);
        if (!std::is_sorted(nb.begin(), nb.end()))
            std::sort(nbrs_.begin() + offsets_[v], nbrs_.begin() + offsets_[v + 1]);
        max_degree_ = std::max(max_degree_, degree(v));
    }
}

bool Graph::has_edge(int u, int v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<int> Graph::unreachable_from(int s) const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{s};
    if (n_ == 0) return {};
    seen[s] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    std::vector<int> out;
    for (int v = 0; v < n_; v++)
        if (!seen[v]) out.push_back(v);
    return out;
}

bool Graph::connected() const { return n_ <= 1 || unreachable_from(0).empty(); }

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            lineno++;
            if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("graph parse error at line " + std::to_string(lineno) + ": " + what);
    };
    if (!next_line()) fail("missing header");
    long long n, m;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> m) || n < 0 || m < 0) fail("malformed header, expected \"n m\"");
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (long long i = 0; i < m; i++) {
        if (!next_line()) fail("unexpected end of file, expected edge");
        std::istringstream es(line);
        long long u, v;
        if (!(es >> u >> v)) fail("malformed edge line");
        if (u < 0 || v < 0 || u >= n || v >= n) fail("edge endpoint out of range");
        if (u >= v) fail("edge must satisfy u < v");
        edges.emplace_back((int)u, (int)v);
    }
    Graph g;
    try {
        g = Graph((int)n, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("graph validation error: ") + e.what());
    }
    if (!g.connected()) throw std::runtime_error("graph validation error: graph is not connected");
    return g;
}

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << g.n() << " " << g.m() << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
    return out.str();
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_graph(text);
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << format_graph(g);
}

}  // namespace energysim
