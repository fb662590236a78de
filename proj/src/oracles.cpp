#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace energysim::oracle {

std::vector<int> bfs_distances(const Graph& g, int s) {
    std::vector<int> dist(g.n(), -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : g.neighbors(v))
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    return dist;
}

std::vector<std::vector<int>> all_pairs(const Graph& g) {
    std::vector<std::vector<int>> out(g.n());
    for (int s = 0; s < g.n(); s++) out[s] = bfs_distances(g, s);
    return out;
}

int diameter(const Graph& g) {
    int best = 0;
    for (int s = 0; s < g.n(); s++) {
        auto d = bfs_distances(g, s);
        for (int x : d) {
            if (x < 0) throw std::invalid_argument("diameter of a disconnected graph");
            best = std::max(best, x);
        }
    }
    return best;
}

long long global_mincut(const Graph& g) {
    int n = g.n();
    if (n < 2) throw std::invalid_argument("minimum cut needs at least 2 vertices");
    std::vector<std::vector<long long>> w(n, std::vector<long long>(n, 0));
    for (auto [u, v] : g.edges()) {
        w[u][v] = 1;
        w[v][u] = 1;
    }
    std::vector<int> alive(n);
    for (int i = 0; i < n; i++) alive[i] = i;
    long long best = std::numeric_limits<long long>::max();
    while (alive.size() > 1) {
        // one minimum-cut phase: maximum-adjacency order over live super-vertices
        std::vector<long long> conn(alive.size(), 0);
        std::vector<char> added(alive.size(), 0);
        int prev = -1, last = -1;
        for (size_t step = 0; step < alive.size(); step++) {
            int pick = -1;
            for (size_t i = 0; i < alive.size(); i++)
                if (!added[i] && (pick < 0 || conn[i] > conn[pick])) pick = (int)i;
            added[pick] = 1;
            prev = last;
            last = pick;
            for (size_t i = 0; i < alive.size(); i++)
                if (!added[i]) conn[i] += w[alive[pick]][alive[i]];
            if (step == alive.size() - 1) best = std::min(best, conn[pick]);
        }
        // merge the last two in the order
        int a = alive[prev], b = alive[last];
        for (size_t i = 0; i < alive.size(); i++) {
            int c = alive[i];
            if (c == a || c == b) continue;
            w[a][c] += w[b][c];
            w[c][a] = w[a][c];
        }
        alive.erase(alive.begin() + last);
    }
    return best;
}

long long global_mincut_exhaustive(const Graph& g) {
    int n = g.n();
    if (n < 2 || n > 24) throw std::invalid_argument("exhaustive cut enumeration needs 2 <= n <= 24");
    long long best = std::numeric_limits<long long>::max();
    for (uint32_t mask = 1; mask < (1u << (n - 1)); mask++) {
        // vertex n-1 always on side 0; mask selects side 1 among the rest
        long long cut = 0;
        for (auto [u, v] : g.edges()) {
            bool su = u < n - 1 && ((mask >> u) & 1);
            bool sv = v < n - 1 && ((mask >> v) & 1);
            cut += su != sv;
        }
        best = std::min(best, cut);
    }
    return best;
}

long long st_mincut(const Graph& g, int s, int t) {
    if (s == t) throw std::invalid_argument("s and t must differ");
    int n = g.n();
    // residual adjacency matrix with unit capacities
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (auto [u, v] : g.edges()) {
        cap[u][v] = 1;
        cap[v][u] = 1;
    }
    long long flow = 0;
    while (true) {
        std::vector<int> parent(n, -1);
        std::deque<int> q{s};
        parent[s] = s;
        while (!q.empty() && parent[t] < 0) {
            int v = q.front();
            q.pop_front();
            for (int w = 0; w < n; w++)
                if (parent[w] < 0 && cap[v][w] > 0) {
                    parent[w] = v;
                    q.push_back(w);
                }
        }
        if (parent[t] < 0) break;
        for (int v = t; v != s; v = parent[v]) {
            cap[parent[v]][v] -= 1;
            cap[v][parent[v]] += 1;
        }
        flow += 1;
    }
    return flow;
}

}  // namespace energysim::oracle
