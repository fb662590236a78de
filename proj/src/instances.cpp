#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "rng.hpp"

namespace energysim {

using nlohmann::json;

std::string InstanceMeta::to_json() const {
    json j;
    j["family"] = family;
    j["seed"] = seed;
    j["n"] = n;
    j["certified_genus"] = certified_genus;
    j["hubs"] = hubs;
    j["planar_certified"] = planar_certified;
    j["euler_faces"] = euler_faces;
    json comps = json::array();
    for (const auto& c : components) {
        json jc;
        jc["members"] = c.members;
        jc["type"] = c.type;
        jc["hubs"] = c.hubs;
        comps.push_back(jc);
    }
    j["components"] = comps;
    return j.dump(2) + "\n";
}

InstanceMeta InstanceMeta::from_json(const std::string& text) {
    json j = json::parse(text);
    InstanceMeta m;
    m.family = j.at("family").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.n = j.at("n").get<int>();
    m.certified_genus = j.at("certified_genus").get<int>();
    m.hubs = j.at("hubs").get<std::vector<int>>();
    m.planar_certified = j.at("planar_certified").get<bool>();
    m.euler_faces = j.at("euler_faces").get<int>();
    for (const auto& jc : j.at("components")) {
        ComponentMeta c;
        c.members = jc.at("members").get<std::vector<int>>();
        c.type = jc.at("type").get<int>();
        c.hubs = jc.at("hubs").get<std::vector<int>>();
        m.components.push_back(std::move(c));
    }
    return m;
}

namespace {

// Rotation-system builder restricted to three operations that keep the
// drawing planar: pendant vertices, parallel copies of existing edges, and
// edge subdivisions. Faces are traced for the Euler certificate.
class EmbeddingBuilder {
public:
    int add_vertex() {
        rot_.emplace_back();
        return n_++;
    }

    int n() const { return n_; }
    int src(int h) const { return he_[he_[h].twin].target; }
    int dst(int h) const { return he_[h].target; }
    int degree(int u) const { return (int)rot_[u].size(); }

    int pendant(int u) {
        int w = add_vertex();
        int a = new_he(w), b = new_he(u);
        he_[a].twin = b;
        he_[b].twin = a;
        rot_[u].push_back(a);
        rot_[w].push_back(b);
        return w;
    }

    // parallel copy placed right beside half-edge h; returns the copy
    int parallel(int h) {
        int t = he_[h].twin;
        int u = src(h), v = dst(h);
        int a = new_he(v), b = new_he(u);
        he_[a].twin = b;
        he_[b].twin = a;
        insert_after(u, h, a);
        insert_after(v, t, b);
        return a;
    }

    // splits the edge of h; returns {new vertex, half-edge from it to dst(h)}
    std::pair<int, int> subdivide(int h) {
        int t = he_[h].twin;
        int u = src(h), v = dst(h);
        int x = add_vertex();
        int c = new_he(u), d = new_he(v);
        he_[h].target = x;
        he_[h].twin = c;
        he_[c].twin = h;
        he_[t].target = x;
        he_[t].twin = d;
        he_[d].twin = t;
        rot_[x] = {c, d};
        return {x, d};
    }

    int half_edge(int u, int v) const {
        for (int h : rot_[u])
            if (he_[h].target == v) return h;
        throw std::logic_error("no such half-edge");
    }

    int faces() const {
        std::vector<int> pos(he_.size());
        for (const auto& r : rot_)
            for (size_t i = 0; i < r.size(); i++) pos[r[i]] = (int)i;
        std::vector<char> seen(he_.size(), 0);
        int count = 0;
        for (size_t h0 = 0; h0 < he_.size(); h0++) {
            if (seen[h0]) continue;
            count++;
            int h = (int)h0;
            while (!seen[h]) {
                seen[h] = 1;
                int v = he_[h].target;
                int t = he_[h].twin;
                h = rot_[v][(pos[t] + 1) % rot_[v].size()];
            }
        }
        return count;
    }

    int edge_count() const { return (int)he_.size() / 2; }

    Graph to_graph() const {
        std::vector<std::pair<int, int>> edges;
        for (int h = 0; h < (int)he_.size(); h++)
            if (h < he_[h].twin) edges.emplace_back(src(h), dst(h));
        return Graph(n_, std::move(edges));
    }

private:
    struct He {
        int target = -1;
        int twin = -1;
    };

    int new_he(int target) {
        he_.push_back({target, -1});
        return (int)he_.size() - 1;
    }

    void insert_after(int u, int h, int fresh) {
        auto& r = rot_[u];
        auto it = std::find(r.begin(), r.end(), h);
        r.insert(it + 1, fresh);
    }

    std::vector<He> he_;
    std::vector<std::vector<int>> rot_;
    int n_ = 0;
};

int isqrt_ceil(int n) {
    int s = (int)std::ceil(std::sqrt((double)n) - 1e-9);
    while (s * s < n) s++;
    while ((s - 1) * (s - 1) >= n) s--;
    return s;
}

struct ClusterPlan {
    int hub_count;
    int mass2, mass3;
};

ClusterPlan plan_cluster(int n, int hub_count, double mix2, double mix3, double mix_total, int min_hubs) {
    int s = isqrt_ceil(n);
    int max_hubs = std::max(min_hubs, std::min(s, n / (2 * s + 2)));
    int h = hub_count > 0 ? hub_count : std::max(min_hubs, n / (3 * s));
    h = std::clamp(h, min_hubs, max_hubs);
    if (n < h * (s + 1))
        throw std::invalid_argument("cluster generator: n too small for the requested hub count");
    int boost_reserve = h * s;  // upper estimate; leftovers become leaves
    int free_mass = std::max(0, n - h - boost_reserve);
    int m2 = (int)(free_mass * mix2 / mix_total);
    int m3 = (int)(free_mass * mix3 / mix_total);
    return {h, m2, m3};
}

}  // namespace

Instance gen_planar_cluster(int n, int hub_count, double mix1, double mix2, double mix3, uint64_t seed) {
    if (n < 16) throw std::invalid_argument("planar cluster generator needs n >= 16");
    double mix_total = std::max(1e-9, mix1 + mix2 + mix3);
    int s = isqrt_ceil(n);
    ClusterPlan plan = plan_cluster(n, hub_count, mix2, mix3, mix_total, 2);
    Rng rng(seed, 0xc1a5);
    int host_cap = std::min(5, s - 1);

    EmbeddingBuilder b;
    std::vector<int> hubs;
    hubs.push_back(b.add_vertex());
    for (int i = 1; i < plan.hub_count; i++) hubs.push_back(b.pendant(hubs.back()));

    InstanceMeta meta;
    meta.family = "planar_cluster";
    meta.seed = seed;
    meta.certified_genus = 0;
    meta.hubs = hubs;

    int budget = n - plan.hub_count;

    // two-hub components: subdivided parallel copies of skeleton edges
    int m2 = std::min(plan.mass2, budget);
    budget -= m2;
    while (m2 > 0) {
        int i = (int)rng.next_below(plan.hub_count - 1);
        int u = hubs[i], v = hubs[i + 1];
        int len = 1 + (int)rng.next_below(std::min({3, s - 1, m2}));
        ComponentMeta comp;
        comp.type = 2;
        comp.hubs = {u, v};
        int h = b.parallel(b.half_edge(u, v));
        for (int k = 0; k < len; k++) {
            auto [x, next] = b.subdivide(h);
            comp.members.push_back(x);
            h = next;
        }
        int room = m2 - len;
        if (room > 0 && (int)comp.members.size() < s - 1 && rng.next_bool(0.5)) {
            int extra = (int)rng.next_below(std::min(3, room + 1));
            for (int k = 0; k < extra && (int)comp.members.size() < s; k++) {
                int host = comp.members[rng.next_below(comp.members.size())];
                if (b.degree(host) >= host_cap) continue;
                comp.members.push_back(b.pendant(host));
            }
        }
        m2 -= (int)comp.members.size();
        meta.components.push_back(std::move(comp));
    }
    budget += std::max(0, m2);

    // large components: oversized blobs on one hub or one skeleton edge
    int m3 = std::min(plan.mass3, budget);
    budget -= m3;
    while (m3 > s) {
        int size = std::min(m3, s + 1 + (int)rng.next_below(s));
        ComponentMeta comp;
        comp.type = 3;
        if (rng.next_bool(0.5) || plan.hub_count < 2) {
            int u = hubs[rng.next_below(hubs.size())];
            comp.hubs = {u};
            comp.members.push_back(b.pendant(u));
            for (int k = 1; k < size; k++) {
                int host = comp.members[rng.next_below(comp.members.size())];
                if (b.degree(host) >= host_cap) host = comp.members.back();
                comp.members.push_back(b.pendant(host));
            }
        } else {
            int i = (int)rng.next_below(plan.hub_count - 1);
            int u = hubs[i], v = hubs[i + 1];
            comp.hubs = {u, v};
            int h = b.parallel(b.half_edge(u, v));
            for (int k = 0; k < size; k++) {
                auto [x, next] = b.subdivide(h);
                comp.members.push_back(x);
                h = next;
            }
        }
        m3 -= (int)comp.members.size();
        meta.components.push_back(std::move(comp));
    }
    budget += std::max(0, m3);

    // one-hub components: pendant trees, keeping room for the degree boost
    int m1 = budget;
    auto boost_need = [&]() {
        int need = 0;
        for (int u : hubs) need += std::max(0, s - b.degree(u));
        return need;
    };
    while (m1 > boost_need()) {
        int u = hubs[rng.next_below(hubs.size())];
        int size = 1 + (int)rng.next_below(std::min(s - 1, m1 - boost_need()));
        ComponentMeta comp;
        comp.type = 1;
        comp.hubs = {u};
        comp.members.push_back(b.pendant(u));
        for (int k = 1; k < size; k++) {
            int host = comp.members[rng.next_below(comp.members.size())];
            if (b.degree(host) >= host_cap) host = comp.members.back();
            comp.members.push_back(b.pendant(host));
        }
        m1 -= (int)comp.members.size();
        meta.components.push_back(std::move(comp));
    }
    for (int u : hubs)
        while (b.degree(u) < s && m1 > 0) {
            ComponentMeta comp;
            comp.type = 1;
            comp.hubs = {u};
            comp.members = {b.pendant(u)};
            meta.components.push_back(std::move(comp));
            m1--;
        }
    for (int k = 0; m1 > 0; k++, m1--) {
        int u = hubs[k % hubs.size()];
        ComponentMeta comp;
        comp.type = 1;
        comp.hubs = {u};
        comp.members = {b.pendant(u)};
        meta.components.push_back(std::move(comp));
    }
    for (int u : hubs)
        if (b.degree(u) < s) throw std::runtime_error("cluster generator: could not lift hub degrees");

    int faces = b.faces();
    Graph g = b.to_graph();
    meta.n = g.n();
    meta.euler_faces = faces;
    meta.planar_certified = (g.n() - g.m() + faces) == 2;
    if (!meta.planar_certified) throw std::logic_error("embedding certificate failed");
    if (g.n() != n) throw std::logic_error("cluster generator: vertex budget mismatch");
    return {std::move(g), std::move(meta)};
}

Instance gen_toroidal_cluster(int n, int hub_count, double mix1, double mix2, double mix3, uint64_t seed) {
    if (n < 64) throw std::invalid_argument("toroidal cluster generator needs n >= 64");
    double mix_total = std::max(1e-9, mix1 + mix2 + mix3);
    int s = isqrt_ceil(n);
    ClusterPlan plan = plan_cluster(n, hub_count, mix2, mix3, mix_total, 5);
    Rng rng(seed, 0x7041);
    int host_cap = std::min(5, s - 1);

    // edge-list construction over a five-hub complete core plus a hub chain;
    // every decoration sits inside a face of the core drawing, so the genus
    // stays at the core's value of one
    int next_vertex = 0;
    std::vector<int> hubs;
    for (int i = 0; i < plan.hub_count; i++) hubs.push_back(next_vertex++);
    std::vector<std::pair<int, int>> skeleton;
    for (int i = 0; i < 5; i++)
        for (int j = i + 1; j < 5; j++) skeleton.emplace_back(hubs[i], hubs[j]);
    for (int i = 5; i < plan.hub_count; i++) skeleton.emplace_back(hubs[i - 1], hubs[i]);

    std::vector<std::pair<int, int>> edges = skeleton;
    std::vector<int> degree(n, 0);
    for (auto [u, v] : skeleton) {
        degree[u]++;
        degree[v]++;
    }
    auto add_edge = [&](int u, int v) {
        edges.emplace_back(u, v);
        degree[u]++;
        degree[v]++;
    };
    auto new_vertex = [&]() {
        if (next_vertex >= n) throw std::logic_error("toroidal generator over budget");
        return next_vertex++;
    };

    InstanceMeta meta;
    meta.family = "toroidal_cluster";
    meta.seed = seed;
    meta.certified_genus = 1;
    meta.hubs = hubs;

    int budget = n - plan.hub_count;
    int m2 = std::min(plan.mass2, budget);
    budget -= m2;
    while (m2 > 0) {
        auto [u, v] = skeleton[rng.next_below(skeleton.size())];
        int len = 1 + (int)rng.next_below(std::min({3, s - 1, m2}));
        ComponentMeta comp;
        comp.type = 2;
        comp.hubs = {std::min(u, v), std::max(u, v)};
        int prev = u;
        for (int k = 0; k < len; k++) {
            int x = new_vertex();
            add_edge(prev, x);
            comp.members.push_back(x);
            prev = x;
        }
        add_edge(prev, v);
        m2 -= len;
        meta.components.push_back(std::move(comp));
    }
    budget += std::max(0, m2);

    int m3 = std::min(plan.mass3, budget);
    budget -= m3;
    while (m3 > s) {
        int size = std::min(m3, s + 1 + (int)rng.next_below(s));
        int u = hubs[rng.next_below(hubs.size())];
        ComponentMeta comp;
        comp.type = 3;
        comp.hubs = {u};
        int prev = u;
        for (int k = 0; k < size; k++) {
            int x = new_vertex();
            add_edge(prev, x);
            comp.members.push_back(x);
            prev = x;
        }
        m3 -= size;
        meta.components.push_back(std::move(comp));
    }
    budget += std::max(0, m3);

    int m1 = budget;
    auto boost_need = [&]() {
        int need = 0;
        for (int u : hubs) need += std::max(0, s - degree[u]);
        return need;
    };
    while (m1 > boost_need()) {
        int u = hubs[rng.next_below(hubs.size())];
        int size = 1 + (int)rng.next_below(std::min(s - 1, m1 - boost_need()));
        ComponentMeta comp;
        comp.type = 1;
        comp.hubs = {u};
        int root = new_vertex();
        add_edge(u, root);
        comp.members.push_back(root);
        for (int k = 1; k < size; k++) {
            int host = comp.members[rng.next_below(comp.members.size())];
            if (degree[host] >= host_cap) host = comp.members.back();
            int x = new_vertex();
            add_edge(host, x);
            comp.members.push_back(x);
        }
        m1 -= size;
        meta.components.push_back(std::move(comp));
    }
    for (int u : hubs)
        while (degree[u] < s && m1 > 0) {
            int x = new_vertex();
            add_edge(u, x);
            ComponentMeta comp;
            comp.type = 1;
            comp.hubs = {u};
            comp.members = {x};
            meta.components.push_back(std::move(comp));
            m1--;
        }
    for (int k = 0; m1 > 0; k++, m1--) {
        int u = hubs[k % hubs.size()];
        int x = new_vertex();
        add_edge(u, x);
        ComponentMeta comp;
        comp.type = 1;
        comp.hubs = {u};
        comp.members = {x};
        meta.components.push_back(std::move(comp));
    }
    for (int u : hubs)
        if (degree[u] < s) throw std::runtime_error("toroidal generator: could not lift hub degrees");

    Graph g(n, std::move(edges));
    meta.n = n;
    if (g.m() > 3 * g.n()) throw std::logic_error("toroidal certificate failed: too many edges");
    return {std::move(g), std::move(meta)};
}

Instance gen_disjointness_gadget(const std::vector<int>& set_a, const std::vector<int>& set_b, int k) {
    if (k < 2 || (k & (k - 1)) != 0) throw std::invalid_argument("universe bound must be a power of two");
    for (int x : set_a)
        if (x < 0 || x > k) throw std::invalid_argument("element outside {0..k}");
    for (int x : set_b)
        if (x < 0 || x > k) throw std::invalid_argument("element outside {0..k}");

    // one extra bit keeps the encoding of {0..k} injective
    int bits = 1;
    while ((1 << bits) <= k) bits++;

    int alpha = (int)set_a.size(), beta = (int)set_b.size();
    auto ones_side = [&](int i) { return i - 1; };          // index vertices, i in 1..bits
    auto zeros_side = [&](int i) { return bits + i - 1; };  // index vertices, i in 1..bits
    int ustar = 2 * bits, vstar = 2 * bits + 1;
    auto a_vertex = [&](int i) { return 2 * bits + 2 + i; };
    auto b_vertex = [&](int i) { return 2 * bits + 2 + alpha + i; };
    int n = 2 * bits + 2 + alpha + beta;

    auto bit_at = [&](int value, int i) { return (value >> (bits - i)) & 1; };  // i-th from the left

    std::vector<std::pair<int, int>> edges;
    auto add = [&](int x, int y) { edges.emplace_back(std::min(x, y), std::max(x, y)); };
    for (int idx = 0; idx < alpha; idx++)
        for (int i = 1; i <= bits; i++)
            add(a_vertex(idx), bit_at(set_a[idx], i) ? ones_side(i) : zeros_side(i));
    for (int idx = 0; idx < beta; idx++)
        for (int i = 1; i <= bits; i++)
            add(b_vertex(idx), bit_at(set_b[idx], i) ? zeros_side(i) : ones_side(i));
    for (int idx = 0; idx < alpha; idx++) add(ustar, a_vertex(idx));
    for (int idx = 0; idx < beta; idx++) add(vstar, b_vertex(idx));
    for (int i = 1; i <= bits; i++) {
        add(ustar, ones_side(i));
        add(ustar, zeros_side(i));
        add(vstar, ones_side(i));
        add(vstar, zeros_side(i));
    }

    Instance inst{Graph(n, std::move(edges)), {}};
    inst.meta.family = "disjointness";
    inst.meta.n = n;
    return inst;
}

Instance gen_k2delta(int delta) {
    if (delta < 1) throw std::invalid_argument("delta must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < delta; i++) {
        edges.emplace_back(0, 2 + i);
        edges.emplace_back(1, 2 + i);
    }
    Instance inst{Graph(delta + 2, std::move(edges)), {}};
    inst.meta.family = "k2delta";
    inst.meta.n = delta + 2;
    return inst;
}

Instance gen_complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++) edges.emplace_back(i, j);
    Instance inst{Graph(n, std::move(edges)), {}};
    inst.meta.family = "complete";
    inst.meta.n = n;
    return inst;
}

Instance gen_complete_minus_edge(int n, uint64_t seed) {
    if (n < 3) throw std::invalid_argument("need n >= 3");
    Rng rng(seed, 0x4e);
    int u = (int)rng.next_below(n);
    int v = (int)rng.next_below(n - 1);
    if (v >= u) v++;
    if (u > v) std::swap(u, v);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++)
            if (!(i == u && j == v)) edges.emplace_back(i, j);
    Instance inst{Graph(n, std::move(edges)), {}};
    inst.meta.family = "complete_minus_edge";
    inst.meta.seed = seed;
    inst.meta.n = n;
    return inst;
}

Instance gen_random_connected(int n, int m, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    long long max_m = (long long)n * (n - 1) / 2;
    if (m <= 0) m = (int)std::min<long long>(3LL * n, max_m);
    m = (int)std::min<long long>(std::max(m, n - 1), max_m);
    Rng rng(seed, 0x9e);
    std::set<std::pair<int, int>> edge_set;
    for (int v = 1; v < n; v++) {  // random attachment tree keeps it connected
        int u = (int)rng.next_below(v);
        edge_set.emplace(u, v);
    }
    while ((int)edge_set.size() < m) {
        int u = (int)rng.next_below(n), v = (int)rng.next_below(n);
        if (u == v) continue;
        edge_set.emplace(std::min(u, v), std::max(u, v));
    }
    std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
    Instance inst{Graph(n, std::move(edges)), {}};
    inst.meta.family = "random_connected";
    inst.meta.seed = seed;
    inst.meta.n = n;
    return inst;
}

Instance gen_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid needs positive dimensions");
    auto id = [&](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; r++)
        for (int c = 0; c < cols; c++) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    Instance inst{Graph(rows * cols, std::move(edges)), {}};
    inst.meta.family = "grid";
    inst.meta.n = rows * cols;
    return inst;
}

Instance gen_path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; i++) edges.emplace_back(i, i + 1);
    Instance inst{Graph(n, std::move(edges)), {}};
    inst.meta.family = "path";
    inst.meta.n = n;
    return inst;
}

Instance gen_star(int n) {
    if (n < 2) throw std::invalid_argument("star needs n >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; i++) edges.emplace_back(0, i);
    Instance inst{Graph(n, std::move(edges)), {}};
    inst.meta.family = "star";
    inst.meta.n = n;
    return inst;
}

Instance generate(const GeneratorSpec& spec) {
    if (spec.family == "planar_cluster")
        return gen_planar_cluster(spec.n, spec.hub_count, spec.mix1, spec.mix2, spec.mix3, spec.seed);
    if (spec.family == "toroidal_cluster")
        return gen_toroidal_cluster(spec.n, spec.hub_count, spec.mix1, spec.mix2, spec.mix3, spec.seed);
    if (spec.family == "disjointness") {
        // random subsets of {0..k}; even seeds build disjoint pairs
        Rng rng(spec.seed, 0xd15);
        std::set<int> a, b;
        int size = std::max(1, spec.k / 8);
        while ((int)a.size() < size) a.insert((int)rng.next_below(spec.k + 1));
        while ((int)b.size() < size) b.insert((int)rng.next_below(spec.k + 1));
        if (spec.seed % 2 == 0) {
            for (int x : a) b.erase(x);
            if (b.empty())
                for (int x = 0; x <= spec.k; x++)
                    if (!a.count(x)) {
                        b.insert(x);
                        break;
                    }
        } else {
            b.insert(*a.begin());
        }
        return gen_disjointness_gadget({a.begin(), a.end()}, {b.begin(), b.end()}, spec.k);
    }
    if (spec.family == "k2delta") return gen_k2delta(spec.delta);
    if (spec.family == "complete") return gen_complete(spec.n);
    if (spec.family == "complete_minus_edge") return gen_complete_minus_edge(spec.n, spec.seed);
    if (spec.family == "random_connected") return gen_random_connected(spec.n, spec.m, spec.seed);
    if (spec.family == "grid") return gen_grid(spec.n, spec.n);
    if (spec.family == "path") return gen_path(spec.n);
    if (spec.family == "star") return gen_star(spec.n);
    throw std::invalid_argument("unknown generator family: " + spec.family);
}

int arboricity_by_peeling(const Graph& g) {
    std::vector<std::pair<int, int>> remaining = g.edges();
    int forests = 0;
    while (!remaining.empty()) {
        forests++;
        std::vector<int> comp(g.n());
        std::iota(comp.begin(), comp.end(), 0);
        std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
        std::vector<std::pair<int, int>> rest;
        for (auto [u, v] : remaining) {
            int ru = find(u), rv = find(v);
            if (ru == rv)
                rest.emplace_back(u, v);
            else
                comp[ru] = rv;
        }
        remaining = std::move(rest);
    }
    return forests;
}

bool instance_certificates_ok(const Instance& inst, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!inst.graph.connected()) return fail("not connected");
    if (inst.meta.family == "planar_cluster") {
        if (!inst.meta.planar_certified) return fail("missing planarity certificate");
        if (inst.graph.n() - inst.graph.m() + inst.meta.euler_faces != 2)
            return fail("Euler face count violated");
    }
    if (inst.meta.family == "toroidal_cluster") {
        if (inst.graph.m() > 3 * inst.graph.n()) return fail("genus-1 edge bound violated");
    }
    return true;
}

void save_instance(const Instance& inst, const std::string& graph_path) {
    save_graph(inst.graph, graph_path);
    std::ofstream meta(graph_path + ".meta.json");
    if (!meta) throw std::runtime_error("cannot write metadata sidecar");
    meta << inst.meta.to_json();
}

std::optional<InstanceMeta> load_instance_meta(const std::string& graph_path) {
    std::ifstream in(graph_path + ".meta.json");
    if (!in) return std::nullopt;
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return InstanceMeta::from_json(text);
}

}  // namespace energysim
