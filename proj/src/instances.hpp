#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"

namespace energysim {

struct ComponentMeta {
    std::vector<int> members;
    int type = 0;  // 1, 2, 3
    std::vector<int> hubs;
};

struct InstanceMeta {
    std::string family;
    uint64_t seed = 0;
    int n = 0;
    int certified_genus = -1;  // -1 = no certificate
    std::vector<int> hubs;     // intended high-degree set
    std::vector<ComponentMeta> components;
    bool planar_certified = false;
    int euler_faces = 0;

    std::string to_json() const;
    static InstanceMeta from_json(const std::string& text);
};

struct Instance {
    Graph graph;
    InstanceMeta meta;
};

// Planar-by-construction cluster graph: a hub path skeleton decorated with
// pendant trees (one-hub components), subdivided parallel edges between
// consecutive hubs (two-hub components) and oversized blobs (large
// components). Hub degrees are topped up with pendant leaves so that the
// intended hubs are exactly the vertices of degree >= ceil(sqrt n).
// mix = relative mass of one-hub / two-hub / large components.
Instance gen_planar_cluster(int n, int hub_count, double mix1, double mix2, double mix3, uint64_t seed);

// Same decoration on a genus-1 skeleton (a complete 5-hub core plus a hub
// chain); the certificate is the edge bound |E| <= 3|V|.
Instance gen_toroidal_cluster(int n, int hub_count, double mix1, double mix2, double mix3, uint64_t seed);

// Two-subset probe graph: diameter 2 iff the subsets are disjoint, 3
// otherwise. Elements come from {0..k}, k a power of two.
Instance gen_disjointness_gadget(const std::vector<int>& set_a, const std::vector<int>& set_b, int k);

Instance gen_k2delta(int delta);
Instance gen_complete(int n);
Instance gen_complete_minus_edge(int n, uint64_t seed);
Instance gen_random_connected(int n, int m, uint64_t seed);
Instance gen_grid(int rows, int cols);
Instance gen_path(int n);
Instance gen_star(int n);

struct GeneratorSpec {
    std::string family;
    int n = 0;
    int hub_count = 0;     // 0 = auto
    double mix1 = 0.4, mix2 = 0.3, mix3 = 0.3;
    int m = 0;             // random family: edge count (0 = 3n)
    int delta = 4;         // k2delta
    int k = 256;           // disjointness universe bound
    uint64_t seed = 1;
};
Instance generate(const GeneratorSpec& spec);

// Greedy spanning-forest peeling; the number of forests needed to exhaust
// the edge set is an upper bound on the arboricity.
int arboricity_by_peeling(const Graph& g);

// Certificate checks for generated instances (Euler face count for planar
// families, the genus-1 edge bound for toroidal ones).
bool instance_certificates_ok(const Instance& inst, std::string* why = nullptr);

void save_instance(const Instance& inst, const std::string& graph_path);
std::optional<InstanceMeta> load_instance_meta(const std::string& graph_path);

}  // namespace energysim
