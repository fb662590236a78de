#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "primitives.hpp"
#include "radio.hpp"

namespace energysim {

// Vertex labeling in which every positive-label vertex has a neighbor one
// layer below; a unique layer-0 root makes it a rooted tree skeleton used
// by the layered casts. Vertices outside the domain carry label -1.
struct GoodLabeling {
    std::vector<int> labels;
    int root = -1;

    int max_label(std::span<const int> domain) const {
        int hi = 0;
        for (int v : domain) hi = std::max(hi, labels[v]);
        return hi;
    }
};

bool validate_labeling(const Graph& g, const GoodLabeling& labeling, std::span<const int> domain);

enum class LabelingMode {
    kInModel,        // naive layered growth over the radio, energy grows with depth
    kOracleCharged,  // labels computed offline, devices charged the cost of the
                     // known energy-optimal construction
};

// Builds labelings for disjoint domains in parallel (no edges may join two
// domains). designated_roots[i] < 0 picks the smallest-id vertex.
// Throws if a domain is not internally connected.
std::vector<GoodLabeling> build_good_labelings(RadioEngine& eng, const ConstantsProfile& prof,
                                               const std::vector<std::vector<int>>& domains,
                                               const std::vector<int>& designated_roots,
                                               LabelingMode mode);

// Whole-graph convenience wrapper.
GoodLabeling build_good_labeling(RadioEngine& eng, const ConstantsProfile& prof, int designated_root,
                                 LabelingMode mode);

struct SourceMessage {
    int source;
    int payload;
    uint64_t seed = 0;  // shared randomness tag, needed by the multi combine
};

enum class CombineMode { kAllMessages, kAnyOne, kMulti };

struct CastOptions {
    CombineMode mode = CombineMode::kAllMessages;
    int delta_prime = 0;  // all-messages sweeps; 0 = graph max degree
    int m_bound = 1;      // multi combine
};

// Relays messages layer by layer toward the root; each vertex participates
// in at most two of the sweeps. Returns the payload ids held at the root.
std::vector<int> converge_cast(RadioEngine& eng, const ConstantsProfile& prof,
                               const GoodLabeling& labeling, std::span<const int> domain,
                               const std::vector<SourceMessage>& sources, const CastOptions& opt);

// Pushes one payload from the root down every layer. Returns per-vertex
// reception flags indexed by position in `domain`.
std::vector<char> diverge_cast(RadioEngine& eng, const ConstantsProfile& prof,
                               const GoodLabeling& labeling, std::span<const int> domain, int payload);

// Every domain vertex contributes one message; afterwards every domain vertex
// holds all of them w.h.p. Returns per-domain-vertex payload id sets.
std::vector<std::vector<int>> broadcast_everyone(RadioEngine& eng, const ConstantsProfile& prof,
                                                 const GoodLabeling& labeling, std::span<const int> domain,
                                                 std::span<const int> payloads, int delta_prime = 0);

enum class BroadcastStrategy { kMultiOnce, kRepeatAnyOne };

// x_bound sources broadcast to the whole domain. kMultiOnce converges all
// messages at once with the multi primitive; kRepeatAnyOne repeats an any-one
// converge/diverge x_bound times, sources withdrawing once their message has
// gone out.
std::vector<std::vector<int>> broadcast_sources(RadioEngine& eng, const ConstantsProfile& prof,
                                                const GoodLabeling& labeling, std::span<const int> domain,
                                                const std::vector<SourceMessage>& sources, int x_bound,
                                                BroadcastStrategy strategy);

}  // namespace energysim
