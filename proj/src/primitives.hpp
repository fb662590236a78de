#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radio.hpp"

namespace energysim {

// Every asymptotic constant used by the protocol stack lives here, so that
// experiments can pin or override the whole profile at once. Defaults are
// calibrated for >= 1 - 1/n empirical success at n = 256.
struct ConstantsProfile {
    int rep_logn = 4;    // sweep repetitions per log n in the decay primitive
    int rep_all = 4;     // round multiplier for the all-messages primitive
    int rep_multi = 4;   // iteration multiplier for the multi-message primitive
    int rep_apx = 16;    // round multiplier for counting phase 1
    int apx_sweep_mult = 8;  // phase 2 rounds per index = this * rep_apx * log n / eps^4

    double z_apx = 10.0;          // phase-1 head probability is (eps / z_apx)^2
    double eps_clamp = 1.0;       // requested accuracies are clamped to this value
    double phase2_eps_floor = 0.2;  // sweep granularity floor; estimates for very
                                    // large neighborhoods degrade to this accuracy

    // numeric certificate constants for the counting success-probability envelope
    double env_eps0 = 0.015;
    double env_n0 = 1000.0;
    double env_c0 = 10.0;

    double bfs_radius_mult = 2.0;  // wave radius = mult * ceil(sqrt n)
    int wave_bound_mult = 4;       // waves per (vertex, epoch) bound multiplier
    int labeling_charge_mult = 1;  // listen slots charged by the oracle-backed labeling
    int bcast_sources_mult = 4;    // source bound = mult * ceil(sqrt n) in the core broadcast
    double round_cap_mult = 10.0;  // engine round cap = mult * n^1.5 * log^3 n

    // Parses "key=value" lines; '#' starts a comment. Unknown keys throw.
    static ConstantsProfile from_file(const std::string& path);
    static ConstantsProfile from_env();  // honors ENERGYSIM_PROFILE
    void set(const std::string& key, const std::string& value);
};

int ceil_log2(uint64_t x);  // >= 1 for all x

// Round counts of one primitive invocation; layered protocols use these to
// let scheduled-but-empty slots elapse without simulating them.
uint64_t sr_comm_rounds(const ConstantsProfile& prof, int n, int max_degree);
uint64_t sr_comm_all_rounds(const ConstantsProfile& prof, int n, int delta_prime);

struct SrDelivery {
    int sender = -1;
    int payload = -1;
    bool received() const { return sender >= 0; }
};

// Any-one delivery: every receiver with a transmitting neighbor ends up with
// some neighbor's message w.h.p. Receivers that are themselves senders are
// exempt and act in the sender role only. Results align with `receivers`.
std::vector<SrDelivery> sr_comm(RadioEngine& eng, const ConstantsProfile& prof,
                                std::span<const int> senders, std::span<const int> payloads,
                                std::span<const int> receivers);

// All-messages delivery under the promise that every receiver has at most
// delta_prime sender neighbors. Senders that are also receivers listen in
// rounds they do not transmit. Per-receiver lists are deduped by sender.
std::vector<std::vector<SrDelivery>> sr_comm_all(RadioEngine& eng, const ConstantsProfile& prof,
                                                 std::span<const int> senders,
                                                 std::span<const int> payloads,
                                                 std::span<const int> receivers, int delta_prime);

struct MultiMessage {
    int payload = -1;
    uint64_t seed = 0;  // shared randomness among all holders of this message
    std::vector<int> holders;
};

// Multi-message delivery: every receiver learns all distinct messages held in
// its inclusive neighborhood, provided that count is at most m_bound.
// Holders of one message join each iteration's sender set in lockstep.
// Returns per-receiver sets of payload ids.
std::vector<std::vector<int>> sr_comm_multi(RadioEngine& eng, const ConstantsProfile& prof,
                                            const std::vector<MultiMessage>& messages,
                                            std::span<const int> receivers, int m_bound);

struct KeyedDelivery {
    int sender = -1;
    int payload = -1;
    long long key = -1;
    bool received() const { return sender >= 0; }
};

enum class MinMaxAlgo { kAuto, kGeneral, kTwoStep };

// Minimum-key delivery via bitwise descent over the key space [0, key_space).
// Senders and receivers must be disjoint. kTwoStep requires additionally that
// every sender has at most one receiver neighbor (kAuto picks it when legal).
std::vector<KeyedDelivery> sr_comm_min(RadioEngine& eng, const ConstantsProfile& prof,
                                       std::span<const int> senders, std::span<const long long> keys,
                                       std::span<const int> payloads, std::span<const int> receivers,
                                       long long key_space, MinMaxAlgo algo = MinMaxAlgo::kAuto);
std::vector<KeyedDelivery> sr_comm_max(RadioEngine& eng, const ConstantsProfile& prof,
                                       std::span<const int> senders, std::span<const long long> keys,
                                       std::span<const int> payloads, std::span<const int> receivers,
                                       long long key_space, MinMaxAlgo algo = MinMaxAlgo::kAuto);

struct ApxResult {
    std::vector<double> estimate;  // aligned with receivers
    bool phase2_used = false;
    bool eps_floored = false;  // phase 2 ran at the floor accuracy
};

// Estimates |N(v) \cap senders| (exclusive neighborhood) for each receiver.
// Phase 1 collects exact sender identities when the neighborhood is small;
// phase 2 sweeps transmission probabilities and picks the busiest index.
ApxResult approx_count(RadioEngine& eng, const ConstantsProfile& prof, std::span<const int> senders,
                       std::span<const int> receivers, double eps);

// Estimates sum of sender values over the inclusive neighborhood within a
// (1 +- eps) factor. Values are integers in [1, w_max]; the sum is learned
// bucket by bucket with the counting routine at accuracy eps/3.
ApxResult sr_comm_apx(RadioEngine& eng, const ConstantsProfile& prof, std::span<const int> senders,
                      std::span<const long long> values, std::span<const int> receivers, long long w_max,
                      double eps);

// Numeric envelope used to certify the counting constants:
//   e^-1 (1 - 0.51 eps^2) <= (1+eps)(1-(1+eps)/N)^(N-1) <= e^-1 (1 - 0.49 eps^2)
bool counting_envelope_holds(double n, double eps);

}  // namespace energysim
