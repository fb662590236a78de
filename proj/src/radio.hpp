#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace energysim {

enum class ChannelModel { kNoCd, kCd };

struct ModelConfig {
    ChannelModel model = ChannelModel::kNoCd;
    uint64_t seed = 0;
    // 0 = derive the default cap from n.
    uint64_t round_cap = 0;
    bool record_transcript = false;
};

uint64_t default_round_cap(int n);

struct EnergyLedger {
    std::vector<uint64_t> tx;
    std::vector<uint64_t> listen;
    uint64_t rounds = 0;
    uint64_t bytes_tx = 0;
};

// Maximum total channel accesses over all devices.
uint64_t algorithm_energy(const EnergyLedger& ledger);

struct RoundAction {
    enum Kind { kIdle, kListen, kTransmit };
    Kind kind = kIdle;
    int payload = -1;  // engine payload id, kTransmit only
};

struct ChannelFeedback {
    enum Kind { kReceived, kSilence, kNoise };
    Kind kind = kSilence;
    int sender = -1;
    int payload = -1;
};

struct TxIntent {
    int vertex;
    int payload;
};

struct TxEvent {
    uint64_t round;  // relative to the start of the block
    int vertex;
    int payload;
};

struct Delivery {
    int listener;
    int sender;
    int payload;
    uint64_t round;  // absolute
};

struct TranscriptRound {
    uint64_t round;
    std::vector<TxIntent> txs;
    std::vector<int> listeners;
    std::vector<Delivery> deliveries;
};

struct Transcript {
    std::vector<TranscriptRound> rounds;  // rounds with at least one action
    std::vector<std::pair<uint64_t, std::string>> marks;
};

// Per-round membership view for a block of rounds. listen_rounds(v) must
// equal the number of rounds r in [0, n_rounds) with listening(v, r);
// the engine subtracts rounds in which v itself transmits.
struct ListenerPlan {
    std::vector<int> candidates;
    std::function<bool(int, uint64_t)> listening;        // nullptr = every round
    std::function<uint64_t(int)> listen_rounds;          // nullptr = n_rounds
};

// Round-synchronous half-duplex radio channel with collision feedback and
// exact per-device energy accounting. Deterministic given (graph, seed).
class RadioEngine {
public:
    RadioEngine(const Graph& g, ModelConfig cfg);

    const Graph& graph() const { return *g_; }
    const ModelConfig& config() const { return cfg_; }
    const EnergyLedger& ledger() const { return ledger_; }
    uint64_t now() const { return now_; }

    // Registers a payload; only the byte size is tracked here. Protocol
    // content lives in caller-side tables keyed by the returned id.
    int add_payload(int bytes);
    int payload_bytes(int id) const { return payload_bytes_[id]; }

    // Fresh deterministic RNG stream (derivation order is part of the
    // transcript contract).
    uint64_t fresh_stream();
    Rng stream_rng(uint64_t stream, uint64_t tag) const { return Rng(hash_combine(stream, tag), cfg_.seed); }

    // Exact one-round semantics. Every vertex appears in at most one role.
    // Returns feedback for listeners (indexed as listeners[i] -> out[i]).
    std::vector<ChannelFeedback> step_round(const std::vector<TxIntent>& txs,
                                            const std::vector<int>& listeners);

    // Advances time with no channel activity.
    void skip_rounds(uint64_t rounds);

    // Books listen slots without simulating them; used to account for
    // constructions that run behind an offline oracle at a known cost.
    void charge_listen(std::span<const int> vertices, uint64_t rounds);

    // Runs a block of n_rounds rounds with sparse transmit events.
    // Listeners are charged listen energy for their member rounds (minus
    // rounds they transmit in); transmitters are charged per event.
    // Returns successful deliveries in round order.
    std::vector<Delivery> run_block(uint64_t n_rounds, std::vector<TxEvent> tx,
                                    const ListenerPlan& listeners);

    void mark(const std::string& label);
    const Transcript& transcript() const { return transcript_; }

private:
    void advance(uint64_t rounds);

    const Graph* g_;
    ModelConfig cfg_;
    EnergyLedger ledger_;
    uint64_t now_ = 0;
    uint64_t next_stream_ = 1;
    std::vector<int> payload_bytes_;
    Transcript transcript_;

    // scratch for collision counting (token-stamped, never cleared)
    std::vector<uint64_t> stamp_;
    std::vector<int> hit_count_;
    std::vector<int> hit_sender_;
    std::vector<int> hit_payload_;
    std::vector<uint64_t> tx_stamp_;
    std::vector<char> listener_flag_;
    uint64_t token_ = 0;
};

// State machine interface for the generic per-device runner.
class DeviceProgram {
public:
    virtual ~DeviceProgram() = default;
    virtual RoundAction act(int vertex, uint64_t round) = 0;
    virtual void feedback(int /*vertex*/, uint64_t /*round*/, const ChannelFeedback& /*fb*/) {}
    virtual bool done(uint64_t rounds_run) const = 0;
};

// Polls every device each round until the program reports done.
// Throws on round-cap overrun.
void run_protocol(RadioEngine& eng, DeviceProgram& program);

// Transcript validation used by tests: half-duplex, feedback soundness
// against the graph, and energy agreement with the ledger.
struct TranscriptCheck {
    bool ok = true;
    std::string error;
};
TranscriptCheck validate_transcript(const Graph& g, const Transcript& t, const EnergyLedger& ledger,
                                    ChannelModel model);

}  // namespace energysim
