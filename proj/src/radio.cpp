#include "radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace energysim {

uint64_t default_round_cap(int n) {
    double ln = std::max(1.0, std::log2((double)std::max(2, n)));
    double cap = 10.0 * std::pow((double)std::max(1, n), 1.5) * ln * ln * ln;
    return (uint64_t)cap + 1000;
}

uint64_t algorithm_energy(const EnergyLedger& ledger) {
    uint64_t best = 0;
    for (size_t v = 0; v < ledger.tx.size(); v++) best = std::max(best, ledger.tx[v] + ledger.listen[v]);
    return best;
}

RadioEngine::RadioEngine(const Graph& g, ModelConfig cfg) : g_(&g), cfg_(cfg) {
    if (cfg_.round_cap == 0) cfg_.round_cap = default_round_cap(g.n());
    ledger_.tx.assign(g.n(), 0);
    ledger_.listen.assign(g.n(), 0);
    stamp_.assign(g.n(), 0);
    hit_count_.assign(g.n(), 0);
    hit_sender_.assign(g.n(), 0);
    hit_payload_.assign(g.n(), 0);
    tx_stamp_.assign(g.n(), 0);
    listener_flag_.assign(g.n(), 0);
}

int RadioEngine::add_payload(int bytes) {
    payload_bytes_.push_back(bytes);
    return (int)payload_bytes_.size() - 1;
}

uint64_t RadioEngine::fresh_stream() { return hash_combine(mix64(cfg_.seed), next_stream_++); }

void RadioEngine::advance(uint64_t rounds) {
    now_ += rounds;
    ledger_.rounds += rounds;
    if (ledger_.rounds > cfg_.round_cap)
        throw std::runtime_error("round cap exceeded: " + std::to_string(ledger_.rounds) + " > " +
                                 std::to_string(cfg_.round_cap) + " rounds");
}

void RadioEngine::skip_rounds(uint64_t rounds) { advance(rounds); }

void RadioEngine::charge_listen(std::span<const int> vertices, uint64_t rounds) {
    for (int v : vertices) {
        ledger_.listen[v] += rounds;
        if (ledger_.tx[v] + ledger_.listen[v] > ledger_.rounds)
            throw std::logic_error("listen charge exceeds elapsed rounds");
    }
}

void RadioEngine::mark(const std::string& label) {
    if (cfg_.record_transcript) transcript_.marks.emplace_back(now_, label);
}

std::vector<ChannelFeedback> RadioEngine::step_round(const std::vector<TxIntent>& txs,
                                                     const std::vector<int>& listeners) {
    uint64_t round = now_;
    advance(1);
    token_++;
    for (const auto& t : txs) {
        if (tx_stamp_[t.vertex] == token_) throw std::logic_error("vertex transmits twice in one round");
        tx_stamp_[t.vertex] = token_;
        ledger_.tx[t.vertex]++;
        ledger_.bytes_tx += payload_bytes_[t.payload];
    }
    std::vector<ChannelFeedback> out(listeners.size());
    std::vector<Delivery> deliveries;
    for (size_t i = 0; i < listeners.size(); i++) {
        int v = listeners[i];
        if (tx_stamp_[v] == token_) throw std::logic_error("vertex both transmits and listens");
        ledger_.listen[v]++;
        int count = 0;
        ChannelFeedback fb;
        for (const auto& t : txs) {
            if (g_->has_edge(v, t.vertex)) {
                count++;
                if (count == 1) {
                    fb.sender = t.vertex;
                    fb.payload = t.payload;
                }
            }
        }
        if (count == 1) {
            fb.kind = ChannelFeedback::kReceived;
            deliveries.push_back({v, fb.sender, fb.payload, round});
        } else {
            fb.sender = -1;
            fb.payload = -1;
            fb.kind = (cfg_.model == ChannelModel::kCd && count > 1) ? ChannelFeedback::kNoise
                                                                     : ChannelFeedback::kSilence;
        }
        out[i] = fb;
    }
    if (cfg_.record_transcript && (!txs.empty() || !listeners.empty()))
        transcript_.rounds.push_back({round, txs, listeners, deliveries});
    return out;
}

std::vector<Delivery> RadioEngine::run_block(uint64_t n_rounds, std::vector<TxEvent> tx,
                                             const ListenerPlan& listeners) {
    uint64_t base = now_;
    advance(n_rounds);

    for (int v : listeners.candidates) listener_flag_[v] = 1;

    std::sort(tx.begin(), tx.end(), [](const TxEvent& a, const TxEvent& b) {
        return a.round != b.round ? a.round < b.round : a.vertex < b.vertex;
    });

    // listen energy for member rounds; rounds spent transmitting are deducted below
    for (int v : listeners.candidates)
        ledger_.listen[v] += listeners.listen_rounds ? listeners.listen_rounds(v) : n_rounds;

    auto is_listening = [&](int v, uint64_t r) {
        return listener_flag_[v] && (!listeners.listening || listeners.listening(v, r));
    };

    std::vector<Delivery> deliveries;
    std::vector<int> touched;
    size_t i = 0;
    while (i < tx.size()) {
        size_t j = i;
        uint64_t r = tx[i].round;
        if (r >= n_rounds) throw std::logic_error("tx event beyond block");
        while (j < tx.size() && tx[j].round == r) j++;
        token_++;
        for (size_t k = i; k < j; k++) {
            const TxEvent& e = tx[k];
            if (tx_stamp_[e.vertex] == token_) throw std::logic_error("vertex transmits twice in one round");
            tx_stamp_[e.vertex] = token_;
            ledger_.tx[e.vertex]++;
            ledger_.bytes_tx += payload_bytes_[e.payload];
            if (is_listening(e.vertex, r)) ledger_.listen[e.vertex]--;  // transmit wins the slot
        }
        touched.clear();
        for (size_t k = i; k < j; k++) {
            const TxEvent& e = tx[k];
            for (int w : g_->neighbors(e.vertex)) {
                if (tx_stamp_[w] == token_) continue;  // transmitting, cannot listen
                if (!is_listening(w, r)) continue;
                if (stamp_[w] != token_) {
                    stamp_[w] = token_;
                    hit_count_[w] = 0;
                    touched.push_back(w);
                }
                hit_count_[w]++;
                if (hit_count_[w] == 1) {
                    hit_sender_[w] = e.vertex;
                    hit_payload_[w] = e.payload;
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int w : touched)
            if (hit_count_[w] == 1) deliveries.push_back({w, hit_sender_[w], hit_payload_[w], base + r});
        if (cfg_.record_transcript) {
            TranscriptRound tr;
            tr.round = base + r;
            for (size_t k = i; k < j; k++) tr.txs.push_back({tx[k].vertex, tx[k].payload});
            for (int v : listeners.candidates)
                if (is_listening(v, r) && tx_stamp_[v] != token_) tr.listeners.push_back(v);
            for (const auto& d : deliveries)
                if (d.round == base + r) tr.deliveries.push_back(d);
            transcript_.rounds.push_back(std::move(tr));
        }
        i = j;
    }

    if (cfg_.record_transcript) {
        // listener-only rounds, so that validators can recount energy
        size_t k = 0;
        for (uint64_t r = 0; r < n_rounds; r++) {
            while (k < tx.size() && tx[k].round < r) k++;
            bool has_tx = k < tx.size() && tx[k].round == r;
            if (has_tx) continue;
            TranscriptRound tr;
            tr.round = base + r;
            for (int v : listeners.candidates)
                if (!listeners.listening || listeners.listening(v, r)) tr.listeners.push_back(v);
            if (!tr.listeners.empty()) transcript_.rounds.push_back(std::move(tr));
        }
        std::sort(transcript_.rounds.begin(), transcript_.rounds.end(),
                  [](const TranscriptRound& a, const TranscriptRound& b) { return a.round < b.round; });
    }

    for (int v : listeners.candidates) listener_flag_[v] = 0;
    return deliveries;
}

void run_protocol(RadioEngine& eng, DeviceProgram& program) {
    const Graph& g = eng.graph();
    uint64_t rounds_run = 0;
    while (!program.done(rounds_run)) {
        std::vector<TxIntent> txs;
        std::vector<int> listeners;
        uint64_t round = eng.now();
        for (int v = 0; v < g.n(); v++) {
            RoundAction a = program.act(v, round);
            if (a.kind == RoundAction::kTransmit)
                txs.push_back({v, a.payload});
            else if (a.kind == RoundAction::kListen)
                listeners.push_back(v);
        }
        auto fb = eng.step_round(txs, listeners);
        for (size_t i = 0; i < listeners.size(); i++) program.feedback(listeners[i], round, fb[i]);
        rounds_run++;
    }
}

TranscriptCheck validate_transcript(const Graph& g, const Transcript& t, const EnergyLedger& ledger,
                                    ChannelModel model) {
    TranscriptCheck res;
    auto fail = [&](const std::string& e) {
        res.ok = false;
        res.error = e;
        return res;
    };
    std::vector<uint64_t> tx_count(g.n(), 0), listen_count(g.n(), 0);
    for (const auto& round : t.rounds) {
        std::vector<char> is_tx(g.n(), 0);
        for (const auto& x : round.txs) {
            if (is_tx[x.vertex]) return fail("duplicate transmitter in round");
            is_tx[x.vertex] = 1;
            tx_count[x.vertex]++;
        }
        for (int v : round.listeners) {
            if (is_tx[v]) return fail("half-duplex violation at round " + std::to_string(round.round));
            listen_count[v]++;
        }
        // recompute deliveries
        std::vector<Delivery> expect;
        for (int v : round.listeners) {
            int count = 0;
            Delivery d{v, -1, -1, round.round};
            for (const auto& x : round.txs)
                if (g.has_edge(v, x.vertex)) {
                    count++;
                    if (count == 1) {
                        d.sender = x.vertex;
                        d.payload = x.payload;
                    }
                }
            if (count == 1) expect.push_back(d);
        }
        auto key = [](const Delivery& d) { return std::tuple(d.listener, d.sender, d.payload); };
        if (expect.size() != round.deliveries.size()) return fail("feedback count mismatch");
        auto sorted_expect = expect;
        auto sorted_got = round.deliveries;
        auto cmp = [&](const Delivery& a, const Delivery& b) { return key(a) < key(b); };
        std::sort(sorted_expect.begin(), sorted_expect.end(), cmp);
        std::sort(sorted_got.begin(), sorted_got.end(), cmp);
        for (size_t i = 0; i < sorted_expect.size(); i++)
            if (key(sorted_expect[i]) != key(sorted_got[i])) return fail("feedback soundness violation");
    }
    for (int v = 0; v < g.n(); v++) {
        if (tx_count[v] != ledger.tx[v]) return fail("ledger tx mismatch at vertex " + std::to_string(v));
        if (listen_count[v] != ledger.listen[v])
            return fail("ledger listen mismatch at vertex " + std::to_string(v));
        if (ledger.tx[v] + ledger.listen[v] > ledger.rounds) return fail("energy exceeds rounds");
    }
    (void)model;
    return res;
}

}  // namespace energysim
