#include "primitives.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace energysim {

int ceil_log2(uint64_t x) {
    int b = 0;
    uint64_t p = 1;
    while (p < x) {
        p <<= 1;
        b++;
    }
    return std::max(1, b);
}

void ConstantsProfile::set(const std::string& key, const std::string& value) {
    auto as_int = [&]() { return std::stoi(value); };
    auto as_double = [&]() { return std::stod(value); };
    if (key == "rep_logn") rep_logn = as_int();
    else if (key == "rep_all") rep_all = as_int();
    else if (key == "rep_multi") rep_multi = as_int();
    else if (key == "rep_apx") rep_apx = as_int();
    else if (key == "apx_sweep_mult") apx_sweep_mult = as_int();
    else if (key == "z_apx") z_apx = as_double();
    else if (key == "eps_clamp") eps_clamp = as_double();
    else if (key == "phase2_eps_floor") phase2_eps_floor = as_double();
    else if (key == "env_eps0") env_eps0 = as_double();
    else if (key == "env_n0") env_n0 = as_double();
    else if (key == "env_c0") env_c0 = as_double();
    else if (key == "bfs_radius_mult") bfs_radius_mult = as_double();
    else if (key == "wave_bound_mult") wave_bound_mult = as_int();
    else if (key == "labeling_charge_mult") labeling_charge_mult = as_int();
    else if (key == "bcast_sources_mult") bcast_sources_mult = as_int();
    else if (key == "round_cap_mult") round_cap_mult = as_double();
    else throw std::runtime_error("unknown profile key: " + key);
}

ConstantsProfile ConstantsProfile::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    ConstantsProfile prof;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!key.empty()) prof.set(key, value);
    }
    return prof;
}

ConstantsProfile ConstantsProfile::from_env() {
    const char* path = std::getenv("ENERGYSIM_PROFILE");
    if (path && *path) return from_file(path);
    return ConstantsProfile{};
}

namespace {

// decay schedule: transmit probability 2^-(1 + r mod L) at relative round r
struct DecaySchedule {
    uint64_t rounds;
    int levels;
    double prob(uint64_t r) const { return std::ldexp(1.0, -(int)(1 + r % levels)); }
};

DecaySchedule decay_schedule(const ConstantsProfile& prof, int n, int max_degree) {
    int levels = ceil_log2(std::max(1, max_degree));
    uint64_t sweeps = (uint64_t)prof.rep_logn * ceil_log2(std::max(2, n));
    return {sweeps * levels, levels};
}

}  // namespace

uint64_t sr_comm_rounds(const ConstantsProfile& prof, int n, int max_degree) {
    return decay_schedule(prof, n, max_degree).rounds;
}

uint64_t sr_comm_all_rounds(const ConstantsProfile& prof, int n, int delta_prime) {
    return (uint64_t)prof.rep_all * std::max(1, delta_prime) * ceil_log2(std::max(2, n));
}

std::vector<SrDelivery> sr_comm(RadioEngine& eng, const ConstantsProfile& prof,
                                std::span<const int> senders, std::span<const int> payloads,
                                std::span<const int> receivers) {
    const Graph& g = eng.graph();
    DecaySchedule sched = decay_schedule(prof, g.n(), g.max_degree());

    std::vector<char> is_sender(g.n(), 0);
    for (int u : senders) is_sender[u] = 1;

    std::vector<TxEvent> tx;
    uint64_t stream = eng.fresh_stream();
    for (size_t i = 0; i < senders.size(); i++) {
        Rng rng = eng.stream_rng(stream, senders[i]);
        for (uint64_t r = 0; r < sched.rounds; r++)
            if (rng.next_bool(sched.prob(r))) tx.push_back({r, senders[i], payloads[i]});
    }

    ListenerPlan plan;
    std::vector<int> listeners;
    for (int v : receivers)
        if (!is_sender[v]) listeners.push_back(v);
    plan.candidates = listeners;

    auto deliveries = eng.run_block(sched.rounds, std::move(tx), plan);

    std::vector<int> slot(g.n(), -1);
    std::vector<SrDelivery> out(receivers.size());
    for (size_t i = 0; i < receivers.size(); i++) slot[receivers[i]] = (int)i;
    for (const auto& d : deliveries) {
        int i = slot[d.listener];
        if (i >= 0 && !out[i].received()) out[i] = {d.sender, d.payload};
    }
    return out;
}

std::vector<std::vector<SrDelivery>> sr_comm_all(RadioEngine& eng, const ConstantsProfile& prof,
                                                 std::span<const int> senders,
                                                 std::span<const int> payloads,
                                                 std::span<const int> receivers, int delta_prime) {
    const Graph& g = eng.graph();
    delta_prime = std::max(1, delta_prime);
    uint64_t rounds = (uint64_t)prof.rep_all * delta_prime * ceil_log2(std::max(2, g.n()));
    double p = 1.0 / delta_prime;

    std::vector<TxEvent> tx;
    uint64_t stream = eng.fresh_stream();
    for (size_t i = 0; i < senders.size(); i++) {
        Rng rng = eng.stream_rng(stream, senders[i]);
        uint64_t r = rng.next_geometric_gap(p);
        while (r < rounds) {
            tx.push_back({r, senders[i], payloads[i]});
            r += 1 + rng.next_geometric_gap(p);
        }
    }

    ListenerPlan plan;
    std::vector<int> listeners(receivers.begin(), receivers.end());
    plan.candidates = listeners;
    auto deliveries = eng.run_block(rounds, std::move(tx), plan);

    std::vector<int> slot(g.n(), -1);
    for (size_t i = 0; i < receivers.size(); i++) slot[receivers[i]] = (int)i;
    std::vector<std::vector<SrDelivery>> out(receivers.size());
    std::vector<std::unordered_set<int>> seen(receivers.size());
    for (const auto& d : deliveries) {
        int i = slot[d.listener];
        if (i >= 0 && seen[i].insert(d.sender).second) out[i].push_back({d.sender, d.payload});
    }
    return out;
}

std::vector<std::vector<int>> sr_comm_multi(RadioEngine& eng, const ConstantsProfile& prof,
                                            const std::vector<MultiMessage>& messages,
                                            std::span<const int> receivers, int m_bound) {
    const Graph& g = eng.graph();
    m_bound = std::max(1, m_bound);
    uint64_t iterations = (uint64_t)prof.rep_multi * m_bound * ceil_log2(std::max(2, g.n()));
    double join_p = 1.0 / m_bound;

    uint64_t recv_stream = eng.fresh_stream();

    // a sender that joined for several messages transmits them as one bundle
    struct BundleHash {
        size_t operator()(const std::vector<int>& k) const {
            uint64_t h = 0x9e3779b97f4a7c15ULL;
            for (int x : k) h = hash_combine(h, (uint64_t)x);
            return (size_t)h;
        }
    };
    std::unordered_map<std::vector<int>, int, BundleHash> bundle_payloads;
    std::unordered_map<int, std::vector<int>> bundle_content;
    auto bundle_of = [&](std::vector<int> ids) {
        std::sort(ids.begin(), ids.end());
        auto it = bundle_payloads.find(ids);
        if (it != bundle_payloads.end()) return it->second;
        int bytes = 0;
        for (int id : ids) bytes += eng.payload_bytes(id);
        int pid = eng.add_payload(bytes);
        bundle_payloads.emplace(ids, pid);
        bundle_content.emplace(pid, std::move(ids));
        return pid;
    };

    std::vector<int> slot(g.n(), -1);
    for (size_t i = 0; i < receivers.size(); i++) slot[receivers[i]] = (int)i;
    std::vector<std::vector<int>> out(receivers.size());
    std::vector<std::unordered_set<int>> seen(receivers.size());

    std::vector<char> in_rprime(g.n(), 0);
    std::vector<std::vector<int>> joined(g.n());

    for (uint64_t iter = 0; iter < iterations; iter++) {
        std::vector<int> rprime;
        for (int v : receivers)
            if (fair_coin_at(hash_combine(recv_stream, (uint64_t)v), iter)) {
                rprime.push_back(v);
                in_rprime[v] = 1;
            }
        std::vector<int> sprime;
        for (const auto& msg : messages) {
            if (!hash_coin(msg.seed, iter, join_p)) continue;
            for (int u : msg.holders) {
                if (in_rprime[u]) continue;
                if (joined[u].empty()) sprime.push_back(u);
                joined[u].push_back(msg.payload);
            }
        }
        std::vector<int> payloads(sprime.size());
        for (size_t i = 0; i < sprime.size(); i++)
            payloads[i] = joined[sprime[i]].size() == 1 ? joined[sprime[i]][0] : bundle_of(joined[sprime[i]]);

        auto got = sr_comm(eng, prof, sprime, payloads, rprime);
        for (size_t i = 0; i < rprime.size(); i++) {
            if (!got[i].received()) continue;
            int idx = slot[rprime[i]];
            auto content = bundle_content.find(got[i].payload);
            if (content == bundle_content.end()) {
                if (seen[idx].insert(got[i].payload).second) out[idx].push_back(got[i].payload);
            } else {
                for (int id : content->second)
                    if (seen[idx].insert(id).second) out[idx].push_back(id);
            }
        }
        for (int v : rprime) in_rprime[v] = 0;
        for (int u : sprime) joined[u].clear();
    }
    return out;
}

namespace {

struct MinMaxContext {
    RadioEngine& eng;
    const ConstantsProfile& prof;
    std::span<const int> senders;
    std::vector<long long> keys;  // already flipped for the max variant
    std::span<const int> payloads;
    std::span<const int> receivers;
    int bits;
};

long long key_prefix(long long key, int width, int bits) {
    return width == 0 ? 0 : key >> (bits - width);
}

// Bit-by-bit descent: at each level, one any-one round per candidate prefix.
// A receiver joins the two rounds extending its own prefix; reception in the
// 0-branch means the minimum continues with 0.
std::vector<KeyedDelivery> min_general(MinMaxContext& ctx) {
    std::vector<char> active(ctx.receivers.size(), 1);
    std::vector<long long> prefix(ctx.receivers.size(), 0);
    std::vector<KeyedDelivery> out(ctx.receivers.size());

    {  // presence test: receivers with no sender in range withdraw
        auto got = sr_comm(ctx.eng, ctx.prof, ctx.senders, ctx.payloads, ctx.receivers);
        for (size_t i = 0; i < ctx.receivers.size(); i++)
            if (!got[i].received()) active[i] = 0;
        if (ctx.bits == 0) {
            for (size_t i = 0; i < ctx.receivers.size(); i++)
                if (got[i].received()) out[i] = {got[i].sender, got[i].payload, 0};
            return out;
        }
    }

    for (int level = 0; level < ctx.bits; level++) {
        std::vector<SrDelivery> branch[2];
        branch[0].resize(ctx.receivers.size());
        branch[1].resize(ctx.receivers.size());
        for (long long s = 0; s < (1LL << (level + 1)); s++) {
            std::vector<int> sprime, spayloads, rprime, rslot;
            for (size_t j = 0; j < ctx.senders.size(); j++)
                if (key_prefix(ctx.keys[j], level + 1, ctx.bits) == s) {
                    sprime.push_back(ctx.senders[j]);
                    spayloads.push_back(ctx.payloads[j]);
                }
            for (size_t i = 0; i < ctx.receivers.size(); i++)
                if (active[i] && prefix[i] == (s >> 1)) {
                    rprime.push_back(ctx.receivers[i]);
                    rslot.push_back((int)i);
                }
            auto got = sr_comm(ctx.eng, ctx.prof, sprime, spayloads, rprime);
            for (size_t k = 0; k < rprime.size(); k++)
                if (got[k].received()) branch[s & 1][rslot[k]] = got[k];
        }
        for (size_t i = 0; i < ctx.receivers.size(); i++) {
            if (!active[i]) continue;
            int bit;
            if (branch[0][i].received())
                bit = 0;
            else if (branch[1][i].received())
                bit = 1;
            else {
                active[i] = 0;  // lost track; counts as a miss
                continue;
            }
            prefix[i] = (prefix[i] << 1) | bit;
            if (level == ctx.bits - 1) out[i] = {branch[bit][i].sender, branch[bit][i].payload, prefix[i]};
        }
    }
    return out;
}

// Disjoint-neighborhood variant: receivers and their sender neighborhoods run
// the descent jointly, one round per bit plus an echo round.
std::vector<KeyedDelivery> min_two_step(MinMaxContext& ctx) {
    const Graph& g = ctx.eng.graph();
    std::vector<char> r_active(ctx.receivers.size(), 1);
    std::vector<char> s_active(ctx.senders.size(), 1);
    std::vector<long long> prefix(ctx.receivers.size(), 0);
    std::vector<long long> echoed(ctx.senders.size(), 0);  // prefix heard from the unique receiver

    {
        auto got = sr_comm(ctx.eng, ctx.prof, ctx.senders, ctx.payloads, ctx.receivers);
        for (size_t i = 0; i < ctx.receivers.size(); i++)
            if (!got[i].received()) r_active[i] = 0;
    }

    std::vector<int> echo_payload(ctx.receivers.size(), -1);
    std::vector<int> slot_of(g.n(), -1);
    for (size_t i = 0; i < ctx.receivers.size(); i++) slot_of[ctx.receivers[i]] = (int)i;

    for (int level = 0; level < ctx.bits; level++) {
        std::vector<int> rprime, rslot;
        for (size_t i = 0; i < ctx.receivers.size(); i++)
            if (r_active[i]) {
                rprime.push_back(ctx.receivers[i]);
                rslot.push_back((int)i);
            }

        // step 1: senders continuing the echoed prefix with bit 0 speak up
        std::vector<int> sprime, spayloads;
        for (size_t j = 0; j < ctx.senders.size(); j++) {
            if (!s_active[j]) continue;
            if (key_prefix(ctx.keys[j], level, ctx.bits) != echoed[j]) continue;
            if (((ctx.keys[j] >> (ctx.bits - level - 1)) & 1) == 0) {
                sprime.push_back(ctx.senders[j]);
                spayloads.push_back(ctx.payloads[j]);
            }
        }
        auto got = sr_comm(ctx.eng, ctx.prof, sprime, spayloads, rprime);
        for (size_t k = 0; k < rprime.size(); k++)
            prefix[rslot[k]] = (prefix[rslot[k]] << 1) | (got[k].received() ? 0 : 1);

        // step 2: receivers echo the extended prefix to their neighborhoods
        std::vector<int> epayloads;
        for (size_t k = 0; k < rprime.size(); k++) {
            int i = rslot[k];
            if (echo_payload[i] < 0) echo_payload[i] = ctx.eng.add_payload(8);
            epayloads.push_back(echo_payload[i]);
        }
        std::vector<int> listeners;
        std::vector<int> listener_slot;
        for (size_t j = 0; j < ctx.senders.size(); j++)
            if (s_active[j]) {
                listeners.push_back(ctx.senders[j]);
                listener_slot.push_back((int)j);
            }
        auto echo = sr_comm(ctx.eng, ctx.prof, rprime, epayloads, listeners);
        for (size_t t = 0; t < listeners.size(); t++) {
            int j = listener_slot[t];
            if (!echo[t].received()) {
                s_active[j] = 0;
                continue;
            }
            echoed[j] = prefix[slot_of[echo[t].sender]];
            if (key_prefix(ctx.keys[j], level + 1, ctx.bits) != echoed[j]) s_active[j] = 0;
        }
    }

    // fetch the message from the senders holding the resolved minimum key
    std::vector<int> sprime, spayloads;
    for (size_t j = 0; j < ctx.senders.size(); j++)
        if (s_active[j] && ctx.keys[j] == echoed[j]) {
            sprime.push_back(ctx.senders[j]);
            spayloads.push_back(ctx.payloads[j]);
        }
    std::vector<int> rprime, rslot;
    for (size_t i = 0; i < ctx.receivers.size(); i++)
        if (r_active[i]) {
            rprime.push_back(ctx.receivers[i]);
            rslot.push_back((int)i);
        }
    auto got = sr_comm(ctx.eng, ctx.prof, sprime, spayloads, rprime);
    std::vector<KeyedDelivery> out(ctx.receivers.size());
    for (size_t k = 0; k < rprime.size(); k++)
        if (got[k].received()) out[rslot[k]] = {got[k].sender, got[k].payload, prefix[rslot[k]]};
    return out;
}

std::vector<KeyedDelivery> min_max_impl(RadioEngine& eng, const ConstantsProfile& prof,
                                        std::span<const int> senders, std::span<const long long> keys,
                                        std::span<const int> payloads, std::span<const int> receivers,
                                        long long key_space, MinMaxAlgo algo, bool maximize) {
    if (key_space < 1) throw std::invalid_argument("key space must be >= 1");
    const Graph& g = eng.graph();
    std::vector<char> is_receiver(g.n(), 0);
    for (int v : receivers) is_receiver[v] = 1;
    for (int u : senders)
        if (is_receiver[u])
            throw std::invalid_argument("min/max requires disjoint sender and receiver sets");

    int bits = 0;
    while ((1LL << bits) < key_space) bits++;

    MinMaxContext ctx{eng, prof, senders, {}, payloads, receivers, bits};
    ctx.keys.assign(keys.begin(), keys.end());
    for (long long& k : ctx.keys) {
        if (k < 0 || k >= key_space) throw std::invalid_argument("key out of range");
        if (maximize) k = ((1LL << bits) - 1) - k;
    }

    bool two_step_ok = true;
    for (int u : senders) {
        int cnt = 0;
        for (int w : g.neighbors(u)) cnt += is_receiver[w];
        if (cnt > 1) {
            two_step_ok = false;
            break;
        }
    }
    if (algo == MinMaxAlgo::kTwoStep && !two_step_ok)
        throw std::invalid_argument("two-step min/max requires senders with at most one receiver neighbor");
    bool use_two_step = algo == MinMaxAlgo::kTwoStep || (algo == MinMaxAlgo::kAuto && two_step_ok);

    auto out = use_two_step ? min_two_step(ctx) : min_general(ctx);
    if (maximize)
        for (auto& d : out)
            if (d.received()) d.key = ((1LL << bits) - 1) - d.key;
    return out;
}

}  // namespace

std::vector<KeyedDelivery> sr_comm_min(RadioEngine& eng, const ConstantsProfile& prof,
                                       std::span<const int> senders, std::span<const long long> keys,
                                       std::span<const int> payloads, std::span<const int> receivers,
                                       long long key_space, MinMaxAlgo algo) {
    return min_max_impl(eng, prof, senders, keys, payloads, receivers, key_space, algo, false);
}

std::vector<KeyedDelivery> sr_comm_max(RadioEngine& eng, const ConstantsProfile& prof,
                                       std::span<const int> senders, std::span<const long long> keys,
                                       std::span<const int> payloads, std::span<const int> receivers,
                                       long long key_space, MinMaxAlgo algo) {
    return min_max_impl(eng, prof, senders, keys, payloads, receivers, key_space, algo, true);
}

ApxResult approx_count(RadioEngine& eng, const ConstantsProfile& prof, std::span<const int> senders,
                       std::span<const int> receivers, double eps) {
    if (eps <= 0) throw std::invalid_argument("accuracy must be positive");
    eps = std::min(eps, prof.eps_clamp);
    const Graph& g = eng.graph();
    int n = g.n();
    int logn = ceil_log2(std::max(2, n));

    std::vector<int> slot(n, -1);
    for (size_t i = 0; i < receivers.size(); i++) slot[receivers[i]] = (int)i;
    std::vector<char> is_sender(n, 0);
    std::vector<int> id_payload(n, -1);
    for (int u : senders) {
        is_sender[u] = 1;
        if (id_payload[u] < 0) id_payload[u] = eng.add_payload(8);
    }

    ApxResult res;
    res.estimate.assign(receivers.size(), 0.0);
    std::vector<char> resolved(receivers.size(), 0);

    // ---- phase 1: sparse ID collection ----
    uint64_t z = (uint64_t)std::ceil((prof.z_apx / eps) * (prof.z_apx / eps));
    uint64_t p1_rounds = (uint64_t)prof.rep_apx * logn * z;
    double q = 1.0 / (double)z;
    {
        std::vector<TxEvent> tx;
        uint64_t stream = eng.fresh_stream();
        for (int u : senders) {
            Rng rng = eng.stream_rng(stream, u);
            uint64_t r = rng.next_geometric_gap(q);
            while (r < p1_rounds) {
                tx.push_back({r, u, id_payload[u]});
                r += 1 + rng.next_geometric_gap(q);
            }
        }
        ListenerPlan plan;
        std::vector<int> listeners(receivers.begin(), receivers.end());
        plan.candidates = listeners;
        auto deliveries = eng.run_block(p1_rounds, std::move(tx), plan);

        std::vector<std::unordered_map<int, uint64_t>> counts(receivers.size());
        for (const auto& d : deliveries) {
            int i = slot[d.listener];
            if (i >= 0) counts[i][d.sender]++;
        }
        // a receiver whose every observed sender came through loudly has seen
        // the whole neighborhood; anyone else defers to the sweep
        double threshold = 0.5 * (double)(prof.rep_apx * logn) / std::exp(1.0);
        for (size_t i = 0; i < receivers.size(); i++) {
            if (counts[i].empty()) continue;
            uint64_t min_count = UINT64_MAX;
            for (auto& [u, c] : counts[i]) min_count = std::min(min_count, c);
            if ((double)min_count >= threshold) {
                res.estimate[i] = (double)counts[i].size();
                resolved[i] = 1;
            }
        }
    }

    std::vector<int> pending, pending_slot;
    for (size_t i = 0; i < receivers.size(); i++)
        if (!resolved[i]) {
            pending.push_back(receivers[i]);
            pending_slot.push_back((int)i);
        }
    if (pending.empty()) return res;

    // ---- phase 2: probability sweep, busiest index wins ----
    res.phase2_used = true;
    double eps2 = eps;
    if (eps2 < prof.phase2_eps_floor) {
        eps2 = prof.phase2_eps_floor;
        res.eps_floored = true;
    }
    int delta = std::max(2, g.max_degree());
    std::vector<double> probs;
    double p = std::min(1.0, 2.0 / delta);
    while (true) {
        probs.push_back(p);
        if (p >= 1.0) break;
        p = std::min(1.0, p * (1.0 + eps2));
    }
    uint64_t rounds_per_index =
        (uint64_t)std::ceil((double)prof.apx_sweep_mult * prof.rep_apx * logn / (eps2 * eps2 * eps2 * eps2));

    std::vector<char> pending_flag(n, 0);
    for (int v : pending) pending_flag[v] = 1;
    std::vector<std::vector<uint64_t>> hits(pending.size(), std::vector<uint64_t>(probs.size(), 0));
    std::vector<int> pending_pos(n, -1);
    for (size_t k = 0; k < pending.size(); k++) pending_pos[pending[k]] = (int)k;

    for (size_t idx = 0; idx < probs.size(); idx++) {
        double send_p = probs[idx] / 2;  // the role coin is folded into the rate
        uint64_t stream = eng.fresh_stream();
        std::vector<TxEvent> tx;
        std::unordered_map<int, uint64_t> listen_counts;
        bool any_mixed = false;

        for (int u : senders) {
            if (pending_flag[u]) continue;  // handled as a mixed role below
            Rng rng = eng.stream_rng(stream, u);
            uint64_t r = rng.next_geometric_gap(send_p);
            while (r < rounds_per_index) {
                tx.push_back({r, u, id_payload[u]});
                r += 1 + rng.next_geometric_gap(send_p);
            }
        }
        for (size_t k = 0; k < pending.size(); k++) {
            int v = pending[k];
            if (!is_sender[v]) {
                listen_counts[v] = rounds_per_index;
                continue;
            }
            // unresolved receiver that is also a sender: a per-round coin picks
            // transmit (p/2), listen (1/2) or idle, queried consistently by hash
            any_mixed = true;
            uint64_t vstream = hash_combine(stream, (uint64_t)v);
            uint64_t cnt = 0;
            for (uint64_t r = 0; r < rounds_per_index; r++) {
                double roll = (hash_combine(vstream, r) >> 11) * 0x1.0p-53;
                if (roll < send_p)
                    tx.push_back({r, v, id_payload[v]});
                else if (roll < send_p + 0.5)
                    cnt++;
            }
            listen_counts[v] = cnt;
        }

        ListenerPlan plan;
        plan.candidates = pending;
        plan.listen_rounds = [&listen_counts](int v) { return listen_counts.at(v); };
        if (any_mixed) {
            const std::vector<char>& sender_flag = is_sender;
            plan.listening = [stream, send_p, &sender_flag](int v, uint64_t r) {
                if (!sender_flag[v]) return true;
                double roll = (hash_combine(hash_combine(stream, (uint64_t)v), r) >> 11) * 0x1.0p-53;
                return roll >= send_p && roll < send_p + 0.5;
            };
        }
        auto deliveries = eng.run_block(rounds_per_index, std::move(tx), plan);
        for (const auto& d : deliveries) {
            int k = pending_pos[d.listener];
            if (k >= 0) hits[k][idx]++;
        }
    }

    for (size_t k = 0; k < pending.size(); k++) {
        uint64_t best = 0;
        size_t best_idx = 0;
        bool any = false;
        for (size_t idx = 0; idx < probs.size(); idx++)
            if (hits[k][idx] > best) {
                best = hits[k][idx];
                best_idx = idx;
                any = true;
            }
        res.estimate[pending_slot[k]] = any ? 2.0 / probs[best_idx] : 0.0;
    }
    return res;
}

ApxResult sr_comm_apx(RadioEngine& eng, const ConstantsProfile& prof, std::span<const int> senders,
                      std::span<const long long> values, std::span<const int> receivers, long long w_max,
                      double eps) {
    if (eps <= 0) throw std::invalid_argument("accuracy must be positive");
    if (w_max < 1) throw std::invalid_argument("value bound must be >= 1");
    eps = std::min(eps, prof.eps_clamp);
    double eps_bucket = eps / 3.0;  // (1+eps/3)^2 < 1+eps for eps <= 1

    std::vector<double> bounds{0.0, 1.0};
    while (bounds.back() < (double)w_max)
        bounds.push_back(std::min((double)w_max, bounds.back() * (1.0 + eps_bucket)));

    const Graph& g = eng.graph();
    std::vector<long long> value_of(g.n(), 0);
    for (size_t j = 0; j < senders.size(); j++) {
        if (values[j] < 0 || values[j] > w_max) throw std::invalid_argument("value outside [0, W]");
        value_of[senders[j]] = values[j];
    }

    ApxResult res;
    res.estimate.assign(receivers.size(), 0.0);
    for (size_t i = 1; i < bounds.size(); i++) {
        std::vector<int> bucket;
        for (size_t j = 0; j < senders.size(); j++) {
            double m = (double)values[j];
            if (m > bounds[i - 1] && m <= bounds[i]) bucket.push_back(senders[j]);
        }
        auto part = approx_count(eng, prof, bucket, receivers, eps_bucket);
        res.phase2_used = res.phase2_used || part.phase2_used;
        res.eps_floored = res.eps_floored || part.eps_floored;
        for (size_t k = 0; k < receivers.size(); k++) res.estimate[k] += part.estimate[k] * bounds[i];
    }
    for (size_t k = 0; k < receivers.size(); k++) res.estimate[k] += (double)value_of[receivers[k]];
    return res;
}

bool counting_envelope_holds(double n, double eps) {
    double a = 1.0 + eps;
    double mid = a * std::exp((n - 1.0) * std::log1p(-a / n));
    double lo = std::exp(-1.0) * (1.0 - 0.51 * eps * eps);
    double hi = std::exp(-1.0) * (1.0 - 0.49 * eps * eps);
    return lo <= mid && mid <= hi;
}

}  // namespace energysim
