#include "labeling.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace energysim {

bool validate_labeling(const Graph& g, const GoodLabeling& labeling, std::span<const int> domain) {
    std::vector<char> in_domain(g.n(), 0);
    for (int v : domain) in_domain[v] = 1;
    int zeros = 0;
    for (int v : domain) {
        int l = labeling.labels[v];
        if (l < 0 || l >= g.n()) return false;
        if (l == 0) {
            zeros++;
            continue;
        }
        bool has_parent = false;
        for (int w : g.neighbors(v))
            if (in_domain[w] && labeling.labels[w] == l - 1) {
                has_parent = true;
                break;
            }
        if (!has_parent) return false;
    }
    return zeros == 1 && labeling.root >= 0 && labeling.labels[labeling.root] == 0;
}

namespace {

std::vector<int> bfs_in_domain(const Graph& g, std::span<const int> domain, int root) {
    std::vector<int> dist(g.n(), -1);
    std::vector<char> in_domain(g.n(), 0);
    for (int v : domain) in_domain[v] = 1;
    std::queue<int> q;
    dist[root] = 0;
    q.push(root);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : g.neighbors(v))
            if (in_domain[w] && dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    return dist;
}

}  // namespace

std::vector<GoodLabeling> build_good_labelings(RadioEngine& eng, const ConstantsProfile& prof,
                                               const std::vector<std::vector<int>>& domains,
                                               const std::vector<int>& designated_roots,
                                               LabelingMode mode) {
    const Graph& g = eng.graph();
    int n = g.n();
    std::vector<GoodLabeling> out(domains.size());
    std::vector<int> roots(domains.size());
    for (size_t d = 0; d < domains.size(); d++) {
        if (domains[d].empty()) throw std::invalid_argument("empty labeling domain");
        roots[d] = designated_roots[d] >= 0 ? designated_roots[d]
                                            : *std::min_element(domains[d].begin(), domains[d].end());
        out[d].labels.assign(n, -1);
        out[d].root = roots[d];
        auto dist = bfs_in_domain(g, domains[d], roots[d]);
        std::vector<int> unreached;
        for (int v : domains[d])
            if (dist[v] < 0) unreached.push_back(v);
        if (!unreached.empty()) {
            std::string msg = "labeling domain not connected; unreached:";
            for (int v : unreached) msg += " " + std::to_string(v);
            throw std::runtime_error(msg);
        }
        if (mode == LabelingMode::kOracleCharged)
            for (int v : domains[d]) out[d].labels[v] = dist[v];
    }

    int logn = ceil_log2(std::max(2, n));
    int logd = ceil_log2(std::max(1, g.max_degree()));
    if (mode == LabelingMode::kOracleCharged) {
        // cost of the known construction: O(n log D log^2 n) time,
        // O(log D log^2 n) listen slots per device
        uint64_t charge = (uint64_t)prof.labeling_charge_mult * logd * logn * logn;
        eng.skip_rounds(charge * (uint64_t)n);
        for (size_t d = 0; d < domains.size(); d++) eng.charge_listen(domains[d], charge);
        return out;
    }

    // naive in-model growth: the labeled frontier announces its layer, the
    // unlabeled listen until captured
    std::vector<int> domain_of(n, -1);
    for (size_t d = 0; d < domains.size(); d++)
        for (int v : domains[d]) domain_of[v] = (int)d;
    for (size_t d = 0; d < domains.size(); d++) out[d].labels[roots[d]] = 0;

    std::unordered_map<int, int> layer_payload;  // layer value -> payload id
    auto payload_for = [&](int layer) {
        auto it = layer_payload.find(layer);
        if (it != layer_payload.end()) return it->second;
        int id = eng.add_payload(8);
        layer_payload.emplace(layer, id);
        return id;
    };

    for (int step = 0; step + 1 < n; step++) {
        std::vector<int> senders, payloads, listeners;
        for (const auto& domain : domains)
            for (int v : domain) {
                int d = domain_of[v];
                if (out[d].labels[v] == step) {
                    senders.push_back(v);
                    payloads.push_back(payload_for(step));
                } else if (out[d].labels[v] < 0) {
                    listeners.push_back(v);
                }
            }
        if (senders.empty() && listeners.empty()) {
            eng.skip_rounds(sr_comm_rounds(prof, n, g.max_degree()));
            continue;
        }
        auto got = sr_comm(eng, prof, senders, payloads, listeners);
        for (size_t i = 0; i < listeners.size(); i++)
            if (got[i].received()) out[domain_of[listeners[i]]].labels[listeners[i]] = step + 1;
    }
    return out;
}

GoodLabeling build_good_labeling(RadioEngine& eng, const ConstantsProfile& prof, int designated_root,
                                 LabelingMode mode) {
    std::vector<int> all(eng.graph().n());
    for (int v = 0; v < eng.graph().n(); v++) all[v] = v;
    return build_good_labelings(eng, prof, {all}, {designated_root}, mode)[0];
}

namespace {

struct LayerIndex {
    std::vector<std::vector<int>> members;  // by label
    int max_label = 0;
};

LayerIndex layer_index(const GoodLabeling& labeling, std::span<const int> domain, int n) {
    LayerIndex idx;
    idx.members.resize(n);
    for (int v : domain) {
        int l = labeling.labels[v];
        if (l < 0) throw std::invalid_argument("cast domain vertex without a label");
        idx.members[l].push_back(v);
        idx.max_label = std::max(idx.max_label, l);
    }
    return idx;
}

// set-of-payloads interning shared by the relaying casts
class Bundler {
public:
    explicit Bundler(RadioEngine& eng) : eng_(&eng) {}

    int intern(std::vector<int> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() == 1) return ids[0];
        auto it = cache_.find(ids);
        if (it != cache_.end()) return it->second;
        int bytes = 0;
        for (int id : ids) bytes += eng_->payload_bytes(id);
        int pid = eng_->add_payload(bytes);
        cache_.emplace(ids, pid);
        content_.emplace(pid, std::move(ids));
        return pid;
    }

    // expands one level of bundling
    std::vector<int> unpack(int id) const {
        auto it = content_.find(id);
        if (it == content_.end()) return {id};
        return it->second;
    }

private:
    struct Hash {
        size_t operator()(const std::vector<int>& k) const {
            uint64_t h = 0x2545f4914f6cdd1dULL;
            for (int x : k) h = hash_combine(h, (uint64_t)x);
            return (size_t)h;
        }
    };
    RadioEngine* eng_;
    std::unordered_map<std::vector<int>, int, Hash> cache_;
    std::unordered_map<int, std::vector<int>> content_;
};

}  // namespace

std::vector<int> converge_cast(RadioEngine& eng, const ConstantsProfile& prof,
                               const GoodLabeling& labeling, std::span<const int> domain,
                               const std::vector<SourceMessage>& sources, const CastOptions& opt) {
    const Graph& g = eng.graph();
    int n = g.n();
    LayerIndex layers = layer_index(labeling, domain, n);
    Bundler bundler(eng);

    std::vector<std::vector<int>> held(n);
    std::unordered_map<int, uint64_t> seed_of;
    for (const auto& s : sources) {
        held[s.source].push_back(s.payload);
        seed_of[s.payload] = s.seed;
    }

    int delta_prime = opt.delta_prime > 0 ? opt.delta_prime : std::max(1, g.max_degree());
    uint64_t sweep_rounds = opt.mode == CombineMode::kAllMessages
                                ? sr_comm_all_rounds(prof, n, delta_prime)
                            : opt.mode == CombineMode::kAnyOne
                                ? sr_comm_rounds(prof, n, g.max_degree())
                                : (uint64_t)prof.rep_multi * std::max(1, opt.m_bound) *
                                      ceil_log2(std::max(2, n)) * sr_comm_rounds(prof, n, g.max_degree());

    static const std::vector<int> kNoMembers;
    for (int i = n - 1; i >= 1; i--) {
        const auto& up = i <= layers.max_label ? layers.members[i] : kNoMembers;
        const auto& down = i - 1 <= layers.max_label ? layers.members[i - 1] : kNoMembers;
        if (up.empty() && down.empty()) {
            eng.skip_rounds(sweep_rounds);
            continue;
        }

        std::vector<int> senders, payloads;
        for (int v : up)
            if (!held[v].empty()) senders.push_back(v);

        switch (opt.mode) {
            case CombineMode::kAllMessages: {
                payloads.reserve(senders.size());
                for (int v : senders) payloads.push_back(bundler.intern(held[v]));
                auto got = sr_comm_all(eng, prof, senders, payloads, down, delta_prime);
                for (size_t k = 0; k < down.size(); k++)
                    for (const auto& d : got[k])
                        for (int id : bundler.unpack(d.payload)) held[down[k]].push_back(id);
                break;
            }
            case CombineMode::kAnyOne: {
                for (int v : senders) payloads.push_back(*std::min_element(held[v].begin(), held[v].end()));
                auto got = sr_comm(eng, prof, senders, payloads, down);
                for (size_t k = 0; k < down.size(); k++)
                    if (got[k].received()) held[down[k]].push_back(got[k].payload);
                break;
            }
            case CombineMode::kMulti: {
                std::map<int, MultiMessage> by_payload;
                for (int v : senders)
                    for (int id : held[v]) {
                        auto& msg = by_payload[id];
                        msg.payload = id;
                        msg.seed = hash_combine(seed_of.count(id) ? seed_of[id] : (uint64_t)id, (uint64_t)i);
                        msg.holders.push_back(v);
                    }
                std::vector<MultiMessage> messages;
                for (auto& [id, msg] : by_payload) messages.push_back(std::move(msg));
                auto got = sr_comm_multi(eng, prof, messages, down, opt.m_bound);
                for (size_t k = 0; k < down.size(); k++)
                    for (int id : got[k]) held[down[k]].push_back(id);
                break;
            }
        }
        for (int v : down) {
            std::sort(held[v].begin(), held[v].end());
            held[v].erase(std::unique(held[v].begin(), held[v].end()), held[v].end());
        }
    }
    return held[labeling.root];
}

std::vector<char> diverge_cast(RadioEngine& eng, const ConstantsProfile& prof,
                               const GoodLabeling& labeling, std::span<const int> domain, int payload) {
    const Graph& g = eng.graph();
    int n = g.n();
    LayerIndex layers = layer_index(labeling, domain, n);
    std::vector<char> has(n, 0);
    has[labeling.root] = 1;

    static const std::vector<int> kNoMembers;
    for (int i = 0; i + 1 < n; i++) {
        const auto& up = i <= layers.max_label ? layers.members[i] : kNoMembers;
        const auto& down = i + 1 <= layers.max_label ? layers.members[i + 1] : kNoMembers;
        if (up.empty() && down.empty()) continue;
        std::vector<int> senders, payloads;
        for (int v : up)
            if (has[v]) {
                senders.push_back(v);
                payloads.push_back(payload);
            }
        auto got = sr_comm(eng, prof, senders, payloads, down);
        for (size_t k = 0; k < down.size(); k++)
            if (got[k].received()) has[down[k]] = 1;
    }
    std::vector<char> out(domain.size());
    for (size_t i = 0; i < domain.size(); i++) out[i] = has[domain[i]];
    return out;
}

std::vector<std::vector<int>> broadcast_everyone(RadioEngine& eng, const ConstantsProfile& prof,
                                                 const GoodLabeling& labeling, std::span<const int> domain,
                                                 std::span<const int> payloads, int delta_prime) {
    Bundler bundler(eng);
    std::vector<SourceMessage> sources(domain.size());
    for (size_t i = 0; i < domain.size(); i++) sources[i] = {domain[i], payloads[i], 0};
    CastOptions opt;
    opt.mode = CombineMode::kAllMessages;
    opt.delta_prime = delta_prime;
    auto at_root = converge_cast(eng, prof, labeling, domain, sources, opt);

    int bundle = bundler.intern(at_root);
    auto received = diverge_cast(eng, prof, labeling, domain, bundle);

    std::vector<std::vector<int>> out(domain.size());
    for (size_t i = 0; i < domain.size(); i++) {
        if (domain[i] == labeling.root || received[i]) out[i] = at_root;
        // a vertex that missed the cast still knows its own message
        if (out[i].empty()) out[i] = {payloads[i]};
    }
    return out;
}

std::vector<std::vector<int>> broadcast_sources(RadioEngine& eng, const ConstantsProfile& prof,
                                                const GoodLabeling& labeling, std::span<const int> domain,
                                                const std::vector<SourceMessage>& sources, int x_bound,
                                                BroadcastStrategy strategy) {
    const Graph& g = eng.graph();
    int n = g.n();

    if (strategy == BroadcastStrategy::kMultiOnce) {
        Bundler bundler(eng);
        CastOptions opt;
        opt.mode = CombineMode::kMulti;
        opt.m_bound = x_bound;
        auto at_root = converge_cast(eng, prof, labeling, domain, sources, opt);
        std::vector<std::vector<int>> out(domain.size());
        if (!at_root.empty()) {
            int bundle = bundler.intern(at_root);
            auto received = diverge_cast(eng, prof, labeling, domain, bundle);
            for (size_t i = 0; i < domain.size(); i++)
                if (domain[i] == labeling.root || received[i]) out[i] = at_root;
        }
        // sources always know their own messages
        for (size_t i = 0; i < domain.size(); i++)
            for (const auto& s : sources)
                if (s.source == domain[i] &&
                    std::find(out[i].begin(), out[i].end(), s.payload) == out[i].end())
                    out[i].push_back(s.payload);
        return out;
    }

    // kRepeatAnyOne: each repetition floats at least one still-pending message
    // to the root and broadcasts it; its source then withdraws.
    LayerIndex layers = layer_index(labeling, domain, n);
    std::vector<std::vector<int>> pending(n);
    for (const auto& s : sources) pending[s.source].push_back(s.payload);
    std::vector<std::vector<int>> known(domain.size());
    std::unordered_map<int, char> delivered;

    static const std::vector<int> kNoMembers;
    for (int rep = 0; rep < x_bound; rep++) {
        // converge: relays forward one candidate received this repetition
        std::vector<std::vector<int>> carry(n);
        for (int v : domain)
            for (int id : pending[v])
                if (!delivered.count(id)) carry[v].push_back(id);
        for (int i = n - 1; i >= 1; i--) {
            const auto& up = i <= layers.max_label ? layers.members[i] : kNoMembers;
            const auto& down = i - 1 <= layers.max_label ? layers.members[i - 1] : kNoMembers;
            if (up.empty() && down.empty()) continue;
            std::vector<int> senders, payloads;
            for (int v : up)
                if (!carry[v].empty()) {
                    senders.push_back(v);
                    payloads.push_back(*std::min_element(carry[v].begin(), carry[v].end()));
                }
            auto got = sr_comm(eng, prof, senders, payloads, down);
            for (size_t k = 0; k < down.size(); k++)
                if (got[k].received()) carry[down[k]].push_back(got[k].payload);
        }

        int chosen = -1;
        if (!carry[labeling.root].empty())
            chosen = *std::min_element(carry[labeling.root].begin(), carry[labeling.root].end());

        // diverge the chosen message (or nothing; listeners still pay)
        std::vector<char> has(n, 0);
        has[labeling.root] = chosen >= 0;
        for (int i = 0; i + 1 < n; i++) {
            const auto& up = i <= layers.max_label ? layers.members[i] : kNoMembers;
            const auto& down = i + 1 <= layers.max_label ? layers.members[i + 1] : kNoMembers;
            if (up.empty() && down.empty()) continue;
            std::vector<int> senders, payloads;
            for (int v : up)
                if (has[v]) {
                    senders.push_back(v);
                    payloads.push_back(chosen);
                }
            auto got = sr_comm(eng, prof, senders, payloads, down);
            for (size_t k = 0; k < down.size(); k++)
                if (got[k].received()) has[down[k]] = 1;
        }
        if (chosen >= 0) {
            delivered[chosen] = 1;
            for (size_t i = 0; i < domain.size(); i++)
                if (has[domain[i]] || domain[i] == labeling.root) known[i].push_back(chosen);
        }
    }
    for (size_t i = 0; i < domain.size(); i++)
        for (const auto& s : sources)
            if (s.source == domain[i] &&
                std::find(known[i].begin(), known[i].end(), s.payload) == known[i].end())
                known[i].push_back(s.payload);
    for (auto& k : known) std::sort(k.begin(), k.end());
    return known;
}

}  // namespace energysim
