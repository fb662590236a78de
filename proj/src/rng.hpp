#pragma once

#include <cmath>
#include <cstdint>

namespace energysim {

// splitmix64 finalizer; used both as a sequential generator and as a
// counter-based hash so that coin flips can be queried lazily at any
// (stream, index) without materializing the whole stream.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Sequential generator with O(1) state. Streams derived from (seed, id)
// are independent for distinct ids.
class Rng {
public:
    Rng() : state_(0) {}
    explicit Rng(uint64_t seed) : state_(mix64(seed)) {}
    Rng(uint64_t seed, uint64_t stream) : state_(hash_combine(mix64(seed), stream)) {}

    uint64_t next() { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }

    // uniform in [0, 1)
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    bool next_bool(double p) { return next_double() < p; }

    // uniform integer in [0, bound)
    uint64_t next_below(uint64_t bound) {
        // 64-bit multiply-shift; bias is negligible for our bounds
        return (uint64_t)(((__uint128_t)next() * bound) >> 64);
    }

    // Number of failures before the next success of a Bernoulli(p) sequence.
    // Returns a huge value when p <= 0.
    uint64_t next_geometric_gap(double p) {
        if (p >= 1.0) return 0;
        if (p <= 0.0) return UINT64_MAX / 2;
        double u = 1.0 - next_double();  // in (0, 1]
        double g = std::floor(std::log(u) / std::log1p(-p));
        if (g < 0) g = 0;
        if (g > 9e18) return UINT64_MAX / 2;
        return (uint64_t)g;
    }

    Rng split(uint64_t tag) { return Rng(next(), tag); }

private:
    uint64_t state_;
};

// Stateless coin: deterministic function of (stream, index).
inline bool hash_coin(uint64_t stream, uint64_t index, double p) {
    return (hash_combine(stream, index) >> 11) * 0x1.0p-53 < p;
}

// 64 fair coins for indices [block*64, block*64+64).
inline uint64_t hash_coin_block64(uint64_t stream, uint64_t block) {
    return hash_combine(stream, block ^ 0xd6e8feb86659fd93ULL);
}

inline bool fair_coin_at(uint64_t stream, uint64_t index) {
    return (hash_coin_block64(stream, index >> 6) >> (index & 63)) & 1;
}

}  // namespace energysim
