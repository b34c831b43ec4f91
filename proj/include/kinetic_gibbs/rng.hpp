#pragma once

#include <cstdint>
#include <random>

namespace kg {

// splitmix64 finalizer; used to whiten seeds before feeding mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-chain stream: seed_k = mix(master_seed, chain_id). Chains with
// different ids get statistically independent streams; identical
// (master_seed, chain_id) pairs reproduce the stream bit for bit.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t chain_id) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(chain_id + 0x517cc1b727220a95ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    Rng(std::uint64_t master_seed, std::uint64_t chain_id)
        : gen_(stream_seed(master_seed, chain_id)) {}

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }
    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace kg
