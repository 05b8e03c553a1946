#pragma once

#include <cstdint>
#include <vector>

#include "marcopolo/errors.hpp"

namespace marcopolo {

// xoshiro256++ seeded through splitmix64. Self-contained so that streams are
// bit-identical across platforms and standard-library versions; experiment
// reproducibility depends on it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_)
            word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits (always a dyadic rational).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Index sampled proportionally to the given nonnegative weights.
    int sample_discrete(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights)
            total += w;
        if (!(total > 0.0))
            throw InputError("sample_discrete: weights must have positive total");
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0)
                return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

// Order-independent hash of a (seed, t, s, a) probe to a uniform [0,1) double.
// Backs the seeded_random adversary: the same cell always yields the same value
// no matter when or how often it is queried.
inline double hashed_uniform01(std::uint64_t seed, std::uint64_t t, std::uint64_t s, std::uint64_t a) {
    std::uint64_t x = seed;
    x ^= 0x9e3779b97f4a7c15ULL + t;
    x = Rng::splitmix64(x);
    x ^= s * 0xbf58476d1ce4e5b9ULL + a;
    std::uint64_t z = Rng::splitmix64(x);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

} // namespace marcopolo
