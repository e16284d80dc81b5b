// rng.hpp — per-trajectory noise streams keyed by (seed, trajectory index),
// so ensembles reproduce independently of scheduling order.

#pragma once

#include <cstdint>
#include <random>

namespace qnd {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t traj_index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(~traj_index));
}

class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t traj_index)
        : eng_(stream_key(seed, traj_index)) {}

    double gaussian() { return normal_(eng_); }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qnd
