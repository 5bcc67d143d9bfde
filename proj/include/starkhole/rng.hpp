#pragma once

// Counter-based random number generation. Every draw is a pure function
// of (seed, counter), so ensembles can be partitioned across workers in
// any order without changing the stream.

#include <cstdint>
#include <cmath>
#include <numbers>

namespace starkhole {

// splitmix64 finalizer evaluated at an arbitrary counter position.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derive an independent stream seed from a master seed and stream labels.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64_at(splitmix64_at(seed, a), b);
}

// One deterministic stream: CounterRng(seed, index) always yields the same
// draws for the same (seed, index), independent of any other stream.
class CounterRng {
public:
    // Draw budget reserved per index so distinct indices never overlap.
    static constexpr std::uint64_t kStride = 16;

    CounterRng(std::uint64_t seed, std::uint64_t index) : seed_(seed), counter_(index * kStride) {}

    std::uint64_t next_u64() { return splitmix64_at(seed_, counter_++); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1].
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    // Standard normal via Box-Muller (one value per pair of uniforms).
    double normal() {
        // guard log(0)
        double u1 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace starkhole
