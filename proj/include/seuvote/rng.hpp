#pragma once

#include <cstdint>
#include <random>

namespace seuvote {

/// Seeded 64-bit generator. All randomness in the library flows through this.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
    bool coin() { return uniform(0, 1) == 1; }
    std::mt19937_64& engine() { return engine_; }

    /// Independent child stream, for per-task determinism.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace seuvote
