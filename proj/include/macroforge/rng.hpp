#pragma once

#include <cstdint>
#include <random>

namespace macroforge {

/// Deterministic random stream. mt19937_64 supplies the bits; the draw
/// helpers are hand-rolled because the std distribution objects are
/// implementation-defined and runs must reproduce bit-exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    int next_below(int n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<int>(x % bound);
    }

    /// splitmix64 finalizer; also used to spread user seeds before seeding.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Child seed for an indexed substream of `seed`. Used wherever a run
    /// fans out into episodes, evaluations, or arms.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix(seed ^ mix(stream + 1));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace macroforge
