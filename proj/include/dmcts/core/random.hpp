#pragma once

#include <cstdint>
#include <random>

namespace dmcts {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27u)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31u);
}

/// Deterministic 64-bit random stream. Every stochastic component (environment
/// transitions, coin flips, replicate draws, rollout policies) draws from an
/// injected Rng, so a seeded run replays bit-for-bit. The uniform mappings are
/// implemented here rather than with <random> distributions to keep the draw
/// sequence independent of the standard-library version.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53; }

    /// Uniform integer in {0, ..., n-1}, n >= 1.
    int uniform_int(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<unsigned __int128>(n)) >> 64u);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

/// Derives the per-run stream from (base seed, run index). Distinct indices
/// give distinct streams; the same pair always gives the same stream.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_index) {
    std::uint64_t z = splitmix64(base_seed);
    z ^= splitmix64(run_index + 0x632be59bd9b4e019ull);
    return splitmix64(z);
}

inline Rng seed_schedule(std::uint64_t base_seed, std::uint64_t run_index) {
    return Rng(derive_seed(base_seed, run_index));
}

}  // namespace dmcts
