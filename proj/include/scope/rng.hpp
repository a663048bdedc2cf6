#pragma once

#include <cstdint>
#include <initializer_list>

namespace scope {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27u)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31u);
}

/// Mix an arbitrary key list into one 64-bit seed. Used to derive independent
/// deterministic streams keyed by (seed, step, region id, ...) without any
/// shared mutable state.
inline std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t state = 0x9d2c5680u;
    for (std::uint64_t k : keys) {
        state ^= k + 0x9e3779b97f4a7c15ull + (state << 6u) + (state >> 2u);
        splitmix64_next(state);
    }
    return state;
}

/// Small deterministic RNG. All draws use only integer arithmetic plus exact
/// binary floating-point scaling, so sequences are bit-identical across
/// platforms and compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    Rng(std::initializer_list<std::uint64_t> keys) : state_(mix_keys(keys)) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] inclusive. hi >= lo required.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1u;
        if (span == 0u) return next_u64();  // full range
        // Rejection sampling keeps the draw unbiased and deterministic.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return lo + v % span;
    }

    int pick_index(int count) { return static_cast<int>(uniform_int(0, static_cast<std::uint64_t>(count) - 1u)); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Zero-mean unit-variance draw via the Irwin-Hall sum of 12 uniforms.
    /// Approximately normal, bounded to [-6, 6], and exactly reproducible
    /// everywhere (no transcendental functions involved).
    double gauss_approx() {
        double sum = 0.0;
        for (int i = 0; i < 12; ++i) sum += uniform01();
        return sum - 6.0;
    }

  private:
    std::uint64_t state_;
};

}  // namespace scope
