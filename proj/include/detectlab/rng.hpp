#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace detectlab {

// SplitMix64 step: advances the state by the golden-ratio increment and
// returns an avalanche-mixed output word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives the seed of an independent substream from (seed, stream index).
// Batch operations give worker/sample i the stream derive_stream(seed, i),
// so results do not depend on chunking or evaluation order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = stream ^ 0x5851f42d4c957f2dull;
    std::uint64_t b = splitmix64(s);
    s = a ^ b;
    return splitmix64(s);
}

// Deterministic pseudorandom stream (SplitMix64). All sampling in this
// project draws from Rng so that a (seed, stream) pair pins every result.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1, via the multiply-high method.
    std::uint64_t next_below(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller (fresh pair each call, spare discarded).
    double next_normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Samples an index from a probability row by inverse CDF.
    std::size_t next_index(std::span<const double> probs) {
        const double u = next_double();
        double cum = 0.0;
        for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
            cum += probs[j];
            if (u < cum) return j;
        }
        return probs.size() - 1;
    }

private:
    std::uint64_t state_;
};

}  // namespace detectlab
