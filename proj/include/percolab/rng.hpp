#pragma once

// Counter-based randomness: every variate is a pure function of
// (seed, trial index, edge code), so edges can be sampled in any order, by
// any thread, and the same edge sees the same uniform at every p.

#include <cstdint>

namespace percolab {

/// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix_pair(std::uint64_t a, std::uint64_t b) noexcept
{
    return mix64(mix64(a + 0x9e3779b97f4a7c15ULL) ^ (b * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}

/// Maps 64 random bits to a double in [0, 1) with 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// The random stream of one trial.
class TrialStream {
public:
    constexpr TrialStream(std::uint64_t seed, std::uint64_t trial) noexcept : key_(mix_pair(seed, trial)) {}

    constexpr std::uint64_t key() const noexcept { return key_; }

    /// Uniform variate attached to the edge with the given code.
    constexpr double uniform(std::uint64_t edge_code) const noexcept { return to_unit(mix_pair(key_, edge_code)); }

    /// Edge state at parameter p. Monotone in p for a fixed edge.
    constexpr bool open(std::uint64_t edge_code, double p) const noexcept { return uniform(edge_code) < p; }

private:
    std::uint64_t key_;
};

}  // namespace percolab
