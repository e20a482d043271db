#pragma once

#include <cmath>
#include <cstdint>

namespace hwd {

/// Deterministic 64-bit generator (splitmix64). Every stochastic component
/// of the library draws from an explicitly seeded instance, so identical
/// seeds reproduce identical runs bit for bit. The update is
///   state += 0x9E3779B97F4A7C15
/// followed by the two xor-shift-multiply finalization rounds below.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n), n > 0. Computed as next() % n; the modulo
    /// bias is below 2^-32 for every range used in this library.
    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Derives an independently seeded child stream.
    SplitMix64 split() { return SplitMix64(next()); }

private:
    std::uint64_t state_;
};

/// Standard normal deviate via Box-Muller; consumes exactly two draws.
inline double normal_deviate(SplitMix64& rng) {
    const double u1 = 1.0 - rng.unit();  // (0, 1]
    const double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace hwd
