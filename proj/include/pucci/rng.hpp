#pragma once

#include <cstdint>

namespace pucci {

/// Counter-based deterministic generator: SplitMix64 applied to
/// seed XOR (stream golden-ratio sequence). Output word i is a pure
/// function of (seed, i), so any consumer — including a port in another
/// language — reproduces the exact 64-bit stream from the two integers.
///
///   z = seed + (i+1) * 0x9E3779B97F4A7C15
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   out = z ^ (z >> 31)
///
/// unit() maps the word to [0,1) as out * 2^-64 (double rounding of the
/// 64-bit integer; bit-stable across platforms with IEEE doubles).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t start_counter = 0)
        : seed_(seed), counter_(start_counter) {}

    static std::uint64_t word(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_word() { return word(seed_, counter_++); }

    /// Uniform in [0,1).
    double unit() { return static_cast<double>(next_word()) * 0x1.0p-64; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_word() % n; }

    /// Independent substream: same seed, counter block offset by label.
    CounterRng stream(std::uint64_t label) const {
        return CounterRng(seed_ ^ (0x9E3779B97F4A7C15ULL * (label + 1)), 0);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace pucci
