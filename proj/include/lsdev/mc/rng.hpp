#pragma once

/**
 * Counter-based random numbers.
 *
 * Philox4x32-10 (Salmon et al., SC'11) with the published multipliers and
 * Weyl increments. A stream is identified by a 64-bit key; draw k of the
 * stream is the block function applied to counter k. Streams are therefore
 * stateless apart from the counter and can be created per replica or per
 * particle at no cost.
 *
 * Seed derivation (stable across versions):
 *   derive_seed(master, index) = mix64(mix64(master) + index * 0x9E3779B97F4A7C15)
 * where mix64 is the SplitMix64 finalizer. mix64 is a bijection on 64-bit
 * words and the multiplier is odd, so the map is injective in `index` for a
 * fixed master over the full 2^64 range.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace lsdev::mc {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) + index * 0x9E3779B97F4A7C15ULL);
}

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53U;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// Uniform random bit generator over a Philox stream. Satisfies
/// std::uniform_random_bit_generator, so it can drive <random> distributions.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t key, std::uint64_t start = 0) noexcept : key_(key), counter_(start) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const PhiloxBlock out = philox4x32_10(
            {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0U, 0U},
            {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)});
        ++counter_;
        spare_ = (std::uint64_t{out[3]} << 32) | out[2];
        have_spare_ = true;
        return (std::uint64_t{out[1]} << 32) | out[0];
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the Box-Muller cosine branch. One normal per call
    /// keeps the draw count per call fixed, which the per-particle streams
    /// rely on.
    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Exponential with rate 1.
    double exponential() noexcept { return -std::log(uniform()); }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace lsdev::mc
