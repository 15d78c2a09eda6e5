#pragma once

// Seedable 64-bit PRNG used by the simulator: xoshiro256** seeded through
// splitmix64 (Blackman & Vigna). Both are fully specified integer recurrences,
// so a given seed yields the same stream on every platform.

#include <array>
#include <cmath>
#include <cstdint>

namespace waitmin {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of replication `index` under `master`: splitmix64 evaluated at
/// master + (index+1) * golden-gamma.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t s = master + index * 0x9E3779B97F4A7C15ULL;
    return splitmix64(s);
}

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on (0, 1]: top 53 bits, shifted up by one ulp so 0 never occurs.
    double uniform_open0() noexcept {
        return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Exponential variate by inversion, -ln(U)/rate.
    double exponential(double rate) noexcept { return -std::log(uniform_open0()) / rate; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace waitmin
