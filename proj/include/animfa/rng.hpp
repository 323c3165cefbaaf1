#pragma once

#include <array>
#include <cstdint>

namespace animfa {

/// SplitMix64 finalizer. Used to seed xoshiro and to derive independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`. Streams 0 and 1 are reserved for
/// topology and parameter draws; sweep points use 2 + point index.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ULL * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

namespace stream {
inline constexpr std::uint64_t topology = 0;
inline constexpr std::uint64_t parameters = 1;
inline constexpr std::uint64_t sweep_base = 2;
} // namespace stream

/// xoshiro256** 1.0. Bit-identical output on every platform, unlike the
/// std:: distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept
    {
        std::uint64_t sm = seed;
        for (auto& w : s_)
            w = splitmix64(sm);
    }

    std::uint64_t next() noexcept
    {
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

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    /// Uniform index in [0, bound). bound must be positive.
    std::uint64_t index(std::uint64_t bound) noexcept
    {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace animfa
