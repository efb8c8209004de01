#pragma once

#include <cstdint>
#include <limits>

namespace rsgame {

/// SplitMix64 step; used to expand a 64-bit key into generator state.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** (Blackman and Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t key) noexcept {
        for (auto& w : s_) w = splitmix64(key);
    }

    /// Independent stream for (seed, unit, lane), e.g. one per path and purpose.
    static Xoshiro256 stream(std::uint64_t seed, std::uint64_t unit, std::uint64_t lane) noexcept {
        std::uint64_t key = seed;
        std::uint64_t mixed = splitmix64(key) ^ (unit * 0xD1B54A32D192ED03ULL);
        mixed = splitmix64(mixed) ^ (lane * 0x8CB92BA72F3D8DD7ULL);
        return Xoshiro256(splitmix64(mixed));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

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

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
};

} // namespace rsgame
