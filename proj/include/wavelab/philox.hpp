#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and the
// Gaussian transform used for every noise deviate in the project.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace wavelab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept
{
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
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

constexpr PhiloxKey philox_key(std::uint64_t seed) noexcept
{
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform on (0, 1) from the top 52 of 64 random bits; never returns 0 or 1.
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) noexcept
{
    const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Standard normal deviate as a pure function of (counter, key), Box-Muller.
inline double philox_normal(const PhiloxCounter& ctr, const PhiloxKey& key) noexcept
{
    const PhiloxCounter r = philox4x32_10(ctr, key);
    const double u1 = uniform_open(r[0], r[1]);
    const double u2 = uniform_open(r[2], r[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Stream tags occupying the third counter word.
enum class NoiseStream : std::uint32_t {
    WaveCell = 0x57415645u,     // "WAVE"
    HeatSite = 0x48454154u,     // "HEAT"
    Brownian = 0x42524f57u,     // "BROW"
    Auxiliary = 0x41555849u,    // "AUXI"
};

/// Normal deviate addressed by (seed, stream, a, b); a and b are 32-bit lattice coordinates.
inline double stream_normal(std::uint64_t seed, NoiseStream stream, std::int32_t a, std::int32_t b) noexcept
{
    return philox_normal({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                          static_cast<std::uint32_t>(stream), 0u},
                         philox_key(seed));
}

} // namespace wavelab
