#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bridgelab::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). A pure function of
/// (counter, key): there is no state to advance.
constexpr Counter philox4x32_10(Counter ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// Uniform in (0, 1] from the top 53 bits of a 64-bit word.
constexpr double to_unit_open_closed(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal stream addressed by (seed, path, step). Consecutive steps
/// 2j and 2j + 1 share one Philox block and are the cosine and sine halves of
/// one Box-Muller pair, so any draw is reproducible regardless of the order
/// or thread in which it is requested.
class NormalStream {
public:
    constexpr NormalStream(std::uint64_t seed, std::uint64_t path)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_(path) {}

    double operator()(std::uint64_t step) const {
        const std::uint64_t block = step >> 1;
        const Counter out = philox4x32_10(
            {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
             static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
            key_);
        const double u1 = to_unit_open_closed((std::uint64_t{out[0]} << 32) | out[1]);
        const double u2 = to_unit_open_closed((std::uint64_t{out[2]} << 32) | out[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return (step & 1u) ? radius * std::sin(angle) : radius * std::cos(angle);
    }

private:
    Key key_;
    std::uint64_t path_;
};

/// Uniform (0, 1] draws addressed by (seed, stream, index).
class UniformStream {
public:
    constexpr UniformStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    constexpr double operator()(std::uint64_t index) const {
        const Counter out = philox4x32_10(
            {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32) ^ 0x80000000u},
            key_);
        return to_unit_open_closed((std::uint64_t{out[0]} << 32) | out[1]);
    }

private:
    Key key_;
    std::uint64_t stream_;
};

}  // namespace bridgelab::rng
