#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, coordinate, sample index, stream), so hashing and simulation
// results do not depend on iteration order or thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace linkern {

/// Philox4x32-10 (Salmon et al., Random123).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Stream tags keep the draws of different consumers independent.
enum class Stream : std::uint32_t {
    GcwsR = 0,
    GcwsC = 1,
    GcwsBeta = 2,
    RffProjection = 3,
    RffPhase = 4,
    RepSeed = 5,
    SimPair = 6,
    SimPhase = 7,
    Shuffle = 8,
};

/// Coordinate value reserved for per-sample (not per-coordinate) draws.
inline constexpr std::uint64_t kSampleSentinel = ~std::uint64_t{0};

/// Two raw 64-bit words for (seed, coordinate, sample, stream).
inline std::array<std::uint64_t, 2> random_words(std::uint64_t seed, std::uint64_t coordinate,
                                                 std::uint32_t sample, Stream stream) noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(coordinate),
                                  static_cast<std::uint32_t>(coordinate >> 32), sample,
                                  static_cast<std::uint32_t>(stream)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = Philox4x32::generate(ctr, key);
    return {(std::uint64_t{out[1]} << 32) | out[0], (std::uint64_t{out[3]} << 32) | out[2]};
}

/// Maps 64 random bits to the open interval (0, 1) on a 2^-52 grid offset
/// by half a step, so both ends are excluded exactly.
constexpr double to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t coordinate,
                                          std::uint32_t sample, Stream stream) noexcept {
    const auto w = random_words(seed, coordinate, sample, stream);
    return {to_open_unit(w[0]), to_open_unit(w[1])};
}

/// Gamma(2, 1) as the sum of two unit exponentials.
inline double gamma2_from_uniforms(double u1, double u2) noexcept {
    return -std::log(u1) - std::log(u2);
}

/// Seed for an independent sub-experiment (a Monte Carlo repetition, a
/// shuffle) derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 Stream stream = Stream::RepSeed) noexcept {
    return random_words(master, index, 0, stream)[0];
}

/// Standard normal quantile (Boost.Math); -inf and +inf at 0 and 1.
double normal_quantile(double p);

}  // namespace linkern
