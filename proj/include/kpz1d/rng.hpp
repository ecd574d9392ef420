#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace kpz1d {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
 * numbers: as easy as 1, 2, 3", SC'11).
 *
 * The generator is a pure function of (counter, key), so a value attached to
 * a tree coordinate can be regenerated at any time, in any traversal order,
 * on any thread, and always comes out bit-identical.
 */
struct Philox4x32 {
    using ctr_t = std::array<std::uint32_t, 4>;
    using key_t = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static ctr_t run(ctr_t ctr, key_t key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(ctr[0]) * kMul0;
            const std::uint64_t p1 = std::uint64_t(ctr[2]) * kMul1;
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0],
                   std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1],
                   std::uint32_t(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// Reserved values for the `lane` counter word. Each independent use of the
/// keyed stream gets its own lane so coordinates can never collide.
enum class RngLane : std::uint32_t {
    cell_weight = 0,  // dyadic cell weights, addressed by (level, index)
    seed_expand = 1,  // replicate seeds derived from a master seed
    stream = 2,       // sequential draws from RandomStream
};

/// 128 output bits for one coordinate, as two 64-bit words.
inline std::array<std::uint64_t, 2> rng_words(std::uint64_t seed, RngLane lane,
                                              std::uint32_t level, std::uint64_t index) {
    const Philox4x32::key_t key = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
    const Philox4x32::ctr_t ctr = {static_cast<std::uint32_t>(lane), level,
                                   std::uint32_t(index), std::uint32_t(index >> 32)};
    const auto out = Philox4x32::run(ctr, key);
    return {(std::uint64_t(out[1]) << 32) | out[0], (std::uint64_t(out[3]) << 32) | out[2]};
}

/// Map 64 random bits to a double in (0, 1]. The open lower end keeps
/// log(u) finite for Box-Muller.
inline double bits_to_open_unit(std::uint64_t bits) {
    return double((bits >> 11) + 1) * 0x1.0p-53;
}

/// Map 64 random bits to a double in [0, 1).
inline double bits_to_unit(std::uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53;
}

/// One uniform draw in (0, 1] for a coordinate.
inline double rng_uniform(std::uint64_t seed, RngLane lane, std::uint32_t level,
                          std::uint64_t index) {
    return bits_to_open_unit(rng_words(seed, lane, level, index)[0]);
}

/// One standard Gaussian draw for a coordinate (Box-Muller, cosine branch).
inline double rng_gaussian(std::uint64_t seed, RngLane lane, std::uint32_t level,
                           std::uint64_t index) {
    const auto w = rng_words(seed, lane, level, index);
    const double u0 = bits_to_open_unit(w[0]);
    const double u1 = bits_to_unit(w[1]);
    return std::sqrt(-2.0 * std::log(u0)) * std::cos(2.0 * std::numbers::pi * u1);
}

/// A sequential stream view of the keyed generator: draw k is a pure function
/// of (seed, k), the stream just tracks k.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t start = 0)
        : seed_(seed), counter_(start) {}

    double next_uniform() { return rng_uniform(seed_, RngLane::stream, 0, counter_++); }
    double next_gaussian() { return rng_gaussian(seed_, RngLane::stream, 0, counter_++); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace kpz1d
