#include "nsfp/rng.hpp"

#include <cmath>
#include <numbers>

namespace nsfp {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = uint64_t(a) * uint64_t(b);
    hi = uint32_t(p >> 32);
    lo = uint32_t(p);
}

inline std::array<uint32_t, 4> round_once(std::array<uint32_t, 4> c,
                                          const std::array<uint32_t, 2>& k) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key) {
    std::array<uint32_t, 4> c = counter;
    std::array<uint32_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        c = round_once(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

namespace {

inline std::array<uint64_t, 2> stream_block(uint64_t seed, uint64_t member,
                                            uint64_t step, uint32_t block) {
    // Counter layout: (block, step lo, step hi ^ member hi, member lo).
    // Member and step both fit comfortably in 32 bits for every supported
    // run size; the high words keep the mapping injective regardless.
    std::array<uint32_t, 4> ctr = {block, uint32_t(step),
                                   uint32_t(step >> 32) ^ uint32_t(member >> 32),
                                   uint32_t(member)};
    std::array<uint32_t, 2> key = {uint32_t(seed), uint32_t(seed >> 32)};
    auto out = philox4x32(ctr, key);
    return {uint64_t(out[0]) | (uint64_t(out[1]) << 32),
            uint64_t(out[2]) | (uint64_t(out[3]) << 32)};
}

// 53-bit mantissa draw in (0, 1]; never returns 0 so log() is safe.
inline double u64_to_unit(uint64_t x) {
    return double((x >> 11) + 1) * 0x1.0p-53;
}

} // namespace

std::array<double, 2> uniform_pair(uint64_t seed, uint64_t member,
                                   uint64_t step, uint32_t block) {
    auto w = stream_block(seed, member, step, block);
    return {u64_to_unit(w[0]), u64_to_unit(w[1])};
}

std::array<double, 2> normal_pair(uint64_t seed, uint64_t member,
                                  uint64_t step, uint32_t block) {
    auto u = uniform_pair(seed, member, step, block);
    double r = std::sqrt(-2.0 * std::log(u[0]));
    double a = 2.0 * std::numbers::pi * u[1];
    return {r * std::cos(a), r * std::sin(a)};
}

} // namespace nsfp
