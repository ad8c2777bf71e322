#pragma once

#include <array>
#include <cstdint>

namespace nsfp {

/// Counter-based random number generation.
///
/// Every random quantity in a simulation is a pure function of
/// (seed, member, step, block).  Trajectories are therefore reproducible
/// bit-for-bit regardless of evaluation order, members can be computed
/// independently, and extending an ensemble leaves existing members
/// unchanged.

/// One 128-bit block of the 4x32 counter cipher (Philox, 10 rounds).
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key);

/// Two independent standard normal draws for the given stream position.
/// Uses one cipher block and a Box-Muller transform; the mapping consumes a
/// fixed number of bits, so streams never desynchronise.
std::array<double, 2> normal_pair(uint64_t seed, uint64_t member,
                                  uint64_t step, uint32_t block);

/// Uniform draw on (0, 1] from the given stream position (two per block).
std::array<double, 2> uniform_pair(uint64_t seed, uint64_t member,
                                   uint64_t step, uint32_t block);

} // namespace nsfp
