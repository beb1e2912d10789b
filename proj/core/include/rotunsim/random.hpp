#pragma once

// Counter-based random numbers: every sample is a pure function of
// (seed, stream, counter), so runs replay exactly and parallel runs share
// no generator state.

#include <cstdint>

namespace rotunsim::rng {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Hash of (seed, stream, counter) to 64 uniformly distributed bits.
std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform double in the open interval (0, 1).
double uniform_open(std::uint64_t bits);

/// Standard normal sample for (seed, stream, counter) via Box-Muller.
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

}  // namespace rotunsim::rng
