#pragma once

#include <cstdint>
#include <random>

namespace knnd {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream, index). Used so that draws never
/// depend on which worker runs a task or in which order.
inline Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kClustering = 2;
inline constexpr std::uint64_t kData = 3;
inline constexpr std::uint64_t kRecallSample = 4;
inline constexpr std::uint64_t kWitness = 5;
}  // namespace streams

}  // namespace knnd
