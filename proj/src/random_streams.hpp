#pragma once

#include <cstdint>
#include <random>

namespace cbpa {

/// Named sub-streams so each consumer of a seed is reproducible on its own.
enum class Stream : std::uint32_t { Placement = 1, Injection = 2, Topology = 3, Sweep = 4 };

inline std::mt19937_64 substream(std::uint64_t seed, Stream stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

} // namespace cbpa
