#pragma once

#include <cstdint>
#include <random>

namespace rydsim {

/// The one generator type used by every stochastic operation.
using Rng = std::mt19937_64;

/// Independent stream `stream_index` derived from a master seed. Identical
/// (seed, index) pairs give identical streams regardless of thread layout.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x52594453u};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace rydsim
