#pragma once

#include <cstdint>
#include <random>

namespace ecfvol {

using Rng = std::mt19937_64;

/// Named sub-streams of one replication. Each (seed, stream) pair seeds an
/// independent engine, so adding or reordering draws in one stream never
/// perturbs another.
enum class Stream : std::uint64_t {
  Variance = 1,
  Price = 2,
  Jumps = 3,
  Stable = 4,
  Generic = 99,
};

/// Engine for the given seed and sub-stream. Uses std::seed_seq over the
/// 64-bit words so nearby seeds give unrelated states.
inline Rng make_rng(std::uint64_t seed, Stream stream = Stream::Generic) {
  const auto s = static_cast<std::uint64_t>(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

}  // namespace ecfvol
