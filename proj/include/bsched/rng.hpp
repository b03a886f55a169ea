#pragma once

#include <cstdint>
#include <random>

namespace bsched {

/// Identifies one reproducible random stream. Replication r of a run with
/// seed s always draws from stream (s, r), independent of thread count.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Engine for a stream; the 64-bit state is a splitmix64 hash of (seed, stream).
std::mt19937_64 make_engine(const RngSpec& rng);

}  // namespace bsched
