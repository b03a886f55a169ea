#include "bsched/rng.hpp"

namespace bsched {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(const RngSpec& rng) {
  const std::uint64_t key = splitmix64(rng.seed ^ splitmix64(rng.stream_id + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(rng.stream_id), static_cast<std::uint32_t>(rng.seed)};
  return std::mt19937_64(seq);
}

}  // namespace bsched
