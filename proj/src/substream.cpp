#include "bellkit/substream.hpp"

namespace bellkit {

std::mt19937_64 make_substream(std::uint64_t seed, StreamTag tag, std::uint64_t block,
                               std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag),  static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double keyed_uniform(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2) noexcept {
  const std::uint64_t h = mix64(mix64(mix64(k0) ^ k1) ^ k2);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace bellkit
