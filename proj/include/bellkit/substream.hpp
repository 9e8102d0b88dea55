#pragma once

#include <cstdint>
#include <random>

namespace bellkit {

// Deterministic random substreams. A stream is identified by
// (seed, tag, block, chunk) where a chunk covers kChunkSize consecutive
// trials, so the draws for trial k never depend on how trials are scheduled.
inline constexpr std::uint64_t kChunkSize = 4096;

enum class StreamTag : std::uint32_t {
  pair_sampler = 1,
  source = 2,
  instrument_station1 = 3,
  instrument_station2 = 4,
};

std::mt19937_64 make_substream(std::uint64_t seed, StreamTag tag, std::uint64_t block,
                               std::uint64_t chunk);

/// Uniform in [0, 1) from the engine; 53 random bits.
double uniform01(std::mt19937_64& engine);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Uniform in [0, 1) addressed by a key rather than drawn from a stream.
double keyed_uniform(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2) noexcept;

}  // namespace bellkit
