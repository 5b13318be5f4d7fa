#pragma once

#include <cstdint>
#include <random>

namespace bopim {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent seeds from (master, index).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the `index`-th substream of `master`. `stream` separates unrelated
/// consumers (replicates, Gibbs chains, seed sampling) sharing one master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream,
                             std::uint64_t index) noexcept;

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return Rng(substream_seed(master, stream, index));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1).
inline double uniform_open01(Rng& rng) {
  double u;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return u;
}

// Stream tags.
namespace stream {
inline constexpr std::uint64_t kReplicate = 0x5245504cULL;
inline constexpr std::uint64_t kEvaluation = 0x4556414cULL;
inline constexpr std::uint64_t kGibbs = 0x47494242ULL;
inline constexpr std::uint64_t kSeedSampling = 0x53454544ULL;
inline constexpr std::uint64_t kPredict = 0x50524544ULL;
inline constexpr std::uint64_t kValidation = 0x56414c49ULL;
}  // namespace stream

}  // namespace bopim
