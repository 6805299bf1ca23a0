#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace crn {

/// Identity of the random stream recorded in every output's metadata.
/// Bump the version whenever the seeding or the draw-to-double mapping changes.
inline constexpr std::string_view kGeneratorId = "mt19937_64+splitmix64-split/v1";

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of replicate `index` under `base_seed`. Depends only on the pair, so
/// adding replicates never changes earlier ones.
constexpr std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return mix64(base_seed ^ mix64(index));
}

/// std::mt19937_64 (bit-exact across standard libraries) with portable
/// 53-bit uniform draws; std::uniform_real_distribution is not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() noexcept { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crn
