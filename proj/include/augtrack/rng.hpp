#pragma once

// Reproducible random streams. Each (seed, rep, axis) triple gets its own
// std::mt19937_64 seeded through SplitMix64, and normal deviates come from
// the Marsaglia polar method so results do not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <random>

namespace augtrack {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for the stream (seed, rep, axis).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep, std::uint64_t axis) noexcept;

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t rep, std::uint64_t axis)
      : engine_(stream_seed(seed, rep, axis)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal deviate.
  double gaussian() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace augtrack
