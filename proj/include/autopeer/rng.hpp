#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace autopeer {

// Seedable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard, so every draw below is portable
// across toolchains. Distributions are implemented here rather than taken
// from <random> because the standard distributions are not bit-portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Fills `out` with bytes taken little-endian from successive 64-bit draws.
  void fill(std::span<std::uint8_t> out);

  /// Derives an independent seed for sub-stream `index` of `seed`.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

}  // namespace autopeer
