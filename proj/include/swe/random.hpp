#pragma once

#include <cstdint>
#include <random>

namespace swe {

// Seeded mt19937_64 with an explicit 53-bit mantissa conversion, so that
// streams are identical across standard library implementations
// (std::uniform_real_distribution is implementation-defined).
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace swe
