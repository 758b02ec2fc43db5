#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dadmm {

// All randomness in the library flows through this wrapper so that a seed
// reproduces bit-identical draws on any conforming platform. The standard
// distribution adaptors are implementation-defined, so the mappings from raw
// engine output to doubles are spelled out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; draws a pair and caches the second value.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Recorded in run metadata so results can be reproduced later.
inline constexpr const char* kRngDescription = "mt19937_64/canonical53/box-muller";

}  // namespace dadmm
