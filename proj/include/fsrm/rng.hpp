#pragma once

#include <cstdint>

namespace fsrm {

// Deterministic splitmix64 stream with a Box-Muller Gaussian layer.
// The same seed always yields the same sequence, independent of platform
// or standard library, which the reproducibility guarantees rely on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal deviates, Box-Muller pairs with one cached value.
  double gaussian();

  // Independent stream for Monte Carlo replica `stream` of a master seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace fsrm
