#pragma once

#include <cstdint>
#include <random>

#include "iswpt/types.hpp"

namespace iswpt {

/// Seedable random stream used for every stochastic step in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, seeded through SplitMix64. Uniforms and Gaussians are derived from
/// the raw 64-bit words here rather than through <random> distributions, whose
/// algorithms are implementation-defined. Independent streams for Monte-Carlo
/// trials come from stream(seed, index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream keyed by (seed, index).
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform phase on [-pi, pi).
  double uniform_phase();

  /// Circularly-symmetric complex Gaussian CN(0, 1): Box-Muller on a pair of
  /// uniforms, variance 1/2 per real component.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace iswpt
