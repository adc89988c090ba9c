#include "iswpt/rng.hpp"

#include <cmath>

namespace iswpt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed) ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_phase() { return -kPi + 2.0 * kPi * uniform(); }

Complex Rng::complex_normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * kPi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace iswpt
