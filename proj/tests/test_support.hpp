#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "iswpt/objective.hpp"
#include "iswpt/rng.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt::test {

inline SystemConfig make_config(int n_tx, int n_irs, int n_ehd, int n_targets, double rho = 0.5) {
  SystemConfig c;
  c.n_tx = n_tx;
  c.n_irs = n_irs;
  c.n_ehd = n_ehd;
  c.n_targets = n_targets;
  c.rho = rho;
  c.target_angles.clear();
  for (int m = 0; m < n_targets; ++m)
    c.target_angles.push_back(n_targets == 1 ? 0.0 : -kPi / 4.0 + (kPi / 2.0) * m / (n_targets - 1));
  return c;
}

inline ChannelSet random_channels(const SystemConfig& c, std::uint64_t seed) {
  Rng rng(seed);
  return sample_channels(c, rng);
}

inline Beamformer random_beam(int n_tx, double p0, Rng& rng) {
  RVector p(n_tx);
  for (int n = 0; n < n_tx; ++n) p(n) = rng.uniform_phase();
  return Beamformer::from_phases(p, p0);
}

inline CMatrix random_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
  return m;
}

inline CMatrix random_hermitian(int n, Rng& rng) {
  const CMatrix a = random_matrix(n, n, rng);
  return (a + a.adjoint()) * 0.5;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Removes the global phase of x by rotating its first entry onto the real axis.
inline CVector align_global_phase(const CVector& x) {
  return x * std::polar(1.0, -std::arg(x(0)));
}

}  // namespace iswpt::test
