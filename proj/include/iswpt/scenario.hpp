#pragma once

#include <cstdint>
#include <vector>

#include "iswpt/rng.hpp"
#include "iswpt/types.hpp"

namespace iswpt {

/// How the line-of-sight part of each Rician channel is generated.
enum class LosMode {
  /// LoS drawn as i.i.d. CN(0, 1) entries for each realization (default).
  iid_gaussian,
  /// Deterministic far-field steering products (sensitivity studies).
  steering,
};

/// Scenario scalars. Angles are radians, powers are linear watts, gains are
/// linear. Defaults reproduce the reference simulation setup with L = 20.
struct SystemConfig {
  int n_tx = 12;
  int n_irs = 20;
  int n_ehd = 5;
  int n_targets = 3;

  double p0 = 1.0;
  double eta = 0.8;
  double rho = 0.5;
  double delta = 0.5;
  std::vector<double> target_angles{-kPi / 4.0, 0.0, kPi / 4.0};

  double dist_tx_irs = 30.0;
  double dist_irs_ehd = 30.0;
  double dist_tx_ehd = 50.0;
  double ple_tx_irs = 2.5;
  double ple_irs_ehd = 2.5;
  double ple_tx_ehd = 3.0;
  double pl_ref = 0.1;
  double rician_k = 3.9810717055349722;  // 6 dB

  std::uint64_t seed = 1;
  LosMode los_mode = LosMode::iid_gaussian;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

/// One realization of every channel in the scenario.
struct ChannelSet {
  CMatrix h_br;                  // L x N, transmitter -> IRS
  std::vector<CRowVector> h_ru;  // K rows of length L, IRS -> EHD k
  std::vector<CRowVector> h_d;   // K rows of length N, transmitter -> EHD k

  int n_tx() const { return static_cast<int>(h_br.cols()); }
  int n_irs() const { return static_cast<int>(h_br.rows()); }
  int n_ehd() const { return static_cast<int>(h_ru.size()); }

  /// Throws std::invalid_argument when dimensions disagree with the config or
  /// an entry is not finite.
  void check_against(const SystemConfig& config) const;
};

/// Array response a(theta) of an n-element uniform linear array;
/// element l is exp(j 2 pi l delta sin(theta)).
CRowVector steering_vector(double theta, int n_elements, double delta);

/// Large-scale gain pl_ref * dist^(-ple). Throws for dist <= 0.
double path_loss(double pl_ref, double dist, double ple);

/// Draws a ChannelSet. Per link, entries are
///   sqrt(P_l) * (sqrt(K1/(K1+1)) * G_los + sqrt(1/(K1+1)) * G_nlos).
/// Draw order (fixed, so a stream can be replayed): H_br LoS then NLoS, each in
/// row-major order; then for each EHD k: h_ru,k LoS, h_ru,k NLoS, h_d,k LoS,
/// h_d,k NLoS. In steering mode the LoS draws are skipped.
ChannelSet sample_channels(const SystemConfig& config, Rng& rng);

/// Keeps the first n_irs IRS elements of a larger realization.
ChannelSet truncate_irs(const ChannelSet& channels, int n_irs);

}  // namespace iswpt
