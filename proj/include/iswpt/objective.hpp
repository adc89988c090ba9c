#pragma once

#include <vector>

#include "iswpt/rng.hpp"
#include "iswpt/scenario.hpp"
#include "iswpt/types.hpp"

namespace iswpt {

/// Transmit weight vector w with |w(n)| = sqrt(P0/N) on every antenna.
///
/// Instances can only be built from phases, so the per-antenna power
/// constraint holds by construction.
class Beamformer {
 public:
  static Beamformer from_phases(const RVector& phases, double p0);
  /// All antennas in phase.
  static Beamformer uniform(int n_tx, double p0);
  /// Per-entry projection exp(j arg candidate(n)) onto the feasible set.
  /// Entries with zero modulus take their phase from `fallback`.
  static Beamformer project(const CVector& candidate, double p0, const Beamformer& fallback);
  /// As above; zero-modulus entries get phase 0.
  static Beamformer project(const CVector& candidate, double p0);

  const CVector& weights() const { return w_; }
  const RVector& phases() const { return phases_; }
  int size() const { return static_cast<int>(w_.size()); }
  double amplitude() const { return amplitude_; }
  /// W = w w^H, rebuilt on each call.
  CMatrix covariance() const { return w_ * w_.adjoint(); }
  /// max_n | |w(n)| - sqrt(P0/N) |
  double modulus_error() const;

 private:
  Beamformer(RVector phases, double amplitude);

  RVector phases_;
  double amplitude_;
  CVector w_;
};

/// IRS reflection profile v(l) = exp(j alpha_l), alpha_l in [-pi, pi].
class PhaseProfile {
 public:
  static PhaseProfile from_angles(const RVector& alpha);
  static PhaseProfile zeros(int n_irs);
  static PhaseProfile random(int n_irs, Rng& rng);
  /// exp(j arg candidate(l)); zero-modulus entries keep `fallback`'s phase.
  static PhaseProfile project(const CRowVector& candidate, const PhaseProfile& fallback);
  static PhaseProfile project(const CRowVector& candidate);

  const RVector& angles() const { return alpha_; }
  const CRowVector& reflection() const { return v_; }
  int size() const { return static_cast<int>(v_.size()); }
  /// [v, 1]
  CRowVector lifted() const;
  /// Theta = diag(v)
  CMatrix theta() const { return v_.transpose().asDiagonal(); }
  double modulus_error() const;

 private:
  explicit PhaseProfile(RVector alpha);

  RVector alpha_;
  CRowVector v_;
};

/// Quantities shared by the SDP and low-complexity updates. Built for a fixed
/// (channels, phases, beam) triple; c/a/d/f11/f12/big_f depend on the beam,
/// h_tilde/h_hat/big_h on the phases.
struct DerivedOperators {
  std::vector<CRowVector> h_tilde;  // K x (1 x N)
  std::vector<CRowVector> h_hat;    // M x (1 x N)
  std::vector<CVector> c_vecs;      // K x (L x 1)
  std::vector<Complex> a_scalars;   // K
  std::vector<CVector> d_vecs;      // M x (L x 1)
  CMatrix f11;                      // L x L
  CVector f12;                      // L x 1
  CMatrix big_f;                    // (L+1) x (L+1)
  CMatrix big_h;                    // N x N
  /// rho eta P0 sum_k |a_k|^2, so that J = v~ F v~^H + energy_offset.
  double energy_offset = 0.0;
};

/// Breakdown of the trade-off objective at one operating point.
struct ObjectiveTerms {
  double energy_term = 0.0;       // rho eta P0 sum_k |h~_k w|^2
  double sensing_term = 0.0;      // (1 - rho) sum_m |h^_m w|^2
  double harvested_total = 0.0;   // sum_k eta |h~_k w|^2 [W]
  double beampattern_sum = 0.0;   // sum_m |h^_m w|^2
  double objective() const { return energy_term + sensing_term; }
};

/// h~_k = h_ru,k Theta H_br + h_d,k
CRowVector effective_ehd_channel(const ChannelSet& channels, const PhaseProfile& phases, int k);
/// h^ = a(theta) Theta H_br
CRowVector effective_sensing_channel(const ChannelSet& channels, const PhaseProfile& phases,
                                     double theta, double delta);

/// |a(theta) Theta H_br w|^2
double beampattern_gain(const ChannelSet& channels, const PhaseProfile& phases,
                        const Beamformer& beam, double theta, double delta);

/// eta |h~_k w|^2 in watts (power enters once, through w). k is 0-based.
double harvested_energy(const ChannelSet& channels, const PhaseProfile& phases,
                        const Beamformer& beam, int k, double eta);

ObjectiveTerms objective_terms(const ChannelSet& channels, const PhaseProfile& phases,
                               const Beamformer& beam, const SystemConfig& config);

/// J = rho eta P0 sum_k |h~_k w|^2 + (1 - rho) sum_m |h^_m w|^2
double composite_objective(const ChannelSet& channels, const PhaseProfile& phases,
                           const Beamformer& beam, const SystemConfig& config);

DerivedOperators build_operators(const ChannelSet& channels, const PhaseProfile& phases,
                                 const Beamformer& beam, const SystemConfig& config);

}  // namespace iswpt
