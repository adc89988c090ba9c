#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iswpt/objective.hpp"
#include "iswpt/rng.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt {

enum class Algorithm { sdp, lc };

enum class InitMode { random_phases, zero_phases, given };

struct AoConfig {
  Algorithm algorithm = Algorithm::lc;
  int max_outer_iters = 30;     // I_sdr / I_lc
  int inner_mm_iters = 50;      // I_m
  double mm_rel_tol = 1e-6;
  double rel_tol = 1e-4;
  double sdp_tol = 1e-7;
  int n_rand = 200;
  InitMode init_mode = InitMode::random_phases;
  /// Used with InitMode::given.
  std::optional<PhaseProfile> initial_phases;
  /// Optional warm-start beam. Without it the beam starts from one SCA step
  /// away from the all-in-phase vector.
  std::optional<Beamformer> initial_beam;
  /// false keeps the phases at their initial value and optimizes only w
  /// (random phase scheme baseline).
  bool update_phases = true;

  void validate() const;
};

enum class HalfStep { init, beam, phases };

struct AoRecord {
  int iteration = 0;  // outer iteration, 0 for the initial point
  HalfStep step = HalfStep::init;
  double objective = 0.0;
  double energy_term = 0.0;
  double sensing_term = 0.0;
  /// SDP only: relaxation upper bound of the half-step, NaN otherwise.
  double relaxed_objective = 0.0;
  double elapsed_ms = 0.0;  // wall time since the start of run_ao
  double beam_residual = 0.0;   // max | |w(n)| - sqrt(P0/N) |
  double phase_residual = 0.0;  // max | |v(l)| - 1 |
};

struct AoTrace {
  std::vector<AoRecord> records;
  std::optional<Beamformer> beam;
  std::optional<PhaseProfile> phases;
  int outer_iterations = 0;
  bool converged = false;
  std::optional<std::string> failure;

  double final_objective() const { return records.empty() ? 0.0 : records.back().objective; }
};

/// Alternating optimization: each outer iteration updates w for fixed v, then
/// v for fixed w, and records the objective after both half-steps. Stops when
/// the relative change of J over an outer iteration drops below rel_tol, or
/// after max_outer_iters.
///
/// For the SDP algorithm, an extracted point that would lower J is rejected
/// in favour of the current iterate; the relaxation bound is still recorded.
/// An SDP solver failure ends the run with `failure` set and the last feasible
/// iterates kept.
AoTrace run_ao(const SystemConfig& config, const AoConfig& ao, const ChannelSet& channels,
               Rng& rng);

}  // namespace iswpt
