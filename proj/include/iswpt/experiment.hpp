#pragma once

#include <string>
#include <vector>

#include "iswpt/ao.hpp"
#include "iswpt/config_io.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt {

inline constexpr const char* kVersion = "1.0.0";

enum class SweepKind { none, over_l, over_rho, beampattern };

/// Design schemes compared in the experiments. RPS keeps uniformly random IRS
/// phases and optimizes only the beamformer.
enum class Scheme { sdp, lc, rps };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct ExperimentSpec {
  SystemConfig scenario;
  SweepKind sweep = SweepKind::none;
  std::vector<int> l_values;       // empty: scenario.n_irs
  std::vector<double> rho_values;  // empty: scenario.rho
  double angle_step_deg = 1.0;
  std::vector<Scheme> algorithms{Scheme::sdp, Scheme::lc};
  int n_trials = 50;
  std::string output_path;
  AoConfig ao;
  /// Fill elapsed_ms in the convergence CSV. Off by default so that output is
  /// byte-reproducible.
  bool wall_clock = false;

  std::vector<int> irs_sizes() const;
  std::vector<double> rhos() const;
  void validate() const;
};

/// Reads scenario keys (see read_system_config) plus the experiment keys
/// sweep, l_values, rho_values, angle_step, algorithms, n_trials, output,
/// max_outer_iters, inner_mm_iters, rel_tol, mm_rel_tol, sdp_tol, n_rand,
/// init and wall_clock. Unknown keys are rejected.
ExperimentSpec parse_experiment_spec(KeyValueFile& kv);
ExperimentSpec load_experiment_spec(const std::string& path);

std::string canonical_text(const ExperimentSpec& spec);

/// Channels of Monte-Carlo trial `trial`: drawn once at the largest IRS size
/// of the spec, then truncated to n_irs elements.
ChannelSet trial_channels(const ExperimentSpec& spec, int trial, int n_irs);

/// Random stream for the optimizer in one (trial, scheme, n_irs) cell.
Rng trial_rng(const ExperimentSpec& spec, int trial, Scheme scheme, int n_irs);

/// Runs one scheme on one channel realization.
AoTrace run_scheme(const SystemConfig& config, const AoConfig& base, Scheme scheme,
                   const ChannelSet& channels, Rng& rng);

struct SweepLCell {
  Scheme scheme;
  int n_irs;
  std::vector<double> harvested;  // per trial, sum_k eta |h~_k w|^2
};

struct SweepRhoCell {
  Scheme scheme;
  double rho;
  std::vector<double> harvested;
  std::vector<double> beampattern_sum;
};

struct BeampatternCell {
  Scheme scheme;
  int n_irs;
  double rho;
  std::vector<double> angles_deg;
  std::vector<std::vector<double>> gains;  // [trial][angle]
};

std::vector<SweepLCell> run_sweep_l(const ExperimentSpec& spec);
/// The rho list is walked in the given order per trial, each point warm-started
/// from the previous point's solution.
std::vector<SweepRhoCell> run_sweep_rho(const ExperimentSpec& spec);
std::vector<BeampatternCell> run_beampattern(const ExperimentSpec& spec);

/// Angle grid from -90 to 90 degrees inclusive.
std::vector<double> angle_grid_deg(double step_deg);

// CSV producers. Each output starts with a `#` provenance line (version,
// command, seed, config hash) followed by the header row.
std::string cmd_convergence(const ExperimentSpec& spec);
std::string cmd_sweep_l(const ExperimentSpec& spec);
std::string cmd_sweep_rho(const ExperimentSpec& spec);
std::string cmd_beampattern(const ExperimentSpec& spec);

}  // namespace iswpt
