#include "iswpt/ao.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "iswpt/lc.hpp"
#include "iswpt/sdp.hpp"

namespace iswpt {

void AoConfig::validate() const {
  if (max_outer_iters < 1) throw std::invalid_argument("AoConfig: max_outer_iters must be >= 1");
  if (inner_mm_iters < 1) throw std::invalid_argument("AoConfig: inner_mm_iters must be >= 1");
  if (!(rel_tol >= 0.0) || !(sdp_tol > 0.0) || !(mm_rel_tol >= 0.0))
    throw std::invalid_argument("AoConfig: tolerances must be positive");
  if (n_rand < 0) throw std::invalid_argument("AoConfig: n_rand must be >= 0");
  if (init_mode == InitMode::given && !initial_phases)
    throw std::invalid_argument("AoConfig: InitMode::given requires initial_phases");
}

namespace {

using Clock = std::chrono::steady_clock;

class TraceBuilder {
 public:
  TraceBuilder(const SystemConfig& config, const ChannelSet& channels)
      : config_(config), channels_(channels), start_(Clock::now()) {}

  double record(AoTrace& trace, int iteration, HalfStep step, const Beamformer& beam,
                const PhaseProfile& phases, double relaxed) const {
    const ObjectiveTerms t = objective_terms(channels_, phases, beam, config_);
    AoRecord r;
    r.iteration = iteration;
    r.step = step;
    r.objective = t.objective();
    r.energy_term = t.energy_term;
    r.sensing_term = t.sensing_term;
    r.relaxed_objective = relaxed;
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    r.beam_residual = beam.modulus_error();
    r.phase_residual = phases.modulus_error();
    trace.records.push_back(r);
    return r.objective;
  }

 private:
  const SystemConfig& config_;
  const ChannelSet& channels_;
  Clock::time_point start_;
};

constexpr double kNoBound = std::numeric_limits<double>::quiet_NaN();

}  // namespace

AoTrace run_ao(const SystemConfig& config, const AoConfig& ao, const ChannelSet& channels,
               Rng& rng) {
  config.validate();
  ao.validate();
  channels.check_against(config);
  TraceBuilder tb(config, channels);
  AoTrace trace;

  PhaseProfile phases = [&] {
    switch (ao.init_mode) {
      case InitMode::zero_phases:
        return PhaseProfile::zeros(config.n_irs);
      case InitMode::given:
        if (ao.initial_phases->size() != config.n_irs)
          throw std::invalid_argument("run_ao: initial phases have wrong length");
        return *ao.initial_phases;
      case InitMode::random_phases:
      default:
        return PhaseProfile::random(config.n_irs, rng);
    }
  }();
  Beamformer beam = [&] {
    if (ao.initial_beam) {
      if (ao.initial_beam->size() != config.n_tx)
        throw std::invalid_argument("run_ao: initial beam has wrong length");
      return *ao.initial_beam;
    }
    const Beamformer flat = Beamformer::uniform(config.n_tx, config.p0);
    return sca_update_w(build_operators(channels, phases, flat, config).big_h, flat, config);
  }();

  double previous = tb.record(trace, 0, HalfStep::init, beam, phases, kNoBound);

  for (int it = 1; it <= ao.max_outer_iters; ++it) {
    double current = previous;
    try {
      // Beam half-step.
      {
        const DerivedOperators op = build_operators(channels, phases, beam, config);
        if (ao.algorithm == Algorithm::lc) {
          beam = sca_update_w(op.big_h, beam, config);
          current = tb.record(trace, it, HalfStep::beam, beam, phases, kNoBound);
        } else {
          BeamSdpResult res = sdp_update_w(op, config, rng, ao.sdp_tol, ao.n_rand);
          if (composite_objective(channels, phases, res.beam, config) >= current)
            beam = std::move(res.beam);
          current = tb.record(trace, it, HalfStep::beam, beam, phases, res.relaxed_objective);
        }
      }
      // Phase half-step.
      if (ao.update_phases) {
        const DerivedOperators op = build_operators(channels, phases, beam, config);
        if (ao.algorithm == Algorithm::lc) {
          MmResult mm = mm_solve(MmProblem::from_operators(op, phases), ao.inner_mm_iters,
                                 ao.mm_rel_tol);
          phases = std::move(mm.phases);
          current = tb.record(trace, it, HalfStep::phases, beam, phases, kNoBound);
        } else {
          PhaseSdpResult res = sdp_update_v(op, rng, ao.sdp_tol, ao.n_rand);
          if (composite_objective(channels, res.phases, beam, config) >= current)
            phases = std::move(res.phases);
          current = tb.record(trace, it, HalfStep::phases, beam, phases, res.relaxed_objective);
        }
      }
    } catch (const SdpError& e) {
      trace.failure = e.what();
      break;
    }
    trace.outer_iterations = it;
    const double change = std::abs(current - previous) / std::max(std::abs(previous), 1e-300);
    previous = current;
    if (change < ao.rel_tol) {
      trace.converged = true;
      break;
    }
  }

  trace.beam = std::move(beam);
  trace.phases = std::move(phases);
  return trace;
}

}  // namespace iswpt
