#pragma once

#include <cstdint>

#include "iswpt/objective.hpp"
#include "iswpt/rng.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt {

enum class SearchMode { exhaustive, random };

/// Phase grid {-pi + 2 pi q / phase_levels : q = 0 .. phase_levels - 1}.
struct SearchBudget {
  int phase_levels = 8;
  std::int64_t max_evals = 1 << 20;
  SearchMode mode = SearchMode::exhaustive;

  /// Throws std::invalid_argument if exhaustive search over `dim` variables
  /// would exceed max_evals.
  void validate(int dim) const;
};

struct PhaseSearchResult {
  PhaseProfile phases;
  double objective;
  std::int64_t evaluations;
};

struct BeamSearchResult {
  Beamformer beam;
  double objective;
  std::int64_t evaluations;
};

/// Brute-force maximizer of J over quantized IRS phases for a fixed beam.
/// Exhaustive mode visits every grid point (index order: element 0 is the
/// fastest-moving digit) and breaks ties toward the smallest index. Random
/// mode draws max_evals grid points from `rng`.
PhaseSearchResult quantized_phase_search(const ChannelSet& channels, const Beamformer& beam,
                                         const SystemConfig& config, const SearchBudget& budget,
                                         Rng* rng = nullptr);

/// Same over per-antenna beam phases for fixed IRS phases.
BeamSearchResult quantized_beam_search(const ChannelSet& channels, const PhaseProfile& phases,
                                       const SystemConfig& config, const SearchBudget& budget,
                                       Rng* rng = nullptr);

/// Number of worker threads used by the exhaustive searches.
unsigned oracle_threads();

}  // namespace iswpt
