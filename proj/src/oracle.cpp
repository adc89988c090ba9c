#include "iswpt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace iswpt {

namespace {

std::int64_t checked_power(int base, int exp, std::int64_t cap) {
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

RVector grid_point(std::int64_t index, int dim, int levels) {
  RVector phases(dim);
  for (int i = 0; i < dim; ++i) {
    phases(i) = -kPi + 2.0 * kPi * static_cast<double>(index % levels) / levels;
    index /= levels;
  }
  return phases;
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
};

// Evaluates score(grid_point(i)) for all i in [0, total) and returns the
// maximum with the smallest index on ties. Chunks are reduced in order.
Best exhaustive_max(std::int64_t total, int dim, int levels,
                    const std::function<double(const RVector&)>& score) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(oracle_threads(), std::max<std::int64_t>(total, 1)));
  std::vector<Best> partial(workers);
  auto run = [&](unsigned w) {
    const std::int64_t begin = total * w / workers;
    const std::int64_t end = total * (w + 1) / workers;
    Best b;
    for (std::int64_t i = begin; i < end; ++i) {
      const double v = score(grid_point(i, dim, levels));
      if (v > b.value) b = {v, i};
    }
    partial[w] = b;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  Best best;
  for (const Best& b : partial)
    if (b.index >= 0 && b.value > best.value) best = b;
  return best;
}

template <class Result, class Make>
Result search(int dim, const SearchBudget& budget, Rng* rng,
              const std::function<double(const RVector&)>& score, Make make) {
  budget.validate(dim);
  if (budget.mode == SearchMode::exhaustive) {
    const std::int64_t total = checked_power(budget.phase_levels, dim, budget.max_evals);
    const Best best = exhaustive_max(total, dim, budget.phase_levels, score);
    return {make(grid_point(best.index, dim, budget.phase_levels)), best.value, total};
  }
  if (rng == nullptr) throw std::invalid_argument("random search requires an Rng");
  Best best;
  RVector best_phases;
  for (std::int64_t i = 0; i < budget.max_evals; ++i) {
    RVector phases(dim);
    for (int d = 0; d < dim; ++d) {
      const auto q = static_cast<int>(rng->next_u64() % static_cast<std::uint64_t>(budget.phase_levels));
      phases(d) = -kPi + 2.0 * kPi * q / budget.phase_levels;
    }
    const double v = score(phases);
    if (v > best.value) {
      best = {v, i};
      best_phases = phases;
    }
  }
  return {make(best_phases), best.value, budget.max_evals};
}

}  // namespace

unsigned oracle_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void SearchBudget::validate(int dim) const {
  if (phase_levels < 2) throw std::invalid_argument("SearchBudget: phase_levels must be >= 2");
  if (max_evals < 1) throw std::invalid_argument("SearchBudget: max_evals must be >= 1");
  if (dim < 1) throw std::invalid_argument("SearchBudget: dimension must be >= 1");
  if (mode == SearchMode::exhaustive && checked_power(phase_levels, dim, max_evals) > max_evals)
    throw std::invalid_argument("SearchBudget: phase_levels^dim exceeds max_evals");
}

PhaseSearchResult quantized_phase_search(const ChannelSet& channels, const Beamformer& beam,
                                         const SystemConfig& config, const SearchBudget& budget,
                                         Rng* rng) {
  auto score = [&](const RVector& alpha) {
    return composite_objective(channels, PhaseProfile::from_angles(alpha), beam, config);
  };
  return search<PhaseSearchResult>(config.n_irs, budget, rng, score, [](const RVector& alpha) {
    return PhaseProfile::from_angles(alpha);
  });
}

BeamSearchResult quantized_beam_search(const ChannelSet& channels, const PhaseProfile& phases,
                                       const SystemConfig& config, const SearchBudget& budget,
                                       Rng* rng) {
  auto score = [&](const RVector& p) {
    return composite_objective(channels, phases, Beamformer::from_phases(p, config.p0), config);
  };
  return search<BeamSearchResult>(config.n_tx, budget, rng, score, [&](const RVector& p) {
    return Beamformer::from_phases(p, config.p0);
  });
}

}  // namespace iswpt
