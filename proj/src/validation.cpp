#include "iswpt/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "iswpt/ao.hpp"
#include "iswpt/experiment.hpp"
#include "iswpt/lc.hpp"
#include "iswpt/oracle.hpp"
#include "iswpt/parallel.hpp"
#include "iswpt/sdp.hpp"

namespace iswpt {

namespace {

constexpr std::uint64_t kSuiteSeed = 20240601;

struct Verdict {
  bool passed;
  std::string detail;
};

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mean(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

SystemConfig scenario(int n_tx, int n_irs, int n_ehd, int n_targets, double rho) {
  SystemConfig c;
  c.n_tx = n_tx;
  c.n_irs = n_irs;
  c.n_ehd = n_ehd;
  c.rho = rho;
  c.target_angles.clear();
  for (int m = 0; m < n_targets; ++m)
    c.target_angles.push_back(n_targets == 1 ? 0.0 : deg_to_rad(-45.0 + 90.0 * m / (n_targets - 1)));
  c.n_targets = n_targets;
  return c;
}

ChannelSet channels_for(const SystemConfig& c, std::uint64_t instance) {
  Rng rng = Rng::stream(kSuiteSeed, instance);
  return sample_channels(c, rng);
}

AoConfig ao_for(Algorithm a, int iters, double rel_tol) {
  AoConfig ao;
  ao.algorithm = a;
  ao.max_outer_iters = iters;
  ao.rel_tol = rel_tol;
  return ao;
}

// Objective after outer iteration `it` (or the last recorded one).
double objective_at(const AoTrace& t, int it) {
  double j = t.records.front().objective;
  for (const AoRecord& r : t.records)
    if (r.iteration <= it) j = r.objective;
  return j;
}

Verdict feasibility() {
  double worst = 0.0;
  int runs = 0;
  for (int inst = 0; inst < 6; ++inst) {
    const SystemConfig c = scenario(6, 10, 3, 3, 0.2 + 0.1 * inst);
    const ChannelSet ch = channels_for(c, 100 + inst);
    for (Algorithm a : {Algorithm::lc, Algorithm::sdp}) {
      for (bool frozen : {false, true}) {
        AoConfig ao = ao_for(a, 10, 0.0);
        ao.update_phases = !frozen;
        Rng rng = Rng::stream(kSuiteSeed + 1, 10 * inst + (a == Algorithm::sdp) + 2 * frozen);
        const AoTrace t = run_ao(c, ao, ch, rng);
        if (t.failure) return {false, "SDP failure: " + *t.failure};
        for (const AoRecord& r : t.records) worst = std::max({worst, r.beam_residual, r.phase_residual});
        ++runs;
      }
    }
  }
  return {worst <= 1e-12, fmt::format("{} runs, worst modulus residual {:.3g}", runs, worst)};
}

Verdict lc_monotone() {
  const int instances = 50;
  std::vector<double> worst(instances, 0.0);
  parallel_for(instances, [&](std::size_t i) {
    const SystemConfig c = scenario(8, 16, 3, 3, 0.5);
    const ChannelSet ch = channels_for(c, 200 + i);
    Rng rng = Rng::stream(kSuiteSeed + 2, i);
    const AoTrace t = run_ao(c, ao_for(Algorithm::lc, 30, 0.0), ch, rng);
    for (std::size_t k = 1; k < t.records.size(); ++k) {
      const double drop = t.records[k - 1].objective - t.records[k].objective;
      worst[i] = std::max(worst[i], drop / t.records[k - 1].objective);
    }
  });
  const int ok = static_cast<int>(std::count_if(worst.begin(), worst.end(), [](double w) { return w <= 1e-9; }));
  return {ok == instances, fmt::format("{}/{} monotone, worst relative drop {:.3g}", ok, instances,
                                       *std::max_element(worst.begin(), worst.end()))};
}

Verdict convergence_speed() {
  const int instances = 10;
  std::string detail;
  bool passed = true;
  for (Algorithm a : {Algorithm::lc, Algorithm::sdp}) {
    for (int l : {20, 40}) {
      std::vector<double> ratio(instances);
      parallel_for(instances, [&](std::size_t i) {
        SystemConfig c;
        c.n_irs = l;
        const ChannelSet ch = channels_for(c, 300 + i);
        Rng rng = Rng::stream(kSuiteSeed + 3, 100 * l + i);
        const AoTrace t = run_ao(c, ao_for(a, 30, 0.0), ch, rng);
        ratio[i] = objective_at(t, 5) / t.final_objective();
      });
      const double m = median(ratio);
      passed = passed && m >= 0.99;
      detail += fmt::format("{}{} L={}: median J5/J30 {:.5f}", detail.empty() ? "" : "; ",
                            a == Algorithm::lc ? "LC" : "SDP", l, m);
    }
  }
  return {passed, detail};
}

Verdict cross_agreement() {
  const int seeds = 20;
  std::vector<double> gap(seeds);
  parallel_for(seeds, [&](std::size_t i) {
    const SystemConfig c = scenario(4, 8, 2, 2, 0.5);
    const ChannelSet ch = channels_for(c, 400 + i);
    Rng r1 = Rng::stream(kSuiteSeed + 4, i), r2 = Rng::stream(kSuiteSeed + 4, i);
    const double lc = run_ao(c, ao_for(Algorithm::lc, 30, 1e-4), ch, r1).final_objective();
    const double sdp = run_ao(c, ao_for(Algorithm::sdp, 30, 1e-4), ch, r2).final_objective();
    gap[i] = std::abs(lc - sdp) / sdp;
  });
  const double m = median(gap);
  return {m <= 0.05, fmt::format("median |J_LC - J_SDP| / J_SDP = {:.4g} over {} seeds (max {:.4g})", m,
                                 seeds, *std::max_element(gap.begin(), gap.end()))};
}

Verdict mm_oracle() {
  const int instances = 10;
  std::vector<double> ratio(instances);
  for (int i = 0; i < instances; ++i) {
    const SystemConfig c = scenario(12, 6, 5, 3, 0.5);
    const ChannelSet ch = channels_for(c, 500 + i);
    Rng rng = Rng::stream(kSuiteSeed + 5, i);
    RVector p(c.n_tx);
    for (int n = 0; n < c.n_tx; ++n) p(n) = rng.uniform_phase();
    const Beamformer w = Beamformer::from_phases(p, c.p0);
    const PhaseProfile start = PhaseProfile::random(c.n_irs, rng);
    const DerivedOperators op = build_operators(ch, start, w, c);
    const MmResult mm = mm_solve(MmProblem::from_operators(op, start), 100000, 1e-13);
    const double j_mm = composite_objective(ch, mm.phases, w, c);
    const PhaseSearchResult best = quantized_phase_search(ch, w, c, SearchBudget{});
    ratio[i] = j_mm / best.objective;
  }
  const int ok = static_cast<int>(std::count_if(ratio.begin(), ratio.end(), [](double r) { return r >= 0.98; }));
  return {ok >= 9, fmt::format("{}/{} instances with J_MM >= 0.98 x oracle (min ratio {:.4f})", ok, instances,
                               *std::min_element(ratio.begin(), ratio.end()))};
}

Verdict sdp_exactness() {
  struct Case {
    DiagSdpProblem p;
    double expected;
  };
  CMatrix diag = CMatrix::Zero(4, 4);
  diag.diagonal() << 1.5, -2.0, 0.25, 3.0;
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const Case cases[] = {{{diag, RVector::Ones(4)}, 2.75},
                        {{CMatrix::Ones(3, 3), RVector::Ones(3)}, 9.0},
                        {{swap, RVector::Ones(2)}, 2.0}};
  bool passed = true;
  std::string detail;
  for (const Case& cs : cases) {
    const SdpSolution s = solve_diag_sdp(cs.p);
    const double err = std::abs(s.objective - cs.expected);
    passed = passed && err <= 1e-6 * (1.0 + std::abs(cs.expected));
    detail += fmt::format("{}|{:.6g} - {}| = {:.2g}", detail.empty() ? "" : "; ", s.objective, cs.expected, err);
  }
  return {passed, detail};
}

Verdict surrogates() {
  double worst_sca_tangency = 0.0, worst_mm_tangency = 0.0, worst_domination = 0.0;
  for (int i = 0; i < 5; ++i) {
    const SystemConfig c = scenario(12, 20, 5, 3, 0.1 + 0.2 * i);
    const ChannelSet ch = channels_for(c, 700 + i);
    Rng rng = Rng::stream(kSuiteSeed + 7, i);
    RVector p(c.n_tx);
    for (int n = 0; n < c.n_tx; ++n) p(n) = rng.uniform_phase();
    const Beamformer w = Beamformer::from_phases(p, c.p0);
    const PhaseProfile v = PhaseProfile::random(c.n_irs, rng);
    const DerivedOperators op = build_operators(ch, v, w, c);

    const double quad = w.weights().dot(op.big_h * w.weights()).real();
    worst_sca_tangency = std::max(worst_sca_tangency, std::abs(sca_minorant(op.big_h, w, w) - quad) / quad);

    const MmProblem mm = MmProblem::from_operators(op, v);
    const double g0 = mm_objective(mm, v);
    worst_mm_tangency =
        std::max(worst_mm_tangency, std::abs(mm_surrogate(mm, v) - g0) / std::max(std::abs(g0), 1e-300));
    const double scale = std::max(std::abs(g0), op.energy_offset);
    for (int s = 0; s < 1000; ++s) {
      const PhaseProfile u = PhaseProfile::random(c.n_irs, rng);
      const double slack = (mm_surrogate(mm, u) - mm_objective(mm, u)) / scale;
      worst_domination = std::min(worst_domination, slack);
    }
  }
  const bool passed = worst_sca_tangency <= 1e-10 && worst_mm_tangency <= 1e-10 && worst_domination >= -1e-10;
  return {passed, fmt::format("SCA tangency {:.2g}, MM tangency {:.2g}, min domination slack {:.2g}",
                              worst_sca_tangency, worst_mm_tangency, worst_domination)};
}

Verdict monte_carlo() {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const SystemConfig c = scenario(12, 20, 5, 3, 0.5);
    const ChannelSet ch = channels_for(c, 800 + i);
    Rng rng = Rng::stream(kSuiteSeed + 8, i);
    RVector p(c.n_tx);
    for (int n = 0; n < c.n_tx; ++n) p(n) = rng.uniform_phase();
    const Beamformer w = Beamformer::from_phases(p, c.p0);
    const PhaseProfile v = PhaseProfile::random(c.n_irs, rng);
    const double theta = c.target_angles[i % 3];
    const Complex gain = (steering_vector(theta, c.n_irs, c.delta) * v.theta() * ch.h_br * w.weights())(0);
    double acc = 0.0;
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) acc += std::norm(gain * rng.complex_normal());
    const double closed = beampattern_gain(ch, v, w, theta, c.delta);
    worst = std::max(worst, std::abs(acc / draws - closed) / closed);
  }
  return {worst <= 0.01, fmt::format("worst relative deviation {:.4f} over 5 instances", worst)};
}

ExperimentSpec figure_spec(int n_trials) {
  ExperimentSpec s;
  s.scenario.seed = kSuiteSeed;
  s.n_trials = n_trials;
  s.ao = ao_for(Algorithm::lc, 30, 1e-4);
  return s;
}

Verdict irs_benefit() {
  ExperimentSpec s = figure_spec(50);
  s.scenario.rho = 0.9;
  s.l_values = {10, 20, 30, 40};
  s.algorithms = {Scheme::lc, Scheme::rps};
  const auto cells = run_sweep_l(s);
  const std::size_t nl = s.l_values.size();
  bool increasing = true;
  bool beats = true;
  std::string detail = "mean E(L):";
  for (std::size_t li = 0; li < nl; ++li) {
    const auto& opt = cells[li].harvested;
    const auto& rps = cells[nl + li].harvested;
    if (li > 0 && !(mean(opt) > mean(cells[li - 1].harvested))) increasing = false;
    int wins = 0;
    for (int t = 0; t < s.n_trials; ++t) wins += opt[t] > rps[t];
    const double win_rate = static_cast<double>(wins) / s.n_trials;
    const double improvement = mean(opt) / mean(rps) - 1.0;
    if (win_rate < 0.95 || improvement < 0.5) beats = false;
    detail += fmt::format(" L={} opt {:.4g} rps {:.4g} win {:.0f}% gain {:+.0f}%;", s.l_values[li], mean(opt),
                          mean(rps), 100 * win_rate, 100 * improvement);
  }
  detail += fmt::format(" increasing={} beats_rps={}", increasing, beats);
  return {increasing && beats, detail};
}

Verdict tradeoff() {
  ExperimentSpec s = figure_spec(50);
  for (int i = 1; i <= 9; ++i) s.rho_values.push_back(0.1 * i);
  s.algorithms = {Scheme::lc};
  const auto cells = run_sweep_rho(s);
  int energy_ok = 0, pattern_ok = 0;
  for (int t = 0; t < s.n_trials; ++t) {
    bool e = true, b = true;
    for (std::size_t r = 1; r < cells.size(); ++r) {
      e = e && cells[r].harvested[t] >= cells[r - 1].harvested[t];
      b = b && cells[r].beampattern_sum[t] <= cells[r - 1].beampattern_sum[t];
    }
    energy_ok += e;
    pattern_ok += b;
  }
  const double need = 0.9 * s.n_trials;
  return {energy_ok >= need && pattern_ok >= need,
          fmt::format("energy nondecreasing in {}/{} trials, beampattern nonincreasing in {}/{}; mean E at "
                      "rho=0.1 {:.4g}, rho=0.9 {:.4g}",
                      energy_ok, s.n_trials, pattern_ok, s.n_trials, mean(cells.front().harvested),
                      mean(cells.back().harvested))};
}

Verdict beampattern_shape() {
  ExperimentSpec s = figure_spec(20);
  s.scenario.n_irs = 40;
  s.scenario.rho = 0.5;
  s.angle_step_deg = 0.5;
  s.algorithms = {Scheme::lc};
  const auto cells = run_beampattern(s);
  const BeampatternCell& cell = cells.front();
  const auto& grid = cell.angles_deg;
  const std::vector<double> targets = [&] {
    std::vector<double> t;
    for (double a : s.scenario.target_angles) t.push_back(rad_to_deg(a));
    return t;
  }();

  int shaped = 0;
  double target_gain = 0.0, off_gain = 0.0;
  int target_count = 0, off_count = 0;
  for (const auto& g : cell.gains) {
    bool all = true;
    for (double target : targets) {
      bool found = false;
      for (std::size_t a = 0; a < grid.size(); ++a) {
        if (std::abs(grid[a] - target) > 3.0 + 1e-9) continue;
        const double left = a > 0 ? g[a - 1] : -1.0;
        const double right = a + 1 < grid.size() ? g[a + 1] : -1.0;
        if (g[a] >= left && g[a] >= right) found = true;
      }
      all = all && found;
    }
    shaped += all;
    for (std::size_t a = 0; a < grid.size(); ++a) {
      const bool on = std::any_of(targets.begin(), targets.end(),
                                  [&](double t) { return std::abs(grid[a] - t) < 1e-9; });
      const bool near = std::any_of(targets.begin(), targets.end(),
                                    [&](double t) { return std::abs(grid[a] - t) <= 3.0 + 1e-9; });
      if (on) target_gain += g[a], ++target_count;
      else if (!near) off_gain += g[a], ++off_count;
    }
  }
  target_gain /= std::max(target_count, 1);
  off_gain /= std::max(off_count, 1);
  const int n = static_cast<int>(cell.gains.size());
  return {shaped >= 0.8 * n && target_gain > off_gain,
          fmt::format("local maxima near all targets in {}/{} trials; mean target gain {:.4g} vs off-target {:.4g}",
                      shaped, n, target_gain, off_gain)};
}

Verdict determinism() {
  ExperimentSpec s = figure_spec(3);
  s.scenario.n_irs = 8;
  s.l_values = {4, 8};
  s.rho_values = {0.3, 0.7};
  s.angle_step_deg = 5.0;
  s.ao.max_outer_iters = 5;
  s.ao.n_rand = 20;
  s.algorithms = {Scheme::sdp, Scheme::lc, Scheme::rps};
  const std::pair<const char*, std::string (*)(const ExperimentSpec&)> commands[] = {
      {"convergence", &cmd_convergence},
      {"sweep-l", &cmd_sweep_l},
      {"sweep-rho", &cmd_sweep_rho},
      {"beampattern", &cmd_beampattern}};
  std::string detail;
  bool passed = true;
  for (const auto& [name, fn] : commands) {
    const bool same = fn(s) == fn(s);
    passed = passed && same;
    detail += fmt::format("{}{} {}", detail.empty() ? "" : ", ", name, same ? "identical" : "DIFFERS");
  }
  return {passed, detail};
}

struct Entry {
  int id;
  const char* name;
  Verdict (*run)();
};

const Entry kEntries[] = {
    {1, "feasibility exactness", &feasibility},
    {2, "LC monotone ascent", &lc_monotone},
    {3, "convergence speed", &convergence_speed},
    {4, "LC/SDP agreement", &cross_agreement},
    {5, "MM vs exhaustive oracle", &mm_oracle},
    {6, "SDP solver exactness", &sdp_exactness},
    {7, "surrogate tangency and domination", &surrogates},
    {8, "Monte-Carlo beampattern model", &monte_carlo},
    {9, "IRS benefit trend", &irs_benefit},
    {10, "rho trade-off trends", &tradeoff},
    {11, "beampattern shape", &beampattern_shape},
    {12, "CLI determinism", &determinism},
};

}  // namespace

std::vector<int> acceptance_ids() {
  std::vector<int> ids;
  for (const Entry& e : kEntries) ids.push_back(e.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  const auto it = std::find_if(std::begin(kEntries), std::end(kEntries), [&](const Entry& e) { return e.id == id; });
  if (it == std::end(kEntries)) throw std::out_of_range(fmt::format("unknown acceptance criterion {}", id));
  CriterionResult r;
  r.id = id;
  r.name = it->name;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Verdict v = it->run();
    r.passed = v.passed;
    r.detail = v.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = fmt::format("exception: {}", e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& report) {
  std::vector<CriterionResult> out;
  for (int id : ids.empty() ? acceptance_ids() : ids) {
    out.push_back(run_criterion(id));
    if (report) report(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt::format("[{}] criterion {:2d} {} ({:.1f} s): {}", r.passed ? "PASS" : "FAIL", r.id, r.name, r.seconds,
                     r.detail);
}

}  // namespace iswpt
