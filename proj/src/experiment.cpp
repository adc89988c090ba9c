#include "iswpt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "iswpt/oracle.hpp"
#include "iswpt/parallel.hpp"

namespace iswpt {

namespace {

const char* sweep_name(SweepKind s) {
  switch (s) {
    case SweepKind::over_l: return "over_l";
    case SweepKind::over_rho: return "over_rho";
    case SweepKind::beampattern: return "beampattern";
    case SweepKind::none: break;
  }
  return "none";
}

std::uint64_t scheme_code(Scheme s) { return static_cast<std::uint64_t>(s) + 1; }

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

std::string provenance(const ExperimentSpec& spec, const char* command) {
  return fmt::format("# iswpt {} command={} seed={} config_hash={:016x}\n", kVersion, command,
                     spec.scenario.seed, fnv1a64(canonical_text(spec)));
}

SystemConfig with_irs(SystemConfig c, int n_irs) {
  c.n_irs = n_irs;
  return c;
}

SystemConfig with_rho(SystemConfig c, double rho) {
  c.rho = rho;
  return c;
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::sdp: return "SDP";
    case Scheme::lc: return "LC";
    case Scheme::rps: return "RPS";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (up == "SDP") return Scheme::sdp;
  if (up == "LC") return Scheme::lc;
  if (up == "RPS") return Scheme::rps;
  throw std::invalid_argument(fmt::format("unknown algorithm `{}` (expected SDP, LC or RPS)", name));
}

std::vector<int> ExperimentSpec::irs_sizes() const {
  return l_values.empty() ? std::vector<int>{scenario.n_irs} : l_values;
}

std::vector<double> ExperimentSpec::rhos() const {
  return rho_values.empty() ? std::vector<double>{scenario.rho} : rho_values;
}

void ExperimentSpec::validate() const {
  scenario.validate();
  ao.validate();
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("algorithm list must be non-empty");
  for (int l : l_values)
    if (l < 1) throw std::invalid_argument("l_values entries must be >= 1");
  for (double r : rho_values)
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rho_values entries must lie in [0, 1]");
  if (!(angle_step_deg > 0.0 && angle_step_deg <= 180.0))
    throw std::invalid_argument("angle_step must lie in (0, 180]");
}

ExperimentSpec parse_experiment_spec(KeyValueFile& kv) {
  ExperimentSpec spec;
  spec.scenario = read_system_config(kv);

  if (auto s = kv.take_string("sweep")) {
    if (*s == "none") spec.sweep = SweepKind::none;
    else if (*s == "over_l") spec.sweep = SweepKind::over_l;
    else if (*s == "over_rho") spec.sweep = SweepKind::over_rho;
    else if (*s == "beampattern") spec.sweep = SweepKind::beampattern;
    else throw std::invalid_argument(fmt::format("{}: unknown sweep `{}`", kv.source(), *s));
  }
  if (auto ls = kv.take_real_list("l_values")) {
    for (double l : *ls) {
      if (l != std::floor(l)) throw std::invalid_argument("l_values must be integers");
      spec.l_values.push_back(static_cast<int>(l));
    }
  }
  if (auto rs = kv.take_real_list("rho_values")) spec.rho_values = *rs;
  if (auto a = kv.take_real("angle_step")) spec.angle_step_deg = *a;
  if (auto algs = kv.take_string_list("algorithms")) {
    spec.algorithms.clear();
    for (const auto& a : *algs) spec.algorithms.push_back(parse_scheme(a));
  }
  if (auto n = kv.take_integer("n_trials")) spec.n_trials = static_cast<int>(*n);
  if (auto o = kv.take_string("output")) spec.output_path = *o;
  if (auto v = kv.take_integer("max_outer_iters")) spec.ao.max_outer_iters = static_cast<int>(*v);
  if (auto v = kv.take_integer("inner_mm_iters")) spec.ao.inner_mm_iters = static_cast<int>(*v);
  if (auto v = kv.take_real("rel_tol")) spec.ao.rel_tol = *v;
  if (auto v = kv.take_real("mm_rel_tol")) spec.ao.mm_rel_tol = *v;
  if (auto v = kv.take_real("sdp_tol")) spec.ao.sdp_tol = *v;
  if (auto v = kv.take_integer("n_rand")) spec.ao.n_rand = static_cast<int>(*v);
  if (auto v = kv.take_string("init")) {
    if (*v == "random") spec.ao.init_mode = InitMode::random_phases;
    else if (*v == "zero") spec.ao.init_mode = InitMode::zero_phases;
    else throw std::invalid_argument(fmt::format("{}: init must be `random` or `zero`", kv.source()));
  }
  if (auto v = kv.take_string("wall_clock")) {
    if (*v == "true") spec.wall_clock = true;
    else if (*v == "false") spec.wall_clock = false;
    else throw std::invalid_argument(fmt::format("{}: wall_clock must be true or false", kv.source()));
  }
  kv.require_all_used();
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  KeyValueFile kv = KeyValueFile::load(path);
  return parse_experiment_spec(kv);
}

std::string canonical_text(const ExperimentSpec& spec) {
  std::string out = canonical_text(spec.scenario);
  out += fmt::format("sweep={}\n", sweep_name(spec.sweep));
  out += "l_values=";
  for (int l : spec.irs_sizes()) out += fmt::format("{},", l);
  out += "\nrho_values=";
  for (double r : spec.rhos()) out += format_real(r) + ",";
  out += "\nalgorithms=";
  for (Scheme s : spec.algorithms) out += fmt::format("{},", scheme_name(s));
  out += fmt::format("\nangle_step={}\nn_trials={}\n", format_real(spec.angle_step_deg), spec.n_trials);
  out += fmt::format("max_outer_iters={}\ninner_mm_iters={}\nrel_tol={}\nmm_rel_tol={}\n",
                     spec.ao.max_outer_iters, spec.ao.inner_mm_iters, format_real(spec.ao.rel_tol),
                     format_real(spec.ao.mm_rel_tol));
  out += fmt::format("sdp_tol={}\nn_rand={}\ninit={}\nwall_clock={}\n", format_real(spec.ao.sdp_tol),
                     spec.ao.n_rand, spec.ao.init_mode == InitMode::zero_phases ? "zero" : "random",
                     spec.wall_clock);
  return out;
}

ChannelSet trial_channels(const ExperimentSpec& spec, int trial, int n_irs) {
  const auto sizes = spec.irs_sizes();
  const int l_max = std::max(n_irs, *std::max_element(sizes.begin(), sizes.end()));
  Rng rng = Rng::stream(spec.scenario.seed, static_cast<std::uint64_t>(trial));
  const ChannelSet full = sample_channels(with_irs(spec.scenario, l_max), rng);
  return truncate_irs(full, n_irs);
}

Rng trial_rng(const ExperimentSpec& spec, int trial, Scheme scheme, int n_irs) {
  const std::uint64_t key = splitmix64(splitmix64(static_cast<std::uint64_t>(trial) + 1) ^
                                       (scheme_code(scheme) << 32) ^
                                       static_cast<std::uint64_t>(n_irs));
  return Rng::stream(spec.scenario.seed ^ 0x5eed5eed5eed5eedULL, key);
}

AoTrace run_scheme(const SystemConfig& config, const AoConfig& base, Scheme scheme,
                   const ChannelSet& channels, Rng& rng) {
  AoConfig ao = base;
  switch (scheme) {
    case Scheme::sdp: ao.algorithm = Algorithm::sdp; break;
    case Scheme::lc: ao.algorithm = Algorithm::lc; break;
    case Scheme::rps:
      ao.algorithm = Algorithm::lc;
      ao.update_phases = false;
      if (ao.init_mode != InitMode::given) ao.init_mode = InitMode::random_phases;
      break;
  }
  return run_ao(config, ao, channels, rng);
}

std::vector<double> angle_grid_deg(double step_deg) {
  std::vector<double> grid;
  const int count = static_cast<int>(std::floor(180.0 / step_deg + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) grid.push_back(-90.0 + step_deg * i);
  return grid;
}

std::vector<SweepLCell> run_sweep_l(const ExperimentSpec& spec) {
  spec.validate();
  const auto sizes = spec.irs_sizes();
  std::vector<SweepLCell> cells;
  for (Scheme s : spec.algorithms)
    for (int l : sizes) cells.push_back({s, l, std::vector<double>(spec.n_trials)});

  parallel_for(cells.size() * spec.n_trials, [&](std::size_t job) {
    SweepLCell& cell = cells[job / spec.n_trials];
    const int trial = static_cast<int>(job % spec.n_trials);
    const SystemConfig config = with_irs(spec.scenario, cell.n_irs);
    const ChannelSet ch = trial_channels(spec, trial, cell.n_irs);
    Rng rng = trial_rng(spec, trial, cell.scheme, cell.n_irs);
    const AoTrace t = run_scheme(config, spec.ao, cell.scheme, ch, rng);
    cell.harvested[trial] = objective_terms(ch, *t.phases, *t.beam, config).harvested_total;
  });
  return cells;
}

std::vector<SweepRhoCell> run_sweep_rho(const ExperimentSpec& spec) {
  spec.validate();
  const auto rhos = spec.rhos();
  const int l = spec.scenario.n_irs;
  std::vector<SweepRhoCell> cells;
  for (Scheme s : spec.algorithms)
    for (double r : rhos)
      cells.push_back({s, r, std::vector<double>(spec.n_trials), std::vector<double>(spec.n_trials)});

  const std::size_t n_schemes = spec.algorithms.size();
  parallel_for(n_schemes * spec.n_trials, [&](std::size_t job) {
    const std::size_t si = job / spec.n_trials;
    const int trial = static_cast<int>(job % spec.n_trials);
    const Scheme scheme = spec.algorithms[si];
    const ChannelSet ch = trial_channels(spec, trial, l);
    Rng rng = trial_rng(spec, trial, scheme, l);
    AoConfig ao = spec.ao;
    for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
      const SystemConfig config = with_rho(spec.scenario, rhos[ri]);
      const AoTrace t = run_scheme(config, ao, scheme, ch, rng);
      const ObjectiveTerms terms = objective_terms(ch, *t.phases, *t.beam, config);
      SweepRhoCell& cell = cells[si * rhos.size() + ri];
      cell.harvested[trial] = terms.harvested_total;
      cell.beampattern_sum[trial] = terms.beampattern_sum;
      ao.init_mode = InitMode::given;
      ao.initial_phases = *t.phases;
      ao.initial_beam = *t.beam;
    }
  });
  return cells;
}

std::vector<BeampatternCell> run_beampattern(const ExperimentSpec& spec) {
  spec.validate();
  const auto grid = angle_grid_deg(spec.angle_step_deg);
  std::vector<BeampatternCell> cells;
  for (Scheme s : spec.algorithms)
    for (int l : spec.irs_sizes())
      for (double r : spec.rhos())
        cells.push_back({s, l, r, grid,
                         std::vector<std::vector<double>>(spec.n_trials, std::vector<double>(grid.size()))});

  parallel_for(cells.size() * spec.n_trials, [&](std::size_t job) {
    BeampatternCell& cell = cells[job / spec.n_trials];
    const int trial = static_cast<int>(job % spec.n_trials);
    const SystemConfig config = with_rho(with_irs(spec.scenario, cell.n_irs), cell.rho);
    const ChannelSet ch = trial_channels(spec, trial, cell.n_irs);
    Rng rng = trial_rng(spec, trial, cell.scheme, cell.n_irs);
    const AoTrace t = run_scheme(config, spec.ao, cell.scheme, ch, rng);
    for (std::size_t a = 0; a < grid.size(); ++a)
      cell.gains[trial][a] =
          beampattern_gain(ch, *t.phases, *t.beam, deg_to_rad(grid[a]), config.delta);
  });
  return cells;
}

std::string cmd_convergence(const ExperimentSpec& spec) {
  spec.validate();
  struct Job {
    Scheme scheme;
    int n_irs;
    int trial;
  };
  std::vector<Job> jobs;
  for (Scheme s : spec.algorithms)
    for (int l : spec.irs_sizes())
      for (int t = 0; t < spec.n_trials; ++t) jobs.push_back({s, l, t});
  std::vector<AoTrace> traces(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const SystemConfig config = with_irs(spec.scenario, j.n_irs);
    const ChannelSet ch = trial_channels(spec, j.trial, j.n_irs);
    Rng rng = trial_rng(spec, j.trial, j.scheme, j.n_irs);
    traces[i] = run_scheme(config, spec.ao, j.scheme, ch, rng);
  });

  std::string out = provenance(spec, "convergence");
  out += "algorithm,L,trial,iteration,objective,elapsed_ms\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& j = jobs[i];
    const bool two_half_steps = j.scheme != Scheme::rps;
    for (const AoRecord& r : traces[i].records) {
      // Half-steps are numbered 0.5, 1, 1.5, ... ; whole numbers follow the
      // completion of an outer iteration.
      double iteration = r.iteration;
      if (r.step == HalfStep::beam && two_half_steps) iteration -= 0.5;
      out += fmt::format("{},{},{},{},{},{}\n", scheme_name(j.scheme), j.n_irs, j.trial,
                         format_real(iteration), format_real(r.objective),
                         spec.wall_clock ? format_real(r.elapsed_ms) : std::string());
    }
  }
  return out;
}

std::string cmd_sweep_l(const ExperimentSpec& spec) {
  const auto cells = run_sweep_l(spec);
  std::string out = provenance(spec, "sweep-l");
  out += "algorithm,L,mean_harvested_energy,std,n_trials\n";
  for (const auto& c : cells)
    out += fmt::format("{},{},{},{},{}\n", scheme_name(c.scheme), c.n_irs,
                       format_real(mean(c.harvested)), format_real(sample_std(c.harvested)),
                       c.harvested.size());
  return out;
}

std::string cmd_sweep_rho(const ExperimentSpec& spec) {
  const auto cells = run_sweep_rho(spec);
  std::string out = provenance(spec, "sweep-rho");
  out += "algorithm,rho,mean_harvested_energy,mean_beampattern_sum,std,n_trials\n";
  for (const auto& c : cells)
    out += fmt::format("{},{},{},{},{},{}\n", scheme_name(c.scheme), format_real(c.rho),
                       format_real(mean(c.harvested)), format_real(mean(c.beampattern_sum)),
                       format_real(sample_std(c.harvested)), c.harvested.size());
  return out;
}

std::string cmd_beampattern(const ExperimentSpec& spec) {
  const auto cells = run_beampattern(spec);
  std::string out = provenance(spec, "beampattern");
  out += "algorithm,L,rho,angle_deg,gain,gain_db\n";
  for (const auto& c : cells) {
    for (std::size_t a = 0; a < c.angles_deg.size(); ++a) {
      double g = 0.0;
      for (const auto& trial : c.gains) g += trial[a];
      g /= static_cast<double>(c.gains.size());
      out += fmt::format("{},{},{},{},{},{}\n", scheme_name(c.scheme), c.n_irs, format_real(c.rho),
                         format_real(c.angles_deg[a]), format_real(g),
                         format_real(10.0 * std::log10(g)));
    }
  }
  return out;
}

}  // namespace iswpt
