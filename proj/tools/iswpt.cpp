// Experiment runner: each subcommand reads an experiment spec, runs the
// Monte-Carlo study and writes one CSV. Failures exit nonzero with a single
// JSON object on stderr.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iswpt/experiment.hpp"
#include "iswpt/validation.hpp"

namespace {

struct Options {
  std::string spec_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<std::string> algorithms;
  std::vector<int> criteria;
};

void fail(const std::string& command, const std::string& message, int code) {
  nlohmann::json j;
  j["status"] = "error";
  j["command"] = command;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  std::exit(code);
}

iswpt::ExperimentSpec prepare(const Options& o) {
  iswpt::ExperimentSpec spec = iswpt::load_experiment_spec(o.spec_path);
  if (o.seed) spec.scenario.seed = *o.seed;
  if (o.trials) spec.n_trials = *o.trials;
  if (!o.algorithms.empty()) {
    spec.algorithms.clear();
    for (const auto& a : o.algorithms) spec.algorithms.push_back(iswpt::parse_scheme(a));
  }
  if (!o.out_path.empty()) spec.output_path = o.out_path;
  spec.validate();
  return spec;
}

void emit(const std::string& csv, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(csv.data(), 1, csv.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted sensing and power transfer experiments"};
  app.set_version_flag("--version", std::string(iswpt::kVersion));
  app.require_subcommand(1);
  Options o;

  using Producer = std::string (*)(const iswpt::ExperimentSpec&);
  const std::pair<const char*, Producer> experiments[] = {
      {"convergence", &iswpt::cmd_convergence},
      {"sweep-l", &iswpt::cmd_sweep_l},
      {"sweep-rho", &iswpt::cmd_sweep_rho},
      {"beampattern", &iswpt::cmd_beampattern},
  };
  const char* help[] = {"objective per AO half-step", "mean harvested energy versus IRS size",
                        "energy and beampattern sum versus rho", "beampattern over -90..90 degrees"};

  std::vector<std::pair<CLI::App*, Producer>> subs;
  for (std::size_t i = 0; i < std::size(experiments); ++i) {
    CLI::App* sub = app.add_subcommand(experiments[i].first, help[i]);
    sub->add_option("--spec", o.spec_path, "experiment spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "override the scenario seed");
    sub->add_option("--out", o.out_path, "output CSV path (stdout when omitted or -)");
    sub->add_option("--trials", o.trials, "override n_trials")->check(CLI::PositiveNumber);
    sub->add_option("--algo", o.algorithms, "comma-separated subset of SDP,LC,RPS")->delimiter(',');
    subs.emplace_back(sub, experiments[i].second);
  }
  CLI::App* validate = app.add_subcommand("validate", "run the acceptance checks");
  validate->add_option("--only", o.criteria, "criterion numbers to run")->delimiter(',');

  std::string command = "iswpt";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail(command, e.what(), 2);
  }

  try {
    if (validate->parsed()) {
      command = "validate";
      int failed = 0;
      iswpt::run_acceptance(o.criteria, [&](const iswpt::CriterionResult& r) {
        std::cout << iswpt::format_result(r) << std::endl;
        failed += !r.passed;
      });
      return failed == 0 ? 0 : 1;
    }
    for (const auto& [sub, producer] : subs) {
      if (!sub->parsed()) continue;
      command = sub->get_name();
      const iswpt::ExperimentSpec spec = prepare(o);
      emit(producer(spec), spec.output_path);
      return 0;
    }
  } catch (const std::exception& e) {
    fail(command, e.what(), 1);
  }
  return 0;
}
