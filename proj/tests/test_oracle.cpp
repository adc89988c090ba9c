#include <cmath>

#include "doctest.h"
#include "iswpt/oracle.hpp"
#include "test_support.hpp"

using namespace iswpt;

TEST_CASE("single-element search visits every level") {
  const SystemConfig c = test::make_config(3, 1, 2, 2);
  const ChannelSet ch = test::random_channels(c, 1);
  Rng rng(2);
  const Beamformer w = test::random_beam(3, c.p0, rng);
  SearchBudget budget;
  budget.phase_levels = 4;
  const PhaseSearchResult r = quantized_phase_search(ch, w, c, budget);
  CHECK(r.evaluations == 4);
  double best = -1.0;
  int arg = -1;
  for (int q = 0; q < 4; ++q) {
    const double j =
        composite_objective(ch, PhaseProfile::from_angles(RVector::Constant(1, -kPi + q * kPi / 2)), w, c);
    if (j > best) best = j, arg = q;
  }
  CHECK(r.objective == best);
  CHECK(std::abs(r.phases.angles()(0) - (-kPi + arg * kPi / 2)) <= 1e-12);
}

TEST_CASE("quantized single-target search is within the phase-error bound") {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    SystemConfig c = test::make_config(1, 5, 0, 1, 0.0);
    const ChannelSet ch = test::random_channels(c, 20 + trial);
    const double root = ch.h_br.col(0).cwiseAbs().sum();
    const double bound = c.p0 * root * root;
    for (int levels : {4, 8}) {
      SearchBudget budget;
      budget.phase_levels = levels;
      const PhaseSearchResult r =
          quantized_phase_search(ch, Beamformer::uniform(1, c.p0), c, budget);
      const double worst_error = kPi / levels;
      CHECK(r.objective <= bound * (1 + 1e-12));
      CHECK(r.objective >= bound * std::pow(std::cos(worst_error), 2) * (1 - 1e-12));
    }
  }
}

TEST_CASE("exhaustive 8^6 search is complete and beats random samples") {
  const SystemConfig c = test::make_config(4, 6, 2, 3);
  const ChannelSet ch = test::random_channels(c, 30);
  Rng rng(31);
  const Beamformer w = test::random_beam(4, c.p0, rng);
  const PhaseSearchResult r = quantized_phase_search(ch, w, c, SearchBudget{});
  CHECK(r.evaluations == 262144);
  CHECK(r.objective == doctest::Approx(composite_objective(ch, r.phases, w, c)).epsilon(1e-14));

  SearchBudget random;
  random.mode = SearchMode::random;
  random.max_evals = 2000;
  Rng sampler(32);
  const PhaseSearchResult s = quantized_phase_search(ch, w, c, random, &sampler);
  CHECK(s.evaluations == 2000);
  CHECK(s.objective <= r.objective);
  for (int l = 0; l < 6; ++l) {
    const double steps = (s.phases.angles()(l) + kPi) / (kPi / 4);
    CHECK(std::abs(steps - std::round(steps)) <= 1e-9);
  }
}

TEST_CASE("budget violations are rejected") {
  const SystemConfig c = test::make_config(2, 6, 1, 1);
  const ChannelSet ch = test::random_channels(c, 40);
  SearchBudget small;
  small.max_evals = 1000;
  CHECK_THROWS_AS(quantized_phase_search(ch, Beamformer::uniform(2, 1), c, small), std::invalid_argument);
  SearchBudget random;
  random.mode = SearchMode::random;
  CHECK_THROWS_AS(quantized_phase_search(ch, Beamformer::uniform(2, 1), c, random), std::invalid_argument);
  SearchBudget one;
  one.phase_levels = 1;
  CHECK_THROWS_AS(one.validate(3), std::invalid_argument);
}

TEST_CASE("exhaustive result does not depend on element order") {
  Rng rng(51);
  const Beamformer w = test::random_beam(3, 1.0, rng);
  // Steering vectors tie element index to position, so only a target-free
  // problem is symmetric under relabeling of IRS elements.
  SystemConfig e = test::make_config(3, 5, 2, 0, 1.0);
  const ChannelSet ech = test::random_channels(e, 52);
  ChannelSet perm = ech;
  const int order[5] = {3, 0, 4, 1, 2};
  for (int l = 0; l < 5; ++l) {
    perm.h_br.row(l) = ech.h_br.row(order[l]);
    for (int k = 0; k < 2; ++k) perm.h_ru[k](l) = ech.h_ru[k](order[l]);
  }
  const PhaseSearchResult a = quantized_phase_search(ech, w, e, SearchBudget{});
  const PhaseSearchResult b = quantized_phase_search(perm, w, e, SearchBudget{});
  CHECK(a.evaluations == 32768);
  CHECK(test::rel_diff(a.objective, b.objective) <= 1e-12);
  for (int l = 0; l < 5; ++l)
    CHECK(std::abs(std::polar(1.0, b.phases.angles()(l) - a.phases.angles()(order[l])) - 1.0) <= 1e-9);
}

TEST_CASE("beam search is complete and self-consistent") {
  const SystemConfig c = test::make_config(3, 4, 2, 2);
  const ChannelSet ch = test::random_channels(c, 60);
  Rng rng(61);
  const PhaseProfile v = PhaseProfile::random(4, rng);
  SearchBudget budget;
  budget.phase_levels = 16;
  const BeamSearchResult r = quantized_beam_search(ch, v, c, budget);
  CHECK(r.evaluations == 4096);
  CHECK(r.beam.modulus_error() <= 1e-12);
  CHECK(r.objective == doctest::Approx(composite_objective(ch, v, r.beam, c)).epsilon(1e-14));
  for (int trial = 0; trial < 50; ++trial)
    CHECK(composite_objective(ch, v, test::random_beam(3, c.p0, rng), c) <= r.objective * 1.05);
}

TEST_CASE("repeated exhaustive searches are identical") {
  const SystemConfig c = test::make_config(2, 5, 1, 2);
  const ChannelSet ch = test::random_channels(c, 70);
  const Beamformer w = Beamformer::uniform(2, c.p0);
  const PhaseSearchResult a = quantized_phase_search(ch, w, c, SearchBudget{});
  const PhaseSearchResult b = quantized_phase_search(ch, w, c, SearchBudget{});
  CHECK(a.objective == b.objective);
  CHECK((a.phases.angles() - b.phases.angles()).norm() == 0.0);
  CHECK(oracle_threads() >= 1);
}
