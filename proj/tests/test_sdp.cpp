#include <cmath>
#include <vector>

#include "doctest.h"
#include "iswpt/oracle.hpp"
#include "iswpt/sdp.hpp"
#include "test_support.hpp"

using namespace iswpt;

namespace {

double tol_for(double value) { return 1e-6 * (1.0 + std::abs(value)); }

void check_certificate(const DiagSdpProblem& p, const SdpSolution& s, double tol) {
  CHECK(s.converged);
  CHECK(s.duality_gap <= tol);
  CHECK(s.duality_gap >= -tol);
  CHECK(s.primal_residual <= tol);
  CHECK(s.dual_objective >= s.objective - tol * std::max(1.0, std::abs(s.objective)));
  const double scale = std::max(1.0, s.x_opt.norm());
  Eigen::SelfAdjointEigenSolver<CMatrix> ex(s.x_opt);
  CHECK(ex.eigenvalues().minCoeff() >= -tol * scale);
  CMatrix z = -p.cost;
  z.diagonal() += s.dual_y.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> ez(z);
  CHECK(ez.eigenvalues().minCoeff() >= -1e-6 * std::max(1.0, p.cost.norm()));
  CHECK(std::abs((p.cost * s.x_opt).trace().real() - s.objective) <=
        1e-9 * std::max(1.0, std::abs(s.objective)));
}

}  // namespace

TEST_CASE("diagonal real cost") {
  RVector c(4);
  c << 1.5, -2.0, 0.25, 3.0;
  const DiagSdpProblem p{c.cast<Complex>().asDiagonal(), RVector::Ones(4)};
  const SdpSolution s = solve_diag_sdp(p);
  CHECK(std::abs(s.objective - c.sum()) <= tol_for(c.sum()));
  check_certificate(p, s, 1e-7);
}

TEST_CASE("all-ones cost attains the correlation bound") {
  const DiagSdpProblem p{CMatrix::Ones(3, 3), RVector::Ones(3)};
  const SdpSolution s = solve_diag_sdp(p);
  CHECK(std::abs(s.objective - 9.0) <= tol_for(9.0));
  CHECK((s.x_opt - CMatrix::Ones(3, 3)).norm() <= 1e-3);
  check_certificate(p, s, 1e-7);
}

TEST_CASE("off-diagonal 2x2 cost") {
  CMatrix c(2, 2);
  c << 0, 1, 1, 0;
  const DiagSdpProblem p{c, RVector::Ones(2)};
  const SdpSolution s = solve_diag_sdp(p);
  CHECK(std::abs(s.objective - 2.0) <= tol_for(2.0));
  CHECK((s.x_opt - CMatrix::Ones(2, 2)).norm() <= 1e-3);
}

TEST_CASE("rank-one cost matches the phase-aligned closed form") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 9;
    const CVector h = test::random_matrix(n, 1, rng);
    RVector b(n);
    for (int i = 0; i < n; ++i) b(i) = 0.2 + rng.uniform();
    const DiagSdpProblem p{h * h.adjoint(), b};
    double root = 0.0;
    for (int i = 0; i < n; ++i) root += std::abs(h(i)) * std::sqrt(b(i));
    const SdpSolution s = solve_diag_sdp(p);
    CHECK(test::rel_diff(s.objective, root * root) <= 1e-6);
    check_certificate(p, s, 1e-7);
  }
}

TEST_CASE("general 2x2 closed form") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix c = test::random_hermitian(2, rng);
    RVector b(2);
    b << 0.1 + 2 * rng.uniform(), 0.1 + 2 * rng.uniform();
    const double expected = c(0, 0).real() * b(0) + c(1, 1).real() * b(1) +
                            2.0 * std::abs(c(0, 1)) * std::sqrt(b(0) * b(1));
    const SdpSolution s = solve_diag_sdp({c, b});
    CHECK(std::abs(s.objective - expected) <= tol_for(expected));
  }
}

TEST_CASE("random instances give valid certificates and re-solving is stable") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 12;
    const DiagSdpProblem p{test::random_hermitian(n, rng), RVector::Ones(n)};
    const SdpSolution s = solve_diag_sdp(p);
    check_certificate(p, s, 1e-7);
    const SdpSolution again = solve_diag_sdp(p);
    CHECK(std::abs(again.objective - s.objective) <= 1e-7 * std::max(1.0, std::abs(s.objective)));
  }
}

TEST_CASE("badly scaled costs still converge") {
  Rng rng(44);
  for (double scale : {1e-12, 1e-6, 1e6}) {
    const CMatrix g = test::random_matrix(6, 3, rng);
    const DiagSdpProblem p{g * g.adjoint() * scale, RVector::Constant(6, 1.0 / 6)};
    const SdpSolution s = solve_diag_sdp(p);
    CHECK(s.converged);
    CHECK(s.duality_gap <= 1e-7);
  }
}

TEST_CASE("invalid problems and iteration caps") {
  CMatrix c(2, 2);
  c << 1, Complex(0, 1), Complex(0, 1), 1;
  CHECK_THROWS_AS(solve_diag_sdp({c, RVector::Ones(2)}), std::invalid_argument);
  CHECK_THROWS_AS(solve_diag_sdp({CMatrix::Identity(2, 2), RVector::Ones(3)}), std::invalid_argument);
  CHECK_THROWS_AS(solve_diag_sdp({CMatrix::Identity(2, 2), RVector::Zero(2)}), std::invalid_argument);
  CHECK_THROWS_AS(solve_diag_sdp({CMatrix::Identity(2, 2), RVector::Ones(2)}, 0.0), std::invalid_argument);

  Rng rng(45);
  const DiagSdpProblem p{test::random_hermitian(8, rng), RVector::Ones(8)};
  try {
    solve_diag_sdp(p, 1e-7, 1);
    FAIL("expected SdpError");
  } catch (const SdpError& e) {
    CHECK(e.best().iterations == 1);
    CHECK(!e.best().converged);
    CHECK(e.best().x_opt.rows() == 8);
  }
}

TEST_CASE("extract_beamformer recovers rank-one constant-modulus inputs") {
  Rng rng(50);
  SystemConfig c = test::make_config(5, 4, 1, 1);
  const Beamformer u = test::random_beam(5, c.p0, rng);
  const CMatrix x = u.covariance();
  const Beamformer w = extract_beamformer(x, x, c, 0, rng);
  CHECK(w.modulus_error() <= 1e-12);
  const CVector a = test::align_global_phase(w.weights());
  const CVector b = test::align_global_phase(u.weights());
  CHECK((a - b).norm() <= 1e-9);
  const double before = u.weights().dot(x * u.weights()).real();
  const double after = w.weights().dot(x * w.weights()).real();
  CHECK(test::rel_diff(before, after) <= 1e-10);
}

TEST_CASE("extract_beamformer from the identity is seeded-deterministic and feasible") {
  SystemConfig c = test::make_config(6, 4, 1, 1);
  Rng r1(9), r2(9);
  const CMatrix x = CMatrix::Identity(6, 6) * (c.p0 / 6);
  Rng score_rng(3);
  const CMatrix score = test::random_hermitian(6, score_rng);
  const Beamformer a = extract_beamformer(x, score, c, 50, r1);
  const Beamformer b = extract_beamformer(x, score, c, 50, r2);
  CHECK(a.modulus_error() <= 1e-12);
  CHECK((a.weights() - b.weights()).norm() == 0.0);
}

TEST_CASE("more randomizations never score worse than the eigenvector alone") {
  Rng rng(51);
  SystemConfig c = test::make_config(6, 4, 1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix g = test::random_matrix(6, 3, rng);
    const CMatrix h = g * g.adjoint();
    const SdpSolution s = solve_diag_sdp({h, RVector::Constant(6, c.p0 / 6)});
    Rng r0(trial), r1(trial);
    const Beamformer w0 = extract_beamformer(s.x_opt, h, c, 0, r0);
    const Beamformer w1 = extract_beamformer(s.x_opt, h, c, 200, r1);
    const double j0 = w0.weights().dot(h * w0.weights()).real();
    const double j1 = w1.weights().dot(h * w1.weights()).real();
    CHECK(j1 >= j0);
  }
}

TEST_CASE("extract_phases recovers an exact rank-one generator") {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const int l = 3 + trial;
    const PhaseProfile gen = PhaseProfile::random(l, rng);
    const CRowVector lifted = gen.lifted();
    const CMatrix v = lifted.adjoint() * lifted;
    const CMatrix f = (v + v.adjoint()) * 0.5;
    // X stored as the transpose-form Gram of rows: X = v~^H v~.
    const PhaseProfile out = extract_phases(v, f, 0, rng);
    CHECK(out.modulus_error() <= 1e-12);
    CHECK((out.reflection() - gen.reflection()).norm() <= 1e-9);

    // Feeding a rotated generator gives the same result after normalization.
    const CRowVector rot = lifted * std::polar(1.0, 1.234);
    const PhaseProfile out2 = extract_phases(rot.adjoint() * rot, f, 0, rng);
    CHECK((out2.reflection() - gen.reflection()).norm() <= 1e-9);
  }
}

TEST_CASE("extract_phases with a zero last column still yields a feasible profile") {
  Rng rng(53);
  const int l = 4;
  const CMatrix g = test::random_matrix(l, 2, rng);
  CMatrix big_f = CMatrix::Zero(l + 1, l + 1);
  big_f.topLeftCorner(l, l) = g * g.adjoint();
  CMatrix x = CMatrix::Zero(l + 1, l + 1);
  const PhaseProfile gen = PhaseProfile::random(l, rng);
  x.topLeftCorner(l, l) = gen.reflection().adjoint() * gen.reflection();
  const PhaseProfile out = extract_phases(x, big_f, 20, rng);
  CHECK(out.modulus_error() <= 1e-12);
}

TEST_CASE("sdp_update_w rank-one and single-target cases") {
  Rng rng(60);
  SystemConfig c = test::make_config(6, 4, 1, 1);
  CRowVector h(6);
  for (int n = 0; n < 6; ++n) h(n) = std::polar(1.0, rng.uniform_phase());
  DerivedOperators op;
  op.big_h = h.adjoint() * h;
  const BeamSdpResult r = sdp_update_w(op, c, rng);
  CHECK(r.beam.modulus_error() <= 1e-12);
  const CVector expected = (h.adjoint() * std::sqrt(c.p0 / 6)).eval();
  CHECK((test::align_global_phase(r.beam.weights()) - test::align_global_phase(expected)).norm() <= 1e-6);
  const double optimum = c.p0 * 6;  // (sum_n |h_n| sqrt(P0/N))^2
  CHECK(test::rel_diff(r.feasible_objective, optimum) <= 1e-6);
  CHECK(r.feasible_objective <= r.relaxed_objective * (1 + 1e-7));

  // rho = 0, M = 1: phases align with conj of the effective sensing channel.
  SystemConfig s = test::make_config(5, 6, 2, 1, 0.0);
  const ChannelSet ch = test::random_channels(s, 61);
  const PhaseProfile v = PhaseProfile::random(6, rng);
  const DerivedOperators so = build_operators(ch, v, Beamformer::uniform(5, s.p0), s);
  const BeamSdpResult rs = sdp_update_w(so, s, rng);
  const CRowVector hs = effective_sensing_channel(ch, v, s.target_angles[0], s.delta);
  const Beamformer aligned = Beamformer::project(hs.adjoint(), s.p0);
  CHECK((test::align_global_phase(rs.beam.weights()) - test::align_global_phase(aligned.weights()))
            .norm() <= 1e-5);
}

TEST_CASE("sdp_update_w randomization quality on random N = 4 instances") {
  Rng rng(62);
  std::vector<double> ratios;
  for (int trial = 0; trial < 100; ++trial) {
    SystemConfig c = test::make_config(4, 6, 2, 2, rng.uniform());
    const ChannelSet ch = test::random_channels(c, 1000 + trial);
    const DerivedOperators op =
        build_operators(ch, PhaseProfile::random(6, rng), Beamformer::uniform(4, c.p0), c);
    const BeamSdpResult r = sdp_update_w(op, c, rng);
    CHECK(r.feasible_objective <= r.relaxed_objective * (1 + 1e-7));
    ratios.push_back(r.feasible_objective / r.relaxed_objective);
  }
  CHECK(test::median(ratios) >= 0.95);
}

TEST_CASE("sdp_update_v rank-one, homogeneous and oracle cases") {
  Rng rng(70);
  {
    const PhaseProfile gen = PhaseProfile::random(5, rng);
    const CRowVector lv = gen.lifted();
    DerivedOperators op;
    op.big_f = lv.adjoint() * lv;
    const PhaseSdpResult r = sdp_update_v(op, rng);
    CHECK(r.phases.modulus_error() <= 1e-12);
    CHECK((r.phases.reflection() - gen.reflection()).norm() <= 1e-5);
  }
  {
    SystemConfig c = test::make_config(4, 5, 0, 3);
    const ChannelSet ch = test::random_channels(c, 71);
    const Beamformer w = test::random_beam(4, c.p0, rng);
    const DerivedOperators op = build_operators(ch, PhaseProfile::zeros(5), w, c);
    CHECK(op.f12.norm() == 0.0);
    const PhaseSdpResult r = sdp_update_v(op, rng);
    CHECK(r.phases.modulus_error() <= 1e-12);
    const double j = composite_objective(ch, r.phases, w, c);
    const PhaseProfile rotated = PhaseProfile::from_angles(r.phases.angles().array() + 0.9);
    CHECK(test::rel_diff(composite_objective(ch, rotated, w, c), j) <= 1e-10);
    CHECK(test::rel_diff(r.feasible_objective, j) <= 1e-10);
  }
  {
    SystemConfig c = test::make_config(4, 6, 2, 3);
    const ChannelSet ch = test::random_channels(c, 72);
    const Beamformer w = test::random_beam(4, c.p0, rng);
    const DerivedOperators op = build_operators(ch, PhaseProfile::zeros(6), w, c);
    const PhaseSdpResult r = sdp_update_v(op, rng);
    const PhaseSearchResult best = quantized_phase_search(ch, w, c, SearchBudget{});
    CHECK(best.evaluations == 262144);
    CHECK(r.feasible_objective >= 0.98 * best.objective);
    CHECK(r.feasible_objective <= r.relaxed_objective * (1 + 1e-7));
  }
}
