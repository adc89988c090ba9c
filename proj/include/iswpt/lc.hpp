#pragma once

#include "iswpt/objective.hpp"
#include "iswpt/scenario.hpp"
#include "iswpt/types.hpp"

namespace iswpt {

struct LambdaMaxResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // ||A x - value x|| at exit
  bool used_fallback = false;
};

/// Largest eigenvalue of a Hermitian matrix.
///
/// Shifted power iteration on A + s I (s = ||A||_inf) from the normalized
/// all-ones vector, stopping when ||A x - rho x|| <= tol * ||A||_inf. When the
/// observed contraction rate cannot reach tol within max_iters the routine
/// switches to a dense eigensolver.
LambdaMaxResult lambda_max_estimate(const CMatrix& a, double tol = 1e-10, int max_iters = 5000);

inline double lambda_max(const CMatrix& a, double tol = 1e-10) {
  return lambda_max_estimate(a, tol).value;
}

/// One SCA step: w = sqrt(P0/N) exp(j arg(H w_prev)). Entries of H w_prev
/// that are exactly zero keep w_prev's phase.
Beamformer sca_update_w(const CMatrix& big_h, const Beamformer& w_prev, const SystemConfig& config);

/// Tangent minorant 2 Re(w^H H w_hat) - w_hat^H H w_hat of w^H H w at w_hat.
double sca_minorant(const CMatrix& big_h, const Beamformer& w_hat, const Beamformer& w);

/// Unit-modulus quadratic program solved by MM:
///
///   minimize g(v) = v D v^H - 2 Re(sum_l v_l conj(c_l)),  |v_l| = 1,
///
/// with D = -F11 and c = conj(f12), so that g(v) = energy_offset - J(v).
/// v_prev is the current phase iterate (expansion point of the surrogate).
struct MmProblem {
  CMatrix d_mat;
  CVector c_vec;
  PhaseProfile v_prev;
  double lambda = 0.0;  // lambda_max(D), cached

  /// Computes lambda_max(D) once.
  MmProblem(CMatrix d, CVector c, PhaseProfile v);

  static MmProblem from_operators(const DerivedOperators& operators, const PhaseProfile& v_prev);

  MmProblem with_iterate(PhaseProfile v) const;
};

double mm_objective(const MmProblem& problem, const PhaseProfile& v);

/// Majorizer of g at v_prev:
///   lambda ||v||^2 - 2 Re(v (lambda I - D) v_prev^H) + v_prev (lambda I - D) v_prev^H
///   - 2 Re(sum_l v_l conj(c_l)).
double mm_surrogate(const MmProblem& problem, const PhaseProfile& v);

/// gamma = conj((lambda I - D) v_prev^H) + c; the surrogate is minimized by
/// v_l = exp(j arg gamma_l).
CVector mm_gamma(const MmProblem& problem);

/// One MM step. Entries with gamma_l = 0 keep v_prev's phase.
PhaseProfile mm_update_v(const MmProblem& problem);

struct MmResult {
  PhaseProfile phases;
  double objective;  // g at the returned phases
  int iterations;
};

/// Repeats mm_update_v until |delta g| < rel_tol * |g| or max_iters steps.
MmResult mm_solve(MmProblem problem, int max_iters = 50, double rel_tol = 1e-6);

}  // namespace iswpt
