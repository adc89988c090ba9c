#pragma once

#include <stdexcept>
#include <string>

#include "iswpt/objective.hpp"
#include "iswpt/rng.hpp"
#include "iswpt/scenario.hpp"
#include "iswpt/types.hpp"

namespace iswpt {

/// maximize Tr(C X)  subject to  X_ii = b_i,  X Hermitian PSD.
///
/// Both relaxations used by the SDP algorithm have this form: the beamformer
/// subproblem with C = H, b_i = P0/N and the phase subproblem with C = F,
/// b_i = 1.
struct DiagSdpProblem {
  CMatrix cost;
  RVector diag_values;

  /// Throws std::invalid_argument if the cost is not Hermitian (relative
  /// 1e-12), sizes disagree or some b_i <= 0.
  void validate() const;
};

struct SdpSolution {
  CMatrix x_opt;
  RVector dual_y;               // Z = Diag(y) - C is PSD
  double objective = 0.0;       // Tr(C X)
  double dual_objective = 0.0;  // b^T y, an upper bound on the optimum
  double duality_gap = 0.0;     // (b^T y - Tr(C X)) / max(1, |Tr(C X)|), normalized units
  double primal_residual = 0.0; // max_i |X_ii - b_i| / b_i
  int iterations = 0;
  bool converged = false;
};

/// Thrown when the interior-point method stops before reaching the requested
/// gap. Carries the best iterate found.
class SdpError : public std::runtime_error {
 public:
  SdpError(const std::string& what, SdpSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const SdpSolution& best() const { return best_; }

 private:
  SdpSolution best_;
};

inline constexpr double kDefaultSdpTol = 1e-7;
inline constexpr int kDefaultSdpMaxIters = 100;
inline constexpr int kDefaultRandomizations = 200;

SdpSolution solve_diag_sdp(const DiagSdpProblem& problem, double tol = kDefaultSdpTol,
                           int max_iters = kDefaultSdpMaxIters);

/// Rank-one recovery for W: the principal eigenvector plus n_rand draws
/// x ~ CN(0, X), each projected onto |w(n)| = sqrt(P0/N); the candidate with
/// the largest w^H score w wins (earliest candidate on ties).
Beamformer extract_beamformer(const CMatrix& x_opt, const CMatrix& score,
                              const SystemConfig& config, int n_rand, Rng& rng);

/// Rank-one recovery for V ~ v~^H v~ (size L+1). Each candidate row is
/// rotated so that its last entry is real positive, truncated to L entries and
/// projected to unit modulus; scored by v~ F v~^H.
PhaseProfile extract_phases(const CMatrix& x_opt, const CMatrix& big_f, int n_rand, Rng& rng);

struct BeamSdpResult {
  Beamformer beam;
  double relaxed_objective;   // dual bound, objective units
  double feasible_objective;  // w^H H w of the extracted beam
  SdpSolution sdp;
};

struct PhaseSdpResult {
  PhaseProfile phases;
  double relaxed_objective;   // dual bound + energy offset, objective units
  double feasible_objective;  // v~ F v~^H + energy offset
  SdpSolution sdp;
};

BeamSdpResult sdp_update_w(const DerivedOperators& operators, const SystemConfig& config,
                           Rng& rng, double tol = kDefaultSdpTol,
                           int n_rand = kDefaultRandomizations);

PhaseSdpResult sdp_update_v(const DerivedOperators& operators, Rng& rng,
                            double tol = kDefaultSdpTol, int n_rand = kDefaultRandomizations);

}  // namespace iswpt
