#include <cmath>
#include <stdexcept>

#include "iswpt/sdp.hpp"

namespace iswpt {

namespace {

// Candidate directions for rank-one recovery: the principal eigenvector,
// then n_rand draws x = U Lambda^{1/2} r with r ~ CN(0, I).
class CandidateGenerator {
 public:
  CandidateGenerator(const CMatrix& x_opt, Rng& rng) : rng_(rng) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(x_opt));
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("rank-one extraction: eigendecomposition failed");
    const RVector lambda = eig.eigenvalues().cwiseMax(0.0);
    principal_ = eig.eigenvectors().col(x_opt.rows() - 1);
    factor_ = eig.eigenvectors() * lambda.cwiseSqrt().cast<Complex>().asDiagonal();
  }

  const CVector& principal() const { return principal_; }

  CVector draw() {
    CVector r(factor_.cols());
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = rng_.complex_normal();
    return factor_ * r;
  }

 private:
  Rng& rng_;
  CVector principal_;
  CMatrix factor_;
};

double quadratic_form(const CMatrix& a, const CVector& x) { return x.dot(a * x).real(); }

double lifted_score(const CMatrix& big_f, const PhaseProfile& phases) {
  const CRowVector lv = phases.lifted();
  return (lv * big_f * lv.adjoint())(0).real();
}

PhaseProfile phases_from_lifted(const CVector& u, const CMatrix& big_f) {
  const Eigen::Index l = u.size() - 1;
  // V ~ v~^H v~, so the row candidate is u^H.
  CRowVector lifted_row = u.adjoint();
  const Complex last = lifted_row(l);
  if (std::abs(last) >= 1e-9) {
    lifted_row *= std::conj(last) / std::abs(last);
    return PhaseProfile::project(lifted_row.head(l));
  }
  // No usable reference entry: choose the global rotation of v that
  // maximizes the coupling term 2 Re(v f12).
  const PhaseProfile raw = PhaseProfile::project(lifted_row.head(l));
  const Complex coupling = (raw.reflection() * big_f.topRightCorner(l, 1))(0);
  if (std::abs(coupling) == 0.0) return raw;
  const double rotation = -std::arg(coupling);
  return PhaseProfile::from_angles(raw.angles().array() + rotation);
}

}  // namespace

Beamformer extract_beamformer(const CMatrix& x_opt, const CMatrix& score,
                              const SystemConfig& config, int n_rand, Rng& rng) {
  if (x_opt.rows() != config.n_tx || x_opt.cols() != config.n_tx || score.rows() != config.n_tx)
    throw std::invalid_argument("extract_beamformer: dimension mismatch");
  if (n_rand < 0) throw std::invalid_argument("extract_beamformer: n_rand must be >= 0");
  CandidateGenerator gen(x_opt, rng);
  Beamformer best = Beamformer::project(gen.principal(), config.p0);
  double best_score = quadratic_form(score, best.weights());
  for (int i = 0; i < n_rand; ++i) {
    Beamformer cand = Beamformer::project(gen.draw(), config.p0);
    const double s = quadratic_form(score, cand.weights());
    if (s > best_score) {
      best_score = s;
      best = std::move(cand);
    }
  }
  return best;
}

PhaseProfile extract_phases(const CMatrix& x_opt, const CMatrix& big_f, int n_rand, Rng& rng) {
  if (x_opt.rows() < 2 || x_opt.rows() != x_opt.cols() || big_f.rows() != x_opt.rows())
    throw std::invalid_argument("extract_phases: dimension mismatch");
  if (n_rand < 0) throw std::invalid_argument("extract_phases: n_rand must be >= 0");
  CandidateGenerator gen(x_opt, rng);
  PhaseProfile best = phases_from_lifted(gen.principal(), big_f);
  double best_score = lifted_score(big_f, best);
  for (int i = 0; i < n_rand; ++i) {
    PhaseProfile cand = phases_from_lifted(gen.draw(), big_f);
    const double s = lifted_score(big_f, cand);
    if (s > best_score) {
      best_score = s;
      best = std::move(cand);
    }
  }
  return best;
}

BeamSdpResult sdp_update_w(const DerivedOperators& operators, const SystemConfig& config,
                           Rng& rng, double tol, int n_rand) {
  DiagSdpProblem problem{operators.big_h,
                         RVector::Constant(config.n_tx, config.p0 / config.n_tx)};
  SdpSolution sol = solve_diag_sdp(problem, tol);
  Beamformer beam = extract_beamformer(sol.x_opt, operators.big_h, config, n_rand, rng);
  const double feasible = quadratic_form(operators.big_h, beam.weights());
  return {std::move(beam), sol.dual_objective, feasible, std::move(sol)};
}

PhaseSdpResult sdp_update_v(const DerivedOperators& operators, Rng& rng, double tol,
                            int n_rand) {
  const Eigen::Index n = operators.big_f.rows();
  DiagSdpProblem problem{operators.big_f, RVector::Ones(n)};
  SdpSolution sol = solve_diag_sdp(problem, tol);
  PhaseProfile phases = extract_phases(sol.x_opt, operators.big_f, n_rand, rng);
  const double feasible = lifted_score(operators.big_f, phases) + operators.energy_offset;
  return {std::move(phases), sol.dual_objective + operators.energy_offset, feasible,
          std::move(sol)};
}

}  // namespace iswpt
