// Primal-dual interior-point method for
//
//   max Tr(C X)  s.t.  diag(X) = b,  X >= 0          (primal)
//   min b^T y    s.t.  Z = Diag(y) - C >= 0           (dual)
//
// The iteration runs directly on complex Hermitian matrices with the HKM
// (XZ) search direction and a Mehrotra predictor-corrector. No real
// embedding is formed, so Tr(C X) and b^T y are computed in the original
// complex quantities and need no factor-2 bookkeeping; only the Schur
// complement Re(Z^-1 o X^T) is real.
//
// The problem is first reduced to unit diagonal with X = D X' D,
// D = diag(sqrt(b)), and the cost is normalized to max |C'_ij| = 1.

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "iswpt/sdp.hpp"

namespace iswpt {

namespace {

constexpr double kStepFraction = 0.98;

// Largest alpha with X + alpha dX still PSD (infinity if unbounded).
double max_step(const CMatrix& x, const CMatrix& dx) {
  Eigen::LLT<CMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  CMatrix t = llt.matrixL().solve(dx);
  t = llt.matrixL().solve(CMatrix(t.adjoint()));
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(t), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_diag(const CMatrix& z, const RVector& dy) {
  return max_step(z, CMatrix(dy.cast<Complex>().asDiagonal()));
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  // Re Tr(A B) for Hermitian A, B.
  return (a.cwiseProduct(b.transpose())).sum().real();
}

struct UnitDiagResult {
  CMatrix x;
  RVector y;
  double primal;
  double dual;
  double rel_gap;
  double residual;
  int iterations;
  bool converged;
  std::string failure;
};

UnitDiagResult solve_unit_diag(const CMatrix& c, double tol, int max_iters) {
  const Eigen::Index n = c.rows();
  const RVector ones = RVector::Ones(n);

  CMatrix x = CMatrix::Identity(n, n);
  RVector y = c.cwiseAbs().rowwise().sum() + ones;
  CMatrix z = CMatrix(y.cast<Complex>().asDiagonal()) - c;

  UnitDiagResult best{x, y, 0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0, 0, false, {}};

  for (int it = 0;; ++it) {
    const double primal = trace_product(c, x);
    const double dual = y.sum();
    const double rel_gap = (dual - primal) / std::max(1.0, std::abs(primal));
    const double residual = (x.diagonal().real() - ones).cwiseAbs().maxCoeff();
    if (rel_gap < best.rel_gap) best = {x, y, primal, dual, rel_gap, residual, it, false, {}};
    if (rel_gap <= tol && residual <= tol) {
      best = {x, y, primal, dual, rel_gap, residual, it, true, {}};
      return best;
    }
    if (it >= max_iters) {
      best.failure = fmt::format("iteration cap {} reached, relative gap {:.3e}", max_iters,
                                 best.rel_gap);
      return best;
    }

    Eigen::LLT<CMatrix> z_llt(z);
    if (z_llt.info() != Eigen::Success) {
      best.failure = "dual slack lost positive definiteness";
      return best;
    }
    const CMatrix z_inv = z_llt.solve(CMatrix::Identity(n, n));
    const RMatrix schur = z_inv.cwiseProduct(x.transpose()).real();
    Eigen::LLT<RMatrix> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      best.failure = "Schur complement not positive definite";
      return best;
    }
    const double gap = trace_product(z, x);
    const double mu = gap / static_cast<double>(n);
    const RVector z_inv_diag = z_inv.diagonal().real();

    // Predictor (affine scaling, mu = 0).
    const RVector dy_aff = schur_llt.solve(RVector(-ones));
    const CMatrix dz_aff = dy_aff.cast<Complex>().asDiagonal();
    const CMatrix dx_aff = hermitian_part(-x - z_inv * dz_aff * x);
    const double ap_aff = std::min(1.0, max_step(x, dx_aff));
    const double ad_aff = std::min(1.0, max_step_diag(z, dy_aff));
    const double gap_aff =
        trace_product(CMatrix(x + ap_aff * dx_aff), CMatrix(z + ad_aff * dz_aff));
    const double sigma = std::clamp(std::pow(gap_aff / gap, 3.0), 0.0, 1.0);

    // Corrector with centering sigma * mu and second-order term.
    const CMatrix second_order = z_inv * dz_aff * dx_aff;
    const RVector rhs = sigma * mu * z_inv_diag - ones - second_order.diagonal().real();
    const RVector dy = schur_llt.solve(rhs);
    const CMatrix dz = dy.cast<Complex>().asDiagonal();
    const CMatrix dx = hermitian_part(sigma * mu * z_inv - x - z_inv * dz * x - second_order);

    const double ap = std::min(1.0, kStepFraction * max_step(x, dx));
    const double ad = std::min(1.0, kStepFraction * max_step_diag(z, dy));
    if (!(ap > 0.0) && !(ad > 0.0)) {
      best.failure = "zero step length";
      return best;
    }
    x = hermitian_part(x + ap * dx);
    y += ad * dy;
    z = CMatrix(y.cast<Complex>().asDiagonal()) - c;
  }
}

}  // namespace

void DiagSdpProblem::validate() const {
  if (cost.rows() != cost.cols() || cost.rows() < 1)
    throw std::invalid_argument("DiagSdpProblem: cost must be square and non-empty");
  if (diag_values.size() != cost.rows())
    throw std::invalid_argument("DiagSdpProblem: diag_values size must match cost");
  if (!cost.allFinite()) throw std::invalid_argument("DiagSdpProblem: cost has non-finite entries");
  for (Eigen::Index i = 0; i < diag_values.size(); ++i)
    if (!(diag_values(i) > 0.0)) throw std::invalid_argument("DiagSdpProblem: b_i must be > 0");
  const double scale = std::max(cost.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((cost - cost.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("DiagSdpProblem: cost is not Hermitian");
}

SdpSolution solve_diag_sdp(const DiagSdpProblem& problem, double tol, int max_iters) {
  problem.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("solve_diag_sdp: tol must be > 0");

  const Eigen::Index n = problem.cost.rows();
  const RVector& b = problem.diag_values;
  const RVector sqrt_b = b.cwiseSqrt();
  const CMatrix scaled = sqrt_b.cast<Complex>().asDiagonal() * hermitian_part(problem.cost) *
                         sqrt_b.cast<Complex>().asDiagonal();
  const double scale = scaled.cwiseAbs().maxCoeff();

  SdpSolution out;
  if (scale == 0.0) {
    out.x_opt = b.cast<Complex>().asDiagonal();
    out.dual_y = RVector::Zero(n);
    out.converged = true;
    return out;
  }

  const UnitDiagResult r = solve_unit_diag(scaled / scale, tol, max_iters);
  out.x_opt = hermitian_part(sqrt_b.cast<Complex>().asDiagonal() * r.x *
                             sqrt_b.cast<Complex>().asDiagonal());
  out.dual_y = scale * r.y.cwiseQuotient(b);
  out.objective = scale * r.primal;
  out.dual_objective = scale * r.dual;
  out.duality_gap = r.rel_gap;
  out.primal_residual = r.residual;
  out.iterations = r.iterations;
  out.converged = r.converged;
  if (!r.converged) throw SdpError("solve_diag_sdp: " + r.failure, out);
  return out;
}

}  // namespace iswpt
