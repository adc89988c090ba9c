#include "iswpt/lc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iswpt {

LambdaMaxResult lambda_max_estimate(const CMatrix& a, double tol, int max_iters) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("lambda_max: matrix must be square and non-empty");
  const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
  LambdaMaxResult out;
  if (scale == 0.0) return out;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("lambda_max: matrix is not Hermitian");

  const Eigen::Index n = a.rows();
  constexpr int kWindow = 50;
  CVector x = CVector::Ones(n) / std::sqrt(static_cast<double>(n));
  double window_start_residual = -1.0;

  for (int it = 1; it <= max_iters; ++it) {
    const CVector ax = a * x;
    const double rho = x.dot(ax).real();
    out.value = rho;
    out.iterations = it;
    out.residual = (ax - rho * x).norm();
    if (out.residual <= tol * scale) return out;

    if (it % kWindow == 0) {
      // Predict whether the remaining budget can reach the target.
      if (window_start_residual > 0.0) {
        const double rate = std::pow(out.residual / window_start_residual, 1.0 / kWindow);
        const double needed =
            rate < 1.0 ? std::log(tol * scale / out.residual) / std::log(rate) : std::numeric_limits<double>::infinity();
        if (needed > max_iters - it) break;
      }
      window_start_residual = out.residual;
    }

    const CVector y = ax + scale * x;
    const double ny = y.norm();
    if (ny == 0.0) break;
    x = y / ny;
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(a), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("lambda_max: dense eigensolver failed, residual " +
                             std::to_string(out.residual));
  out.value = eig.eigenvalues().maxCoeff();
  out.residual = 0.0;
  out.used_fallback = true;
  return out;
}

Beamformer sca_update_w(const CMatrix& big_h, const Beamformer& w_prev,
                        const SystemConfig& config) {
  if (big_h.rows() != w_prev.size() || big_h.cols() != w_prev.size())
    throw std::invalid_argument("sca_update_w: dimension mismatch");
  return Beamformer::project(big_h * w_prev.weights(), config.p0, w_prev);
}

double sca_minorant(const CMatrix& big_h, const Beamformer& w_hat, const Beamformer& w) {
  const CVector hw = big_h * w_hat.weights();
  return 2.0 * w.weights().dot(hw).real() - w_hat.weights().dot(hw).real();
}

MmProblem::MmProblem(CMatrix d, CVector c, PhaseProfile v)
    : d_mat(std::move(d)), c_vec(std::move(c)), v_prev(std::move(v)) {
  if (d_mat.rows() != d_mat.cols() || d_mat.rows() != c_vec.size() ||
      c_vec.size() != v_prev.size())
    throw std::invalid_argument("MmProblem: dimension mismatch");
  lambda = lambda_max(d_mat);
}

MmProblem MmProblem::from_operators(const DerivedOperators& operators,
                                    const PhaseProfile& v_prev) {
  return MmProblem(-operators.f11, operators.f12.conjugate(), v_prev);
}

MmProblem MmProblem::with_iterate(PhaseProfile v) const {
  MmProblem next = *this;
  next.v_prev = std::move(v);
  return next;
}

namespace {

double linear_term(const MmProblem& p, const PhaseProfile& v) {
  // Re(sum_l v_l conj(c_l))
  return p.c_vec.dot(v.reflection().transpose()).real();
}

CMatrix curvature_gap(const MmProblem& p) {
  return p.lambda * CMatrix::Identity(p.d_mat.rows(), p.d_mat.cols()) - p.d_mat;
}

}  // namespace

double mm_objective(const MmProblem& problem, const PhaseProfile& v) {
  const CRowVector& r = v.reflection();
  return (r * problem.d_mat * r.adjoint())(0).real() - 2.0 * linear_term(problem, v);
}

double mm_surrogate(const MmProblem& problem, const PhaseProfile& v) {
  const CRowVector& r = v.reflection();
  const CRowVector& rp = problem.v_prev.reflection();
  const CMatrix t = curvature_gap(problem);
  return problem.lambda * r.squaredNorm() - 2.0 * (r * t * rp.adjoint())(0).real() +
         (rp * t * rp.adjoint())(0).real() - 2.0 * linear_term(problem, v);
}

CVector mm_gamma(const MmProblem& problem) {
  const CVector t = curvature_gap(problem) * problem.v_prev.reflection().adjoint();
  return t.conjugate() + problem.c_vec;
}

PhaseProfile mm_update_v(const MmProblem& problem) {
  return PhaseProfile::project(mm_gamma(problem).transpose(), problem.v_prev);
}

MmResult mm_solve(MmProblem problem, int max_iters, double rel_tol) {
  double g = mm_objective(problem, problem.v_prev);
  int it = 0;
  while (it < max_iters) {
    PhaseProfile next = mm_update_v(problem);
    const double g_next = mm_objective(problem, next);
    ++it;
    problem.v_prev = std::move(next);
    const double change = std::abs(g_next - g);
    g = g_next;
    if (change <= rel_tol * std::abs(g)) break;
  }
  return {problem.v_prev, g, it};
}

}  // namespace iswpt
