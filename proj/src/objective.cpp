#include "iswpt/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace iswpt {

namespace {

void check_dims(const ChannelSet& channels, const PhaseProfile& phases, const Beamformer& beam) {
  if (phases.size() != channels.n_irs())
    throw std::invalid_argument("dimension mismatch: phase profile length " +
                                std::to_string(phases.size()) + " vs L = " +
                                std::to_string(channels.n_irs()));
  if (beam.size() != channels.n_tx())
    throw std::invalid_argument("dimension mismatch: beamformer length " +
                                std::to_string(beam.size()) + " vs N = " +
                                std::to_string(channels.n_tx()));
}

void check_config(const ChannelSet& channels, const SystemConfig& config) {
  if (channels.n_irs() != config.n_irs || channels.n_tx() != config.n_tx ||
      channels.n_ehd() != config.n_ehd ||
      static_cast<int>(config.target_angles.size()) != config.n_targets)
    throw std::invalid_argument("dimension mismatch between channels and config");
}

double wrap_angle(double a) {
  // remainder() maps onto [-pi, pi].
  return std::remainder(a, 2.0 * kPi);
}

}  // namespace

// --- Beamformer -------------------------------------------------------------

Beamformer::Beamformer(RVector phases, double amplitude)
    : phases_(std::move(phases)), amplitude_(amplitude), w_(phases_.size()) {
  for (Eigen::Index n = 0; n < phases_.size(); ++n) {
    phases_(n) = wrap_angle(phases_(n));
    w_(n) = std::polar(amplitude_, phases_(n));
  }
}

Beamformer Beamformer::from_phases(const RVector& phases, double p0) {
  if (phases.size() < 1) throw std::invalid_argument("Beamformer: empty phase vector");
  if (!(p0 > 0.0)) throw std::invalid_argument("Beamformer: p0 must be > 0");
  return Beamformer(phases, std::sqrt(p0 / static_cast<double>(phases.size())));
}

Beamformer Beamformer::uniform(int n_tx, double p0) {
  return from_phases(RVector::Zero(n_tx), p0);
}

Beamformer Beamformer::project(const CVector& candidate, double p0, const Beamformer& fallback) {
  if (fallback.size() != candidate.size())
    throw std::invalid_argument("Beamformer::project: fallback size mismatch");
  RVector phases(candidate.size());
  for (Eigen::Index n = 0; n < candidate.size(); ++n)
    phases(n) = std::abs(candidate(n)) > 0.0 ? std::arg(candidate(n)) : fallback.phases()(n);
  return from_phases(phases, p0);
}

Beamformer Beamformer::project(const CVector& candidate, double p0) {
  return project(candidate, p0, uniform(static_cast<int>(candidate.size()), p0));
}

double Beamformer::modulus_error() const {
  double err = 0.0;
  for (Eigen::Index n = 0; n < w_.size(); ++n)
    err = std::max(err, std::abs(std::abs(w_(n)) - amplitude_));
  return err;
}

// --- PhaseProfile -------------------------------------------------------------

PhaseProfile::PhaseProfile(RVector alpha) : alpha_(std::move(alpha)), v_(alpha_.size()) {
  for (Eigen::Index l = 0; l < alpha_.size(); ++l) {
    alpha_(l) = wrap_angle(alpha_(l));
    v_(l) = std::polar(1.0, alpha_(l));
  }
}

PhaseProfile PhaseProfile::from_angles(const RVector& alpha) {
  if (alpha.size() < 1) throw std::invalid_argument("PhaseProfile: empty angle vector");
  return PhaseProfile(alpha);
}

PhaseProfile PhaseProfile::zeros(int n_irs) { return from_angles(RVector::Zero(n_irs)); }

PhaseProfile PhaseProfile::random(int n_irs, Rng& rng) {
  RVector alpha(n_irs);
  for (int l = 0; l < n_irs; ++l) alpha(l) = rng.uniform_phase();
  return from_angles(alpha);
}

PhaseProfile PhaseProfile::project(const CRowVector& candidate, const PhaseProfile& fallback) {
  if (fallback.size() != candidate.size())
    throw std::invalid_argument("PhaseProfile::project: fallback size mismatch");
  RVector alpha(candidate.size());
  for (Eigen::Index l = 0; l < candidate.size(); ++l)
    alpha(l) = std::abs(candidate(l)) > 0.0 ? std::arg(candidate(l)) : fallback.angles()(l);
  return from_angles(alpha);
}

PhaseProfile PhaseProfile::project(const CRowVector& candidate) {
  return project(candidate, zeros(static_cast<int>(candidate.size())));
}

CRowVector PhaseProfile::lifted() const {
  CRowVector out(v_.size() + 1);
  out << v_, Complex(1.0, 0.0);
  return out;
}

double PhaseProfile::modulus_error() const {
  double err = 0.0;
  for (Eigen::Index l = 0; l < v_.size(); ++l) err = std::max(err, std::abs(std::abs(v_(l)) - 1.0));
  return err;
}

// --- metrics ------------------------------------------------------------------

CRowVector effective_ehd_channel(const ChannelSet& channels, const PhaseProfile& phases, int k) {
  if (k < 0 || k >= channels.n_ehd()) throw std::out_of_range("EHD index out of range");
  if (phases.size() != channels.n_irs())
    throw std::invalid_argument("dimension mismatch: phase profile vs L");
  return channels.h_ru[k].cwiseProduct(phases.reflection()) * channels.h_br + channels.h_d[k];
}

CRowVector effective_sensing_channel(const ChannelSet& channels, const PhaseProfile& phases,
                                     double theta, double delta) {
  if (phases.size() != channels.n_irs())
    throw std::invalid_argument("dimension mismatch: phase profile vs L");
  return steering_vector(theta, channels.n_irs(), delta).cwiseProduct(phases.reflection()) *
         channels.h_br;
}

double beampattern_gain(const ChannelSet& channels, const PhaseProfile& phases,
                        const Beamformer& beam, double theta, double delta) {
  check_dims(channels, phases, beam);
  return std::norm((effective_sensing_channel(channels, phases, theta, delta) * beam.weights())(0));
}

double harvested_energy(const ChannelSet& channels, const PhaseProfile& phases,
                        const Beamformer& beam, int k, double eta) {
  check_dims(channels, phases, beam);
  const CRowVector h = effective_ehd_channel(channels, phases, k);
  return eta * std::norm((h * beam.weights())(0));
}

ObjectiveTerms objective_terms(const ChannelSet& channels, const PhaseProfile& phases,
                               const Beamformer& beam, const SystemConfig& config) {
  check_dims(channels, phases, beam);
  check_config(channels, config);
  const CVector& w = beam.weights();
  // g = Theta H_br w, shared by every cascaded term.
  const CVector g = phases.reflection().transpose().cwiseProduct(channels.h_br * w);

  ObjectiveTerms t;
  double energy_gain = 0.0;
  for (int k = 0; k < config.n_ehd; ++k) {
    const Complex y = channels.h_ru[k].transpose().cwiseProduct(g).sum() + (channels.h_d[k] * w)(0);
    energy_gain += std::norm(y);
  }
  double sensing_gain = 0.0;
  for (double theta : config.target_angles) {
    const CRowVector a = steering_vector(theta, config.n_irs, config.delta);
    sensing_gain += std::norm(a.transpose().cwiseProduct(g).sum());
  }
  t.energy_term = config.rho * config.eta * config.p0 * energy_gain;
  t.sensing_term = (1.0 - config.rho) * sensing_gain;
  t.harvested_total = config.eta * energy_gain;
  t.beampattern_sum = sensing_gain;
  return t;
}

double composite_objective(const ChannelSet& channels, const PhaseProfile& phases,
                           const Beamformer& beam, const SystemConfig& config) {
  return objective_terms(channels, phases, beam, config).objective();
}

DerivedOperators build_operators(const ChannelSet& channels, const PhaseProfile& phases,
                                 const Beamformer& beam, const SystemConfig& config) {
  check_dims(channels, phases, beam);
  check_config(channels, config);
  const int n = config.n_tx;
  const int l = config.n_irs;
  const double energy_weight = config.rho * config.eta * config.p0;
  const double sensing_weight = 1.0 - config.rho;
  const CVector& w = beam.weights();
  const CVector hbr_w = channels.h_br * w;

  DerivedOperators op;
  op.f11 = CMatrix::Zero(l, l);
  op.f12 = CVector::Zero(l);
  op.big_h = CMatrix::Zero(n, n);

  for (int k = 0; k < config.n_ehd; ++k) {
    CRowVector ht = effective_ehd_channel(channels, phases, k);
    op.big_h.noalias() += energy_weight * ht.adjoint() * ht;
    op.h_tilde.push_back(std::move(ht));

    CVector ck = channels.h_ru[k].transpose().cwiseProduct(hbr_w);
    const Complex ak = (channels.h_d[k] * w)(0);
    op.f11.noalias() += energy_weight * ck * ck.adjoint();
    op.f12 += energy_weight * std::conj(ak) * ck;
    op.energy_offset += energy_weight * std::norm(ak);
    op.c_vecs.push_back(std::move(ck));
    op.a_scalars.push_back(ak);
  }
  for (double theta : config.target_angles) {
    CRowVector hh = effective_sensing_channel(channels, phases, theta, config.delta);
    op.big_h.noalias() += sensing_weight * hh.adjoint() * hh;
    op.h_hat.push_back(std::move(hh));

    CVector dm = steering_vector(theta, l, config.delta).transpose().cwiseProduct(hbr_w);
    op.f11.noalias() += sensing_weight * dm * dm.adjoint();
    op.d_vecs.push_back(std::move(dm));
  }
  op.f11 = hermitian_part(op.f11);
  op.big_h = hermitian_part(op.big_h);

  op.big_f = CMatrix::Zero(l + 1, l + 1);
  op.big_f.topLeftCorner(l, l) = op.f11;
  op.big_f.topRightCorner(l, 1) = op.f12;
  op.big_f.bottomLeftCorner(1, l) = op.f12.adjoint();
  return op;
}

}  // namespace iswpt
