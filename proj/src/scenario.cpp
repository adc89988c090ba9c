#include "iswpt/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace iswpt {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid SystemConfig: " + what);
}

bool all_finite(const auto& m) { return m.allFinite(); }

struct MixingWeights {
  double los;
  double nlos;
};

MixingWeights rician_weights(double k1) {
  return {std::sqrt(k1 / (k1 + 1.0)), std::sqrt(1.0 / (k1 + 1.0))};
}

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = rng.complex_normal();
  return g;
}

// Angles used by the deterministic LoS mode.
constexpr double kLosAoaIrs = -0.5235987755982988;  // -30 deg at the IRS
constexpr double kLosAodTx = 0.3490658503988659;    // 20 deg at the transmitter

double ehd_angle(int k, int n_ehd) {
  return deg_to_rad(-60.0 + 120.0 * (k + 0.5) / n_ehd);
}

}  // namespace

void SystemConfig::validate() const {
  require(n_tx >= 1, "n_tx must be positive");
  require(n_irs >= 1, "n_irs must be positive");
  require(n_ehd >= 0, "n_ehd must be non-negative");
  require(n_targets >= 0, "n_targets must be non-negative");
  require(p0 > 0.0, "p0 must be > 0");
  require(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(delta > 0.0, "delta must be > 0");
  require(static_cast<int>(target_angles.size()) == n_targets,
          "target_angles length must equal n_targets");
  for (double a : target_angles)
    require(a >= -kPi / 2.0 - 1e-12 && a <= kPi / 2.0 + 1e-12,
            "target angles must lie in [-pi/2, pi/2]");
  require(dist_tx_irs > 0.0 && dist_irs_ehd > 0.0 && dist_tx_ehd > 0.0,
          "distances must be > 0");
  require(pl_ref > 0.0, "pl_ref must be > 0");
  require(rician_k >= 0.0, "rician_k must be >= 0");
}

void ChannelSet::check_against(const SystemConfig& config) const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("ChannelSet mismatch: " + what);
  };
  if (h_br.rows() != config.n_irs || h_br.cols() != config.n_tx) fail("h_br must be L x N");
  if (static_cast<int>(h_ru.size()) != config.n_ehd) fail("h_ru count must equal K");
  if (static_cast<int>(h_d.size()) != config.n_ehd) fail("h_d count must equal K");
  if (!all_finite(h_br)) fail("h_br has non-finite entries");
  for (int k = 0; k < config.n_ehd; ++k) {
    if (h_ru[k].size() != config.n_irs) fail("h_ru rows must have length L");
    if (h_d[k].size() != config.n_tx) fail("h_d rows must have length N");
    if (!all_finite(h_ru[k]) || !all_finite(h_d[k])) fail("EHD channel has non-finite entries");
  }
}

CRowVector steering_vector(double theta, int n_elements, double delta) {
  CRowVector a(n_elements);
  const double step = 2.0 * kPi * delta * std::sin(theta);
  for (int l = 0; l < n_elements; ++l) a(l) = std::polar(1.0, step * l);
  return a;
}

double path_loss(double pl_ref, double dist, double ple) {
  if (!(dist > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
  return pl_ref * std::pow(dist, -ple);
}

ChannelSet sample_channels(const SystemConfig& config, Rng& rng) {
  config.validate();
  const int n = config.n_tx;
  const int l = config.n_irs;
  const auto mix = rician_weights(config.rician_k);
  const bool iid = config.los_mode == LosMode::iid_gaussian;

  auto link = [&](const CMatrix& los, const CMatrix& nlos, double gain) -> CMatrix {
    return std::sqrt(gain) * (mix.los * los + mix.nlos * nlos);
  };

  ChannelSet out;
  {
    CMatrix los = iid ? gaussian_matrix(l, n, rng)
                      : CMatrix(steering_vector(kLosAoaIrs, l, config.delta).transpose() *
                                steering_vector(kLosAodTx, n, config.delta));
    CMatrix nlos = gaussian_matrix(l, n, rng);
    out.h_br = link(los, nlos, path_loss(config.pl_ref, config.dist_tx_irs, config.ple_tx_irs));
  }

  const double gain_ru = path_loss(config.pl_ref, config.dist_irs_ehd, config.ple_irs_ehd);
  const double gain_d = path_loss(config.pl_ref, config.dist_tx_ehd, config.ple_tx_ehd);
  out.h_ru.reserve(config.n_ehd);
  out.h_d.reserve(config.n_ehd);
  for (int k = 0; k < config.n_ehd; ++k) {
    const double psi = ehd_angle(k, config.n_ehd);
    CMatrix ru_los = iid ? gaussian_matrix(1, l, rng) : CMatrix(steering_vector(psi, l, config.delta));
    CMatrix ru_nlos = gaussian_matrix(1, l, rng);
    CMatrix d_los = iid ? gaussian_matrix(1, n, rng) : CMatrix(steering_vector(psi, n, config.delta));
    CMatrix d_nlos = gaussian_matrix(1, n, rng);
    out.h_ru.emplace_back(link(ru_los, ru_nlos, gain_ru).row(0));
    out.h_d.emplace_back(link(d_los, d_nlos, gain_d).row(0));
  }
  return out;
}

ChannelSet truncate_irs(const ChannelSet& channels, int n_irs) {
  if (n_irs < 1 || n_irs > channels.n_irs())
    throw std::invalid_argument("truncate_irs: n_irs out of range");
  ChannelSet out;
  out.h_br = channels.h_br.topRows(n_irs);
  out.h_d = channels.h_d;
  out.h_ru.reserve(channels.h_ru.size());
  for (const auto& row : channels.h_ru) out.h_ru.emplace_back(row.head(n_irs));
  return out;
}

}  // namespace iswpt
