#include <cmath>

#include "doctest.h"
#include "iswpt/config_io.hpp"
#include "iswpt/scenario.hpp"
#include "test_support.hpp"

using namespace iswpt;

TEST_CASE("steering_vector closed-form cases") {
  const CRowVector a0 = steering_vector(0.0, 4, 0.5);
  for (int l = 0; l < 4; ++l) CHECK(std::abs(a0(l) - Complex(1, 0)) < 1e-15);

  const CRowVector a1 = steering_vector(kPi / 2.0, 2, 0.5);
  CHECK(std::abs(a1(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(a1(1) - Complex(-1, 0)) < 1e-15);

  const CRowVector a2 = steering_vector(kPi / 6.0, 3, 0.5);
  CHECK(std::abs(a2(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(a2(1) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(a2(2) - Complex(-1, 0)) < 1e-15);
}

TEST_CASE("steering_vector entries are unit modulus, first entry exactly one") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = rng.uniform_phase() / 2.0;
    const CRowVector a = steering_vector(theta, 64, 0.5 + rng.uniform());
    CHECK(a(0) == Complex(1.0, 0.0));
    for (int l = 0; l < a.size(); ++l) CHECK(std::abs(std::abs(a(l)) - 1.0) < 1e-15);
  }
}

TEST_CASE("path_loss values") {
  CHECK(path_loss(0.1, 1.0, 2.5) == doctest::Approx(0.1).epsilon(1e-15));
  // -10 dB reference at 30 m, exponent 2.5; cross-checked in the log domain.
  const double direct = path_loss(db_to_linear(-10.0), 30.0, 2.5);
  const double via_log = std::exp(std::log(0.1) - 2.5 * std::log(30.0));
  CHECK(direct == doctest::Approx(via_log).epsilon(1e-13));
  CHECK(direct == doctest::Approx(2.0286e-5).epsilon(1e-4));
  CHECK(path_loss(1.0, 50.0, 3.0) == doctest::Approx(8e-6).epsilon(1e-14));
  CHECK(path_loss(0.1, 10.0, 2.0) > path_loss(0.1, 10.5, 2.0));
  CHECK_THROWS_AS(path_loss(0.1, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(path_loss(0.1, -3.0, 2.0), std::invalid_argument);
}

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  Rng s0 = Rng::stream(7, 0), s0b = Rng::stream(7, 0), s1 = Rng::stream(7, 1);
  const auto x0 = s0.next_u64();
  CHECK(x0 == s0b.next_u64());
  CHECK(x0 != s1.next_u64());
}

TEST_CASE("complex_normal has variance 1/2 per component") {
  Rng rng(5);
  const int n = 200000;
  double re2 = 0, im2 = 0, cross = 0, mean_re = 0;
  for (int i = 0; i < n; ++i) {
    const Complex z = rng.complex_normal();
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
    mean_re += z.real();
  }
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(cross / n) < 0.01);
  CHECK(std::abs(mean_re / n) < 0.01);
}

TEST_CASE("sample_channels is reproducible bit for bit") {
  const SystemConfig c = test::make_config(4, 6, 3, 2);
  const ChannelSet x = test::random_channels(c, 99);
  const ChannelSet y = test::random_channels(c, 99);
  CHECK(x.h_br == y.h_br);
  for (int k = 0; k < 3; ++k) {
    CHECK(x.h_ru[k] == y.h_ru[k]);
    CHECK(x.h_d[k] == y.h_d[k]);
  }
  const ChannelSet z = test::random_channels(c, 100);
  CHECK(x.h_br != z.h_br);
  CHECK_NOTHROW(x.check_against(c));
}

TEST_CASE("large Rician factor leaves only the LoS draw") {
  SystemConfig c = test::make_config(3, 4, 1, 1);
  c.rician_k = 1e12;
  Rng rng(3);
  const ChannelSet ch = sample_channels(c, rng);

  // Replay the documented draw order: H_br LoS entries come first.
  Rng replay(3);
  const double amp = std::sqrt(path_loss(c.pl_ref, c.dist_tx_irs, c.ple_tx_irs));
  for (int r = 0; r < c.n_irs; ++r)
    for (int col = 0; col < c.n_tx; ++col) {
      const Complex g = replay.complex_normal();
      CHECK(std::abs(ch.h_br(r, col) - amp * g) <= 1e-5 * amp * (std::abs(g) + 1.0));
    }
  const double w_los = std::sqrt(c.rician_k / (c.rician_k + 1.0));
  const double w_nlos = std::sqrt(1.0 / (c.rician_k + 1.0));
  CHECK(w_nlos / w_los <= 1e-6 * (1.0 + 1e-9));
}

TEST_CASE("channel second moments converge to the link path loss") {
  SystemConfig c = test::make_config(1, 1, 1, 1);
  Rng rng(2024);
  const int draws = 100000;
  double br = 0, ru = 0, d = 0;
  for (int i = 0; i < draws; ++i) {
    const ChannelSet ch = sample_channels(c, rng);
    br += std::norm(ch.h_br(0, 0));
    ru += std::norm(ch.h_ru[0](0));
    d += std::norm(ch.h_d[0](0));
  }
  CHECK(br / draws == doctest::Approx(path_loss(c.pl_ref, c.dist_tx_irs, c.ple_tx_irs)).epsilon(0.02));
  CHECK(ru / draws == doctest::Approx(path_loss(c.pl_ref, c.dist_irs_ehd, c.ple_irs_ehd)).epsilon(0.02));
  CHECK(d / draws == doctest::Approx(path_loss(c.pl_ref, c.dist_tx_ehd, c.ple_tx_ehd)).epsilon(0.02));
}

TEST_CASE("steering LoS mode is deterministic in its LoS part") {
  SystemConfig c = test::make_config(4, 8, 2, 1);
  c.los_mode = LosMode::steering;
  c.rician_k = 1e12;
  const ChannelSet a = test::random_channels(c, 1);
  const ChannelSet b = test::random_channels(c, 2);
  CHECK((a.h_br - b.h_br).norm() < 1e-5 * a.h_br.norm());
  // Rank one: H_br = sqrt(P) a_irs^T a_tx.
  Eigen::JacobiSVD<CMatrix> svd(a.h_br);
  CHECK(svd.singularValues()(1) < 1e-5 * svd.singularValues()(0));
}

TEST_CASE("SystemConfig validation") {
  SystemConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    SystemConfig x;
    mutate(x);
    CHECK_THROWS_AS(x.validate(), std::invalid_argument);
  };
  bad([](SystemConfig& x) { x.p0 = 0.0; });
  bad([](SystemConfig& x) { x.eta = 0.0; });
  bad([](SystemConfig& x) { x.eta = 1.5; });
  bad([](SystemConfig& x) { x.rho = -0.1; });
  bad([](SystemConfig& x) { x.delta = 0.0; });
  bad([](SystemConfig& x) { x.dist_tx_ehd = 0.0; });
  bad([](SystemConfig& x) { x.n_targets = 2; });
  bad([](SystemConfig& x) { x.target_angles[0] = 2.0; });
  bad([](SystemConfig& x) { x.n_tx = 0; });
}

TEST_CASE("config files: degrees, dB and dBm are converted on load") {
  KeyValueFile kv = KeyValueFile::parse(R"(
    # reference scenario
    n_tx = 12
    n_irs = 40
    n_ehd = 5
    p0_dbm = 30
    eta = 0.8
    rho = 0.9
    target_angles = -45, 0, 45
    pl_ref_db = -10
    rician_k_db = 6
    seed = 18446744073709551615
    los_mode = iid
  )");
  const SystemConfig c = read_system_config(kv);
  kv.require_all_used();
  CHECK(c.p0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.pl_ref == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(c.rician_k == doctest::Approx(3.9810717055349722).epsilon(1e-15));
  CHECK(c.n_targets == 3);
  CHECK(c.target_angles[0] == doctest::Approx(-kPi / 4));
  CHECK(c.target_angles[2] == doctest::Approx(kPi / 4));
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.n_irs == 40);
}

TEST_CASE("config files: malformed input is rejected") {
  CHECK_THROWS_AS(KeyValueFile::parse("n_tx 12"), std::invalid_argument);
  CHECK_THROWS_AS(KeyValueFile::parse("n_tx = 1\nn_tx = 2"), std::invalid_argument);
  {
    KeyValueFile kv = KeyValueFile::parse("eta = fast");
    CHECK_THROWS_AS(read_system_config(kv), std::invalid_argument);
  }
  {
    KeyValueFile kv = KeyValueFile::parse("rho = 0.3\nrho_db = -3");
    CHECK_THROWS_AS(read_system_config(kv), std::invalid_argument);
  }
  {
    KeyValueFile kv = KeyValueFile::parse("n_txx = 3");
    read_system_config(kv);
    CHECK_THROWS_AS(kv.require_all_used(), std::invalid_argument);
  }
  {
    KeyValueFile kv = KeyValueFile::parse("seed = -1");
    CHECK_THROWS_AS(read_system_config(kv), std::invalid_argument);
  }
}

TEST_CASE("truncate_irs keeps the leading elements") {
  const SystemConfig c = test::make_config(3, 10, 2, 1);
  const ChannelSet full = test::random_channels(c, 8);
  const ChannelSet part = truncate_irs(full, 4);
  CHECK(part.n_irs() == 4);
  CHECK(part.h_br == full.h_br.topRows(4));
  CHECK(part.h_ru[1] == full.h_ru[1].head(4));
  CHECK(part.h_d[0] == full.h_d[0]);
  CHECK_THROWS_AS(truncate_irs(full, 11), std::invalid_argument);
}
