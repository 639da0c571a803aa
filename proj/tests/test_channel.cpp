// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "onebit/channel.hpp"
#include "onebit/gaussian.hpp"
#include "onebit/rng.hpp"

using namespace onebit;

namespace {
const double s = 1.0 / std::sqrt(2.0);
}

TEST_SUITE("channel-model") {
  TEST_CASE("quantize examples") {
    CVector y(3);
    y << Complex(1.0, 2.0), Complex(-0.3, 0.001), Complex(0.0, -0.0);
    const QuantizedObs r = quantize(y);
    CHECK(std::abs(r[0] - Complex(s, s)) < 1e-15);
    CHECK(std::abs(r[1] - Complex(-s, s)) < 1e-15);
    CHECK(std::abs(r[2] - Complex(s, s)) < 1e-15);
  }

  TEST_CASE("quantize is idempotent and the alphabet is closed") {
    Stream st(derive_key(1, {2}));
    for (int t = 0; t < 100; ++t) {
      CVector y(4);
      for (Index i = 0; i < 4; ++i) y(i) = Complex(st.normal(), st.normal());
      const QuantizedObs r = quantize(y);
      CHECK(quantize(r.values()) == r);
      CHECK_NOTHROW(QuantizedObs(r.values()));
    }
    CVector off(1);
    off << Complex(1.0, 1.0);
    CHECK_THROWS_AS(QuantizedObs{off}, Error);
  }

  TEST_CASE("pilot vectors") {
    const CVector one = pilot_vector(PilotKind::optimal(), 1);
    CHECK(one(0) == Complex(1.0, 0.0));
    const CVector four = pilot_vector(PilotKind::optimal(), 4);
    for (Index k = 0; k < 4; ++k) CHECK(std::arg(four(k)) == doctest::Approx(std::numbers::pi * k / 8.0));
    const CVector ones = pilot_vector(PilotKind::all_ones(), 3);
    CHECK(ones == CVector::Ones(3));
    for (Index m = 1; m <= 32; ++m) {
      CHECK(pilot_vector(PilotKind::optimal(), m).squaredNorm() == doctest::Approx(static_cast<double>(m)).epsilon(1e-14));
    }
  }

  TEST_CASE("explicit phases are validated") {
    CHECK_NOTHROW(PilotKind::explicit_phases({0.0, 0.3, 1.2}));
    CHECK_THROWS_AS(PilotKind::explicit_phases({0.1, 0.3}), Error);
    CHECK_THROWS_AS(PilotKind::explicit_phases({0.0, 0.3, 0.3}), Error);
    CHECK_THROWS_AS(PilotKind::explicit_phases({0.0, 0.5, 0.4}), Error);
    CHECK_THROWS_AS(PilotKind::explicit_phases({0.0, std::numbers::pi / 2}), Error);
    CHECK_THROWS_AS(PilotKind::explicit_phases({}), Error);
    CHECK_THROWS_AS((void)PilotKind::explicit_phases({0.0, 0.3}).phases(3), Error);
    CHECK(PilotKind::optimal().name() == "optimal");
    CHECK(PilotKind::all_ones().name() == "ones");
  }

  TEST_CASE("system matrix") {
    CHECK(system_matrix(CVector::Ones(1), 2) == CMatrix::Identity(2, 2));
    CVector a(2);
    a << 1.0, Complex(0.0, 1.0);
    const CMatrix col = system_matrix(a, 1);
    CHECK(col.rows() == 2);
    CHECK(col.cols() == 1);
    CHECK(col(1, 0) == Complex(0.0, 1.0));

    // (a (x) I) h = vec(h a^T)
    Stream st(9);
    CVector h(3);
    CVector b(4);
    for (Index i = 0; i < 3; ++i) h(i) = Complex(st.normal(), st.normal());
    for (Index i = 0; i < 4; ++i) b(i) = Complex(st.normal(), st.normal());
    const CMatrix outer = h * b.transpose();
    const CVector vec = Eigen::Map<const CVector>(outer.data(), outer.size());
    CHECK((system_matrix(b, 3) * h - vec).norm() < 1e-12);
  }

  TEST_CASE("noise variance from SNR") {
    CHECK(noise_var_from_snr(0.0) == 1.0);
    CHECK(noise_var_from_snr(10.0) == doctest::Approx(0.1));
    CHECK(noise_var_from_snr(std::numeric_limits<double>::infinity()) == 0.0);
  }

  TEST_CASE("config validation") {
    SystemConfig cfg;
    cfg.n = 2;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.channel_cov = HermitianPSD::identity(2);
    CHECK_NOTHROW(cfg.validate());
    cfg.m = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
  }

  TEST_CASE("noiseless scalar trials quantize the channel") {
    SystemConfig cfg;
    for (const auto& t : simulate_trials(cfg, 1000)) CHECK(t.r == quantize(t.h));
  }

  TEST_CASE("trials are deterministic across runs and thread counts") {
    SystemConfig cfg;
    cfg.n = 3;
    cfg.m = 2;
    cfg.snr_db = 5.0;
    cfg.channel_cov = random_channel_covariance(3, 4);
    cfg.seed = 123;
    const auto a = simulate_trials(cfg, 300, Exec::Serial);
    const auto b = simulate_trials(cfg, 300, Exec::Parallel);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].h == b[i].h);
      CHECK(a[i].r == b[i].r);
      CHECK(a[i].y == b[i].y);
    }
    CHECK(simulate_trial(cfg, 17).h == a[17].h);
    cfg.cov_mode = CovMode::PerTrial;
    const auto c = simulate_trials(cfg, 50, Exec::Serial);
    const auto d = simulate_trials(cfg, 50, Exec::Parallel);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i].channel_cov.matrix() == d[i].channel_cov.matrix());
    CHECK(c[0].channel_cov.matrix() != c[1].channel_cov.matrix());
  }

  TEST_CASE("channel power matches the trace") {
    for (auto mode : {CovMode::Fixed, CovMode::PerTrial}) {
      SystemConfig cfg;
      cfg.n = 4;
      cfg.channel_cov = random_channel_covariance(4, 2);
      cfg.cov_mode = mode;
      double power = 0.0;
      const auto trials = simulate_trials(cfg, 100000);
      for (const auto& t : trials) power += t.h.squaredNorm();
      CHECK(std::abs(power / 1e5 / 4.0 - 1.0) < 0.03);
    }
  }

  TEST_CASE("observation noise has the configured variance") {
    SystemConfig cfg;
    cfg.snr_db = 3.0;
    double noise = 0.0;
    const auto trials = simulate_trials(cfg, 100000);
    for (const auto& t : trials) noise += std::norm(t.y(0) - t.h(0));
    CHECK(std::abs(noise / 1e5 - noise_var_from_snr(3.0)) < 0.01);
  }

  TEST_CASE("noiseless optimal pilots produce at most 4M patterns") {
    for (Index m : {1, 2, 3, 5}) {
      SystemConfig cfg;
      cfg.m = m;
      std::set<std::uint64_t> seen;
      for (const auto& t : simulate_trials(cfg, 5000)) seen.insert(t.r.fingerprint());
      CHECK(seen.size() <= static_cast<std::size_t>(4 * m));
      CHECK(seen.size() == static_cast<std::size_t>(4 * m));
    }
  }
}
