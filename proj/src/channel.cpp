// SPDX-License-Identifier: Apache-2.0

#include "onebit/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "onebit/gaussian.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

constexpr double kQuarterTurn = std::numbers::pi / 2.0;

bool on_alphabet(Complex z) {
  constexpr double tol = 1e-12;
  return std::abs(std::abs(z.real()) - kInvSqrt2) < tol &&
         std::abs(std::abs(z.imag()) - kInvSqrt2) < tol;
}

CMatrix factor_or_zero(const HermitianPSD& c) {
  if (c.is_zero()) return CMatrix::Zero(c.size(), c.size());
  return cholesky(c);
}

Trial make_trial(const SystemConfig& cfg, const CVector& pilot, const HermitianPSD& cov, const CMatrix& chol,
                 std::uint64_t index) {
  const double eta2 = noise_var_from_snr(cfg.snr_db);
  Stream channel_stream(derive_key(cfg.seed, {index, stream_tag::channel}));
  CVector h = draw_complex_gaussian(chol, channel_stream);

  CVector y(cfg.m * cfg.n);
  for (Index k = 0; k < cfg.m; ++k) y.segment(k * cfg.n, cfg.n) = pilot(k) * h;
  if (eta2 > 0.0) {
    Stream noise_stream(derive_key(cfg.seed, {index, stream_tag::noise}));
    const double scale = std::sqrt(eta2) * kInvSqrt2;
    for (Index i = 0; i < y.size(); ++i) {
      const double re = noise_stream.normal();
      const double im = noise_stream.normal();
      y(i) += scale * Complex(re, im);
    }
  }
  QuantizedObs r = quantize(y);
  return Trial{cov, std::move(h), std::move(y), std::move(r)};
}

}  // namespace

PilotKind PilotKind::explicit_phases(std::vector<double> phases) {
  if (phases.empty()) throw Error(ErrorCode::InvalidPhases, "explicit pilot needs at least one phase");
  if (phases.front() != 0.0) throw Error(ErrorCode::InvalidPhases, "first phase must be 0");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (!std::isfinite(phases[i]) || phases[i] < 0.0 || phases[i] >= kQuarterTurn) {
      throw Error(ErrorCode::InvalidPhases, "phases must lie in [0, pi/2)");
    }
    if (i > 0 && !(phases[i] > phases[i - 1])) {
      throw Error(ErrorCode::InvalidPhases, "phases must be strictly increasing");
    }
  }
  return PilotKind(Variant::Explicit, std::move(phases));
}

std::vector<double> PilotKind::phases(Index m) const {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "pilot length must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  switch (variant_) {
    case Variant::Optimal:
      for (Index k = 0; k < m; ++k) out[static_cast<std::size_t>(k)] = kQuarterTurn * static_cast<double>(k) / static_cast<double>(m);
      break;
    case Variant::AllOnes:
      break;
    case Variant::Explicit:
      if (static_cast<Index>(phases_.size()) != m) {
        throw Error(ErrorCode::InvalidPhases, "explicit phase count differs from pilot length");
      }
      out = phases_;
      break;
  }
  return out;
}

std::string PilotKind::name() const {
  switch (variant_) {
    case Variant::Optimal: return "optimal";
    case Variant::AllOnes: return "ones";
    case Variant::Explicit: {
      std::ostringstream os;
      os.precision(17);
      os << "explicit(";
      for (std::size_t i = 0; i < phases_.size(); ++i) os << (i ? ";" : "") << phases_[i];
      os << ")";
      return os.str();
    }
  }
  return "unknown";
}

QuantizedObs::QuantizedObs(CVector signs) : v_(std::move(signs)) {
  for (Index i = 0; i < v_.size(); ++i) {
    if (!on_alphabet(v_(i))) throw Error(ErrorCode::InvalidArgument, "entry is not a one-bit quantizer output");
    // Snap to the exact alphabet.
    v_(i) = Complex(v_(i).real() > 0 ? kInvSqrt2 : -kInvSqrt2,
                    v_(i).imag() > 0 ? kInvSqrt2 : -kInvSqrt2);
  }
}

std::uint64_t QuantizedObs::fingerprint() const noexcept {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(v_.size()));
  for (Index i = 0; i < v_.size(); ++i) {
    const std::uint64_t bits = (v_(i).real() > 0 ? 1U : 0U) | (v_(i).imag() > 0 ? 2U : 0U);
    h = mix64(h ^ (bits + 0x9e37U * static_cast<std::uint64_t>(i + 1)));
  }
  return h;
}

void SystemConfig::validate() const {
  if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "N and M must be >= 1");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw Error(ErrorCode::InvalidArgument, "SNR must be finite or +inf");
  }
  if (cov_mode == CovMode::Fixed) {
    if (channel_cov.size() != n) throw Error(ErrorCode::DimensionMismatch, "channel covariance size differs from N");
    if (std::abs(channel_cov.trace() - static_cast<double>(n)) > 1e-8 * static_cast<double>(n)) {
      throw Error(ErrorCode::InvalidArgument, "channel covariance must have trace N");
    }
  }
  (void)pilot.phases(m);
}

QuantizedObs quantize(const CVector& y) {
  CVector q(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    const double re = y(i).real() >= 0.0 ? 1.0 : -1.0;
    const double im = y(i).imag() >= 0.0 ? 1.0 : -1.0;
    q(i) = Complex(re, im) * kInvSqrt2;
  }
  return QuantizedObs(std::move(q));
}

CVector pilot_vector(const PilotKind& kind, Index m) {
  const auto phases = kind.phases(m);
  CVector a(m);
  for (Index k = 0; k < m; ++k) a(k) = std::polar(1.0, phases[static_cast<std::size_t>(k)]);
  return a;
}

CMatrix system_matrix(const CVector& a, Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  CMatrix out = CMatrix::Zero(a.size() * n, n);
  for (Index k = 0; k < a.size(); ++k) out.block(k * n, 0, n, n).diagonal().setConstant(a(k));
  return out;
}

double noise_var_from_snr(double snr_db) noexcept {
  if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

Trial simulate_trial(const SystemConfig& cfg, std::uint64_t index) {
  cfg.validate();
  const CVector a = pilot_vector(cfg.pilot, cfg.m);
  if (cfg.cov_mode == CovMode::PerTrial) {
    HermitianPSD cov = random_channel_covariance(cfg.n, derive_key(cfg.seed, {index, stream_tag::covariance}));
    const CMatrix chol = factor_or_zero(cov);
    return make_trial(cfg, a, cov, chol, index);
  }
  return make_trial(cfg, a, cfg.channel_cov, factor_or_zero(cfg.channel_cov), index);
}

std::vector<Trial> simulate_trials(const SystemConfig& cfg, std::size_t count, Exec exec) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "trial count must be positive");
  cfg.validate();
  const CVector a = pilot_vector(cfg.pilot, cfg.m);
  const CMatrix fixed_chol = cfg.cov_mode == CovMode::Fixed ? factor_or_zero(cfg.channel_cov) : CMatrix();
  std::vector<Trial> out(count);
  const auto total = static_cast<std::int64_t>(count);
  auto one = [&](std::int64_t i) {
    const auto index = static_cast<std::uint64_t>(i);
    if (cfg.cov_mode == CovMode::PerTrial) {
      HermitianPSD cov = random_channel_covariance(cfg.n, derive_key(cfg.seed, {index, stream_tag::covariance}));
      const CMatrix chol = factor_or_zero(cov);
      out[static_cast<std::size_t>(i)] = make_trial(cfg, a, cov, chol, index);
    } else {
      out[static_cast<std::size_t>(i)] = make_trial(cfg, a, cfg.channel_cov, fixed_chol, index);
    }
  };
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < total; ++i) one(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) one(i);
  }
  return out;
}

}  // namespace onebit
