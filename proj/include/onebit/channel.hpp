// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "onebit/linalg.hpp"
#include "onebit/parallel.hpp"

namespace onebit {

/// Pilot sequence family. Explicit phases must lie in [0, pi/2), start at
/// 0 and be strictly increasing.
class PilotKind {
 public:
  enum class Variant { Optimal, AllOnes, Explicit };

  static PilotKind optimal() { return PilotKind(Variant::Optimal, {}); }
  static PilotKind all_ones() { return PilotKind(Variant::AllOnes, {}); }
  /// Throws InvalidPhases for non-conforming input.
  static PilotKind explicit_phases(std::vector<double> phases);

  [[nodiscard]] Variant variant() const noexcept { return variant_; }
  /// Phases psi_1..psi_m for a sequence of length m.
  [[nodiscard]] std::vector<double> phases(Index m) const;
  [[nodiscard]] std::string name() const;

 private:
  PilotKind(Variant v, std::vector<double> phases) : variant_(v), phases_(std::move(phases)) {}

  Variant variant_;
  std::vector<double> phases_;
};

/// Covariance handling across trials: one fixed C_h, or a fresh random
/// covariance per trial.
enum class CovMode { Fixed, PerTrial };

/// Complex sign pattern; every entry is (+-1 +- j)/sqrt(2).
class QuantizedObs {
 public:
  QuantizedObs() = default;
  /// Throws InvalidArgument unless every entry is on the quantizer alphabet.
  explicit QuantizedObs(CVector signs);

  [[nodiscard]] const CVector& values() const noexcept { return v_; }
  [[nodiscard]] Index size() const noexcept { return v_.size(); }
  [[nodiscard]] Complex operator[](Index i) const noexcept { return v_(i); }
  /// Stable 64-bit fingerprint of the pattern.
  [[nodiscard]] std::uint64_t fingerprint() const noexcept;
  friend bool operator==(const QuantizedObs& a, const QuantizedObs& b) { return a.v_ == b.v_; }

 private:
  CVector v_;
};

struct SystemConfig {
  Index n = 1;
  Index m = 1;
  double snr_db = std::numeric_limits<double>::infinity();
  PilotKind pilot = PilotKind::optimal();
  /// Used in Fixed mode; must be n x n with trace n.
  HermitianPSD channel_cov = HermitianPSD::identity(1);
  CovMode cov_mode = CovMode::Fixed;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument / DimensionMismatch on inconsistent fields.
  void validate() const;
};

/// One realization of the pilot phase: channel, received and quantized signal.
struct Trial {
  HermitianPSD channel_cov = HermitianPSD::identity(1);
  CVector h;
  /// Unquantized observation A h + n.
  CVector y;
  QuantizedObs r;
};

/// Elementwise (sign(Re) + j sign(Im)) / sqrt(2) with sign(0) := +1.
QuantizedObs quantize(const CVector& y);

/// Unit-modulus pilot vector exp(j psi_k), ||a||^2 = m.
CVector pilot_vector(const PilotKind& kind, Index m);

/// a (x) I_n, an (m n) x n matrix.
CMatrix system_matrix(const CVector& a, Index n);

/// 10^(-snr_db / 10); +inf dB maps to 0.
double noise_var_from_snr(double snr_db) noexcept;

/// Trial `index` of the scenario; depends only on (cfg.seed, index).
Trial simulate_trial(const SystemConfig& cfg, std::uint64_t index);

/// `count` trials in index order; identical for any thread count.
std::vector<Trial> simulate_trials(const SystemConfig& cfg, std::size_t count, Exec exec = Exec::Parallel);

}  // namespace onebit
