// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "onebit/linalg.hpp"
#include "onebit/parallel.hpp"
#include "onebit/rng.hpp"

namespace onebit {

/// Sign pattern selecting one orthant of R^K; entries are exactly +1 or -1.
class OrthantSpec {
 public:
  OrthantSpec() = default;
  /// Throws InvalidArgument on entries other than +-1.
  explicit OrthantSpec(std::vector<int> signs);

  /// Orthant of the stacked real vector [Re r; Im r]; sign(0) := +1.
  static OrthantSpec from_complex(const CVector& r);

  [[nodiscard]] const std::vector<int>& signs() const noexcept { return signs_; }
  [[nodiscard]] Index size() const noexcept { return static_cast<Index>(signs_.size()); }
  [[nodiscard]] int operator[](Index i) const noexcept { return signs_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] OrthantSpec without(Index i) const;
  /// Stable 64-bit fingerprint, used to key integration streams.
  [[nodiscard]] std::uint64_t fingerprint() const noexcept;

 private:
  std::vector<int> signs_;
};

struct IntegrationBudget {
  static constexpr std::size_t kMinSamples = 1000;

  std::size_t sample_count = 20000;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when sample_count < kMinSamples.
  void validate() const;
  [[nodiscard]] IntegrationBudget reseeded(std::initializer_list<std::uint64_t> counters) const {
    return {sample_count, derive_key(seed, counters)};
  }
};

/// Monte-Carlo probability with its standard error (batch means).
struct ProbEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Draws `count` samples of N_C(0, cov). Sample i depends only on
/// (seed, i). A zero covariance yields zero samples.
std::vector<CVector> sample_complex_gaussian(const HermitianPSD& cov, std::size_t count, std::uint64_t seed,
                                             Exec exec = Exec::Parallel);

/// One draw of N_C(0, L L^H) given a Cholesky factor (or zero matrix).
CVector draw_complex_gaussian(const CMatrix& chol, Stream& stream);

/// Random covariance: S with U[0,1) real and imaginary parts, S^H S = V S V^H,
/// C = V diag(1 + xi) V^H with xi ~ U[0,1), scaled so tr(C) = n.
HermitianPSD random_channel_covariance(Index n, std::uint64_t seed);

namespace detail {
/// random_channel_covariance before trace normalization.
CMatrix random_covariance_unnormalized(Index n, std::uint64_t seed);
}  // namespace detail

/// P(sign(x_k) = signs_k for all k), x ~ N(mean, cov), via the Genz
/// separation-of-variables transform on the unit hypercube. Integration
/// variables are ordered by increasing marginal orthant probability.
/// Deterministic in (budget.seed, budget.sample_count) for any thread count.
ProbEstimate mvn_orthant_prob(const RVector& mean, const RMatrix& cov, const OrthantSpec& orthant,
                              const IntegrationBudget& budget, Exec exec = Exec::Parallel);

/// Result of truncated_orthant_mean. weighted_sum is p * E[x | orthant]
/// (unnormalized); the caller divides by prob.value.
struct TruncatedMean {
  RVector weighted_sum;
  RVector weighted_sum_std_error;
  ProbEstimate prob;

  [[nodiscard]] RVector mean() const { return weighted_sum / prob.value; }
};

/// Tallis-type orthant mean of x ~ N(0, cov):
///   p E[x_i] = sum_n s_n C_in N(0; 0, C_nn) P(x_{-n} in orthant_{-n} | x_n = 0).
/// The conditional probabilities use reduced_density_cov; for K = 1 the
/// empty integral is 1.
TruncatedMean truncated_orthant_mean(const RMatrix& cov, const OrthantSpec& orthant, const IntegrationBudget& budget,
                                     Exec exec = Exec::Parallel);

/// Covariance of x_{-n} given x_n, i.e. the Schur complement
/// C_{-n,-n} - C_{-n,n} C_{n,n}^{-1} C_{n,-n}.
RMatrix reduced_density_cov(const RMatrix& cov, Index n);

}  // namespace onebit
