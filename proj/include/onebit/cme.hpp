// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "onebit/channel.hpp"
#include "onebit/gaussian.hpp"
#include "onebit/linalg.hpp"
#include "onebit/parallel.hpp"

namespace onebit {

/// Angular sector [phi_low, phi_high) of the channel phase identified by a
/// noiseless pilot response. phi_low is wrapped to [0, 2pi); phi_high is
/// phi_low plus the sector width and may exceed 2pi.
struct SectorBounds {
  double phi_low = 0.0;
  double phi_high = 0.0;
  /// False when the pattern cannot occur without noise. The bounds are still
  /// usable as a mismatched estimate.
  bool consistent = true;

  [[nodiscard]] double width() const noexcept { return phi_high - phi_low; }
  [[nodiscard]] double midpoint() const noexcept { return 0.5 * (phi_low + phi_high); }
};

struct CmeBudget {
  static constexpr std::size_t kMinPriorSamples = 1000;

  /// Importance samples drawn from the prior for the numeric CME.
  std::size_t prior_samples = 20000;
  IntegrationBudget mvn{};

  void validate() const;
};

/// Estimate with Monte-Carlo diagnostics. std_error holds per-component
/// standard errors of the real and imaginary parts (zero for closed forms).
struct EstimateResult {
  CVector estimate;
  CVector std_error;
  std::size_t samples_used = 0;
  /// Importance weights summed below 1e-300; estimate falls back to 0.
  bool degenerate = false;
};

/// sqrt(2/pi) sigma^2 / sqrt(sigma^2 + eta^2) r for N = M = 1.
Complex cme_univariate(Complex r, double sigma2, double eta2);

/// sigma^2 (1 - (2/pi) sigma^2 / (sigma^2 + eta^2))
double mse_univariate_closed(double sigma2, double eta2);
/// sigma^2 (1 - sigma^2 / (sigma^2 + eta^2))
double mse_unquantized_closed(double sigma2, double eta2);

/// Angle of a quantizer label in [0, 2pi).
double label_angle(Complex q);

/// Sequential sector search over pilots with phases psi (psi_1 = 0,
/// strictly increasing, below pi/2). Starts from the quadrant of r_1; each
/// repeated label lowers phi_high to phi_high_init - psi_m; the first label
/// change sets phi_low = phi_high_init - psi_m and stops.
SectorBounds boundary_angles(const QuantizedObs& r, const std::vector<double>& psi);

/// Closed-form sector for equidistant pilots: phi_low is the circular mean
/// of the label angles (each unwrapped to the branch nearest angle(r_1))
/// minus pi/4; the width is pi/(2M).
SectorBounds boundary_angles_compact(const QuantizedObs& r);

/// CME for N = 1, noiseless, equidistant pilots:
/// (2 M sigma / sqrt(pi)) sin(pi/4M) exp(j(pi/4M + phi_low(r))).
Complex cme_multipilot(const QuantizedObs& r, double sigma);

/// CME given a phase sector for a circular Gaussian channel with
/// standard deviation sigma: E[|h|] times the mean of exp(j theta) over
/// the sector. Equals cme_multipilot for equidistant pilots.
Complex cme_sector(const SectorBounds& sector, double sigma);

/// sigma^2 (1 - (4 M^2 / pi) sin^2(pi / 4M))
double mse_multipilot_closed(Index m, double sigma2);
/// sigma^2 (1 - pi / 4)
double mse_limit(double sigma2);

/// Noiseless single-pilot CME for a correlated channel. The stacked real
/// channel has covariance real_stack_cov(C_h) / 2; its orthant mean is
/// evaluated with truncated_orthant_mean and divided by the orthant
/// probability. Integration streams are keyed by the observed pattern, so
/// the result is a deterministic function of r.
EstimateResult cme_multivariate_noiseless(const QuantizedObs& r, const HermitianPSD& c_h, const CmeBudget& budget,
                                          Exec exec = Exec::Parallel);

/// P(Q(A h + n) = r) over n ~ N_C(0, C_n). Exact erf product for diagonal
/// C_n (std_error 0), Genz integration otherwise.
ProbEstimate conditional_prob_r_given_h(const QuantizedObs& r, const CVector& h, const CMatrix& a,
                                        const HermitianPSD& c_n, const IntegrationBudget& budget);

/// General CME via self-normalized importance sampling with the prior as
/// proposal: h_i ~ N_C(0, C_h), w_i = p(r | h_i), estimate sum w h / sum w.
/// The proposal set depends only on budget.mvn.seed and is drawn once, so
/// repeated calls reuse it.
class NumericCme {
 public:
  /// Throws InvalidArgument for a zero noise covariance.
  NumericCme(CMatrix a, HermitianPSD c_h, HermitianPSD c_n, CmeBudget budget, Exec exec = Exec::Parallel);

  [[nodiscard]] EstimateResult estimate(const QuantizedObs& r) const;

 private:
  double log_weight_diagonal(const QuantizedObs& r, std::size_t sample) const;

  CMatrix a_;
  HermitianPSD c_h_;
  HermitianPSD c_n_;
  CmeBudget budget_;
  Exec exec_;
  bool diagonal_noise_ = true;
  RVector noise_std_;           // per complex entry, sqrt([C_n]_kk)
  std::vector<CVector> prior_;  // h_i
  std::vector<CVector> mean_;   // A h_i
};

EstimateResult cme_general_numeric(const QuantizedObs& r, const CMatrix& a, const HermitianPSD& c_h,
                                   const HermitianPSD& c_n, const CmeBudget& budget, Exec exec = Exec::Parallel);

}  // namespace onebit
