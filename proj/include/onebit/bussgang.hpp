// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "onebit/channel.hpp"
#include "onebit/linalg.hpp"

namespace onebit {

/// Conditioning above which C_r is ridge-regularized before solving.
inline constexpr double kMaxCrCondition = 1e12;
/// Ridge added to ill-conditioned C_r, relative to its trace.
inline constexpr double kCrRidge = 1e-12;

/// C_y = A C_h A^H + C_n.
HermitianPSD observation_covariance(const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n);

/// sqrt(2/pi) diag(C_y)^(-1/2). Throws DegenerateVariance for a diagonal
/// entry <= 1e-14.
CMatrix bussgang_gain(const HermitianPSD& c_y);

/// Covariance of Q(y) for y ~ N_C(0, C_y):
/// (2/pi) [arcsin(Psi Re(C_y) Psi) + j arcsin(Psi Im(C_y) Psi)], Psi = diag(C_y)^(-1/2).
/// Normalized entries overshooting 1 by more than 1e-12 raise DomainError;
/// smaller overshoot is clamped.
HermitianPSD arcsine_law(const HermitianPSD& c_y);

struct BussgangLinearization {
  CMatrix gain;
  HermitianPSD c_r;
  CMatrix c_hr;
};

BussgangLinearization linearize(const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n);

/// Linear MMSE estimator on the Bussgang-linearized model,
/// h_hat = C_hr C_r^{-1} r. The filter is formed once per configuration.
class BussgangEstimator {
 public:
  BussgangEstimator(const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n);

  [[nodiscard]] CVector estimate(const QuantizedObs& r) const { return apply(r.values()); }
  /// The linear map on an arbitrary vector (r need not be quantized).
  [[nodiscard]] CVector apply(const CVector& r) const;
  [[nodiscard]] const CMatrix& filter() const noexcept { return filter_; }
  [[nodiscard]] const BussgangLinearization& linearization() const noexcept { return lin_; }
  /// True when C_r had to be ridge-regularized.
  [[nodiscard]] bool regularized() const noexcept { return regularized_; }

 private:
  BussgangLinearization lin_;
  CMatrix filter_;
  bool regularized_ = false;
};

CVector bussgang_estimate(const QuantizedObs& r, const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n);

/// Solves C_r x = rhs with LU, ridge-regularizing when cond(C_r) > 1e12.
/// Sets `regularized` when the ridge was applied.
CMatrix solve_regularized(const CMatrix& c_r, const CMatrix& rhs, bool* regularized = nullptr);

/// Closed-form inverse of the noiseless optimal-pilot C_r
/// ([C_r]_{mn} = 1 - |m-n|/M + j(m-n)/M): M on the diagonal, -M/2 on the
/// first off-diagonals, jM(n-m)/(2(M-1)) in the corners. For M = 2 the two
/// off-diagonal rules hit the same entries and are summed.
CMatrix cr_inverse_closed_form(Index m);

/// sigma^2 (1 - (4 M^2 / pi) sin^2(pi / 4M)).
double bussgang_mse_multipilot(Index m, double sigma2);

/// sigma^2 (1 - (2/pi) a^H C_r^{-1} a) for N = 1 noiseless pilots `a`,
/// with C_r from the arcsine law and a general LU solve.
double bussgang_mse_numeric(const CVector& a, double sigma2);

}  // namespace onebit
