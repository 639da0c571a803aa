// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "onebit/error.hpp"

namespace onebit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Relative tolerances used when validating covariance structure. The
/// scale is trace / n of the matrix being checked.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenTol = 1e-10;
/// Diagonal ridge (relative to trace / n) added before Cholesky.
inline constexpr double kCholeskyRidge = 1e-12;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Complex Hermitian positive-semidefinite matrix. Structure is checked
/// once at construction and the stored matrix is exactly Hermitian.
class HermitianPSD {
 public:
  /// Throws Error{NotHermitian} or Error{NotPositiveDefinite}.
  explicit HermitianPSD(const CMatrix& m);

  static HermitianPSD identity(Index n, double scale = 1.0);

  [[nodiscard]] const CMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Index size() const noexcept { return m_.rows(); }
  [[nodiscard]] double trace() const noexcept { return m_.diagonal().real().sum(); }
  [[nodiscard]] bool is_diagonal(double rel_tol = 0.0) const noexcept;
  [[nodiscard]] bool is_zero() const noexcept { return m_.isZero(0.0); }

 private:
  struct Trusted {};
  HermitianPSD(CMatrix m, Trusted) : m_(std::move(m)) {}

  CMatrix m_;
};

/// Lower-triangular L with L L^H = c + ridge * I, where
/// ridge = kCholeskyRidge * trace / n. Throws NotPositiveDefinite when a
/// pivot falls below half the ridge (i.e. the input is indefinite).
CMatrix cholesky(const HermitianPSD& c);

/// Real symmetric variant; also validates symmetry.
RMatrix cholesky(const RMatrix& c);

/// [[Re C, -Im C], [Im C, Re C]]. A vector h ~ N_C(0, C) stacked as
/// [Re h; Im h] has covariance real_stack_cov(C) / 2.
RMatrix real_stack_cov(const HermitianPSD& c);

/// [Re v; Im v]
RVector real_stack(const CVector& v);

/// Inverse of real_stack.
CVector complex_unstack(const RVector& v);

/// Gauss error function, accurate to a few ulp.
double erf(double x) noexcept;

/// Standard normal CDF and density.
double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;

/// Inverse standard normal CDF on (0, 1); +-inf at the end points.
double normal_quantile(double p) noexcept;

/// Symmetric positive-definite check for real matrices (cheap: Cholesky
/// attempt without ridge).
bool is_positive_definite(const RMatrix& c);

/// Condition number of a Hermitian matrix from its eigenvalues.
double hermitian_condition(const CMatrix& c);

}  // namespace onebit
