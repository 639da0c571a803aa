// SPDX-License-Identifier: Apache-2.0

#include "onebit/bussgang.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onebit {
namespace {

constexpr double kMinVariance = 1e-14;
constexpr double kArcsineOvershoot = 1e-12;

RVector inv_sqrt_diag(const HermitianPSD& c_y) {
  const Index n = c_y.size();
  RVector out(n);
  for (Index i = 0; i < n; ++i) {
    const double v = c_y.matrix()(i, i).real();
    if (!(v > kMinVariance)) throw Error(ErrorCode::DegenerateVariance, "diag(C_y) entry " + std::to_string(v));
    out(i) = 1.0 / std::sqrt(v);
  }
  return out;
}

double clamped_arcsin(double x) {
  if (std::abs(x) > 1.0 + kArcsineOvershoot) {
    throw Error(ErrorCode::DomainError, "normalized correlation " + std::to_string(x) + " exceeds 1");
  }
  return std::asin(std::clamp(x, -1.0, 1.0));
}

}  // namespace

HermitianPSD observation_covariance(const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n) {
  if (a.cols() != c_h.size() || a.rows() != c_n.size()) {
    throw Error(ErrorCode::DimensionMismatch, "system matrix does not match covariances");
  }
  return HermitianPSD(a * c_h.matrix() * a.adjoint() + c_n.matrix());
}

CMatrix bussgang_gain(const HermitianPSD& c_y) {
  const RVector psi = inv_sqrt_diag(c_y);
  return (std::sqrt(2.0 / std::numbers::pi) * psi).cast<Complex>().asDiagonal();
}

HermitianPSD arcsine_law(const HermitianPSD& c_y) {
  const RVector psi = inv_sqrt_diag(c_y);
  const Index n = c_y.size();
  CMatrix c_r(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Complex v = c_y.matrix()(i, j) * psi(i) * psi(j);
      const double re = i == j ? 1.0 : v.real();
      const double im = i == j ? 0.0 : v.imag();
      c_r(i, j) = Complex(clamped_arcsin(re), clamped_arcsin(im)) * (2.0 / std::numbers::pi);
    }
  return HermitianPSD(c_r);
}

BussgangLinearization linearize(const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n) {
  const HermitianPSD c_y = observation_covariance(a, c_h, c_n);
  CMatrix gain = bussgang_gain(c_y);
  CMatrix c_hr = c_h.matrix() * a.adjoint() * gain.adjoint();
  return {std::move(gain), arcsine_law(c_y), std::move(c_hr)};
}

CMatrix solve_regularized(const CMatrix& c_r, const CMatrix& rhs, bool* regularized) {
  const double cond = hermitian_condition(c_r);
  bool ridge = !(cond <= kMaxCrCondition);
  CMatrix system = c_r;
  if (ridge) {
    const double trace = c_r.diagonal().real().sum();
    system.diagonal().array() += kCrRidge * trace;
  }
  if (regularized != nullptr) *regularized = ridge;
  const Eigen::PartialPivLU<CMatrix> lu(system);
  CMatrix x = lu.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorCode::SingularMatrix, "C_r solve produced non-finite values");
  return x;
}

BussgangEstimator::BussgangEstimator(const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n)
    : lin_(linearize(a, c_h, c_n)) {
  // W = C_hr C_r^{-1} = (C_r^{-1} C_hr^H)^H since C_r is Hermitian.
  filter_ = solve_regularized(lin_.c_r.matrix(), lin_.c_hr.adjoint(), &regularized_).adjoint();
}

CVector BussgangEstimator::apply(const CVector& r) const {
  if (r.size() != filter_.cols()) throw Error(ErrorCode::DimensionMismatch, "observation length mismatch");
  return filter_ * r;
}

CVector bussgang_estimate(const QuantizedObs& r, const CMatrix& a, const HermitianPSD& c_h, const HermitianPSD& c_n) {
  return BussgangEstimator(a, c_h, c_n).estimate(r);
}

CMatrix cr_inverse_closed_form(Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
  if (m == 1) return CMatrix::Ones(1, 1);
  const double md = static_cast<double>(m);
  CMatrix inv = CMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < m; ++k) {
      const Index gap = std::abs(i - k);
      if (gap == 0) inv(i, k) += md;
      if (gap == 1) inv(i, k) += -md / 2.0;
      if (gap == m - 1) inv(i, k) += Complex(0.0, md * static_cast<double>(k - i) / (2.0 * (md - 1.0)));
    }
  return inv;
}

double bussgang_mse_multipilot(Index m, double sigma2) {
  if (m < 1 || !(sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "need M >= 1 and sigma2 > 0");
  const double md = static_cast<double>(m);
  const double s = std::sin(std::numbers::pi / (4.0 * md));
  // a^H C_r^{-1} a = 2 M^2 sin^2(pi / 4M)
  const double quad = 2.0 * md * md * s * s;
  return sigma2 * (1.0 - 2.0 / std::numbers::pi * quad);
}

double bussgang_mse_numeric(const CVector& a, double sigma2) {
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma2 must be positive");
  const HermitianPSD c_y(sigma2 * a * a.adjoint());
  const HermitianPSD c_r = arcsine_law(c_y);
  const CVector x = solve_regularized(c_r.matrix(), a);
  const double quad = a.dot(x).real();  // a^H C_r^{-1} a
  return sigma2 * (1.0 - 2.0 / std::numbers::pi * quad);
}

}  // namespace onebit
