// SPDX-License-Identifier: Apache-2.0

#include "onebit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace onebit {
namespace {

template <typename Matrix>
double diag_scale(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return std::abs(m.diagonal().real().sum()) / static_cast<double>(m.rows());
}

template <typename Matrix>
Matrix cholesky_impl(const Matrix& c) {
  using Scalar = typename Matrix::Scalar;
  const Index n = c.rows();
  const double ridge = kCholeskyRidge * diag_scale(c);
  const double min_pivot = 0.5 * ridge;
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double pivot = std::real(c(j, j)) + ridge;
    for (Index k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
    if (!(pivot >= min_pivot) || pivot <= 0.0) {
      throw Error(ErrorCode::NotPositiveDefinite, "Cholesky pivot " + std::to_string(pivot) + " at index " +
                                                      std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      Scalar s = c(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * Eigen::numext::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPhases: return "InvalidPhases";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

HermitianPSD::HermitianPSD(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "covariance must be square and non-empty");
  }
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "covariance has non-finite entries");
  const double scale = diag_scale(m);
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol * std::max(scale, std::numeric_limits<double>::min())) {
    throw Error(ErrorCode::NotHermitian, "asymmetry " + std::to_string(asym));
  }
  m_ = 0.5 * (m + m.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(m_, Eigen::EigenvaluesOnly);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < -kEigenTol * scale) {
    throw Error(ErrorCode::NotPositiveDefinite, "eigenvalue " + std::to_string(lowest));
  }
}

HermitianPSD HermitianPSD::identity(Index n, double scale) {
  if (n <= 0 || !(scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "identity needs n >= 1, scale >= 0");
  return {CMatrix::Identity(n, n) * scale, Trusted{}};
}

bool HermitianPSD::is_diagonal(double rel_tol) const noexcept {
  const double tol = rel_tol * diag_scale(m_);
  for (Index j = 0; j < m_.cols(); ++j)
    for (Index i = 0; i < m_.rows(); ++i)
      if (i != j && std::abs(m_(i, j)) > tol) return false;
  return true;
}

CMatrix cholesky(const HermitianPSD& c) { return cholesky_impl(c.matrix()); }

RMatrix cholesky(const RMatrix& c) {
  if (c.rows() != c.cols()) throw Error(ErrorCode::DimensionMismatch, "covariance must be square");
  const double scale = diag_scale(c);
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > kHermitianTol * std::max(scale, std::numeric_limits<double>::min())) {
    throw Error(ErrorCode::NotHermitian, "real covariance is not symmetric");
  }
  return cholesky_impl(c);
}

RMatrix real_stack_cov(const HermitianPSD& c) {
  const Index n = c.size();
  const RMatrix re = c.matrix().real();
  const RMatrix im = c.matrix().imag();
  RMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

RVector real_stack(const CVector& v) {
  RVector out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

CVector complex_unstack(const RVector& v) {
  if (v.size() % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "stacked vector must have even length");
  const Index n = v.size() / 2;
  CVector out(n);
  for (Index i = 0; i < n; ++i) out(i) = Complex(v(i), v(n + i));
  return out;
}

double erf(double x) noexcept { return std::erf(x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) noexcept {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

bool is_positive_definite(const RMatrix& c) {
  if (c.rows() != c.cols()) return false;
  const Eigen::LLT<RMatrix> llt(c);
  return llt.info() == Eigen::Success;
}

double hermitian_condition(const CMatrix& c) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(c, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double lo = eig.eigenvalues().cwiseAbs().minCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace onebit
