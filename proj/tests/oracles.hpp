// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the unit tests. Nothing here calls
// into the library's numeric kernels.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Maclaurin series of erf in long double; accurate to ~1e-16 for |x| <= 3.
inline double erf_series(double x) {
  const long double z = x;
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L) break;
  }
  return static_cast<double>(sum * 2.0L / std::sqrt(3.14159265358979323846264338327950288L));
}

/// P(x1 > 0, x2 > 0) for a standard bivariate normal with correlation rho.
inline double bivariate_orthant(double rho) { return 0.25 + std::asin(rho) / (2.0 * M_PI); }

/// P(x > 0) for a standard trivariate normal.
inline double trivariate_orthant(double r12, double r13, double r23) {
  return 0.125 + (std::asin(r12) + std::asin(r13) + std::asin(r23)) / (4.0 * M_PI);
}

/// Rejection-sampling mean of x ~ N(0, cov) restricted to sign(x) = signs.
/// Returns the mean and its standard error per component.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> rejection_mean(const Eigen::MatrixXd& cov,
                                                                  const std::vector<int>& signs, std::size_t draws,
                                                                  unsigned seed) {
  const Eigen::MatrixXd l = cov.llt().matrixL();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  const auto k = cov.rows();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(k);
  std::size_t kept = 0;
  Eigen::VectorXd z(k);
  for (std::size_t i = 0; i < draws; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) z(j) = nd(gen);
    const Eigen::VectorXd x = l * z;
    bool inside = true;
    for (Eigen::Index j = 0; j < k; ++j) inside = inside && (x(j) >= 0.0) == (signs[static_cast<std::size_t>(j)] > 0);
    if (!inside) continue;
    ++kept;
    sum += x;
    sumsq += x.cwiseProduct(x);
  }
  const double n = static_cast<double>(kept);
  const Eigen::VectorXd mean = sum / n;
  const Eigen::VectorXd var = sumsq / n - mean.cwiseProduct(mean);
  return {mean, (var / n).cwiseSqrt()};
}

}  // namespace oracle
