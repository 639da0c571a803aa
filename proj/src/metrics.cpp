// SPDX-License-Identifier: Apache-2.0

#include "onebit/metrics.hpp"

#include <cmath>

#include "onebit/bussgang.hpp"

namespace onebit {

double MetricAccumulator::std_error() const noexcept {
  if (count_ < 2) return 0.0;
  const auto n = static_cast<double>(count_);
  const double m = sum_ / n;
  const double var = std::max(0.0, (sumsq_ - n * m * m) / (n - 1.0));
  return std::sqrt(var / n);
}

double normalized_squared_error(const CVector& h, const CVector& h_hat, Index n) {
  if (h.size() != h_hat.size()) throw Error(ErrorCode::DimensionMismatch, "estimate length differs from channel");
  return (h - h_hat).squaredNorm() / static_cast<double>(n);
}

MeanWithError mse_empirical(std::span<const EstimatePair> pairs, Index n) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no estimate pairs");
  MetricAccumulator acc;
  for (const auto& [h, h_hat] : pairs) acc.add(normalized_squared_error(h, h_hat, n));
  return acc.result();
}

double cosine_similarity(const CVector& h, const CVector& h_hat) {
  const double nh = h.norm();
  const double ne = h_hat.norm();
  if (nh == 0.0 || ne == 0.0) throw Error(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  return std::clamp(h.dot(h_hat).real() / (nh * ne), -1.0, 1.0);
}

DataLinkModel DataLinkModel::from_channel(const HermitianPSD& c_h, double eta2) {
  const Index n = c_h.size();
  const HermitianPSD c_y(c_h.matrix() + eta2 * CMatrix::Identity(n, n));
  DataLinkModel link;
  link.gain = bussgang_gain(c_y);
  link.c_r = arcsine_law(c_y).matrix();
  link.c_q = link.c_r - link.gain * c_h.matrix() * link.gain.adjoint();
  return link;
}

CVector matched_filter(const CVector& h_hat, const CMatrix& gain, const CMatrix& c_r, const HermitianPSD& c_h) {
  const CMatrix c_q = c_r - gain * c_h.matrix() * gain.adjoint();
  return solve_regularized(0.5 * (c_q + c_q.adjoint()), gain * h_hat);
}

double rate_term(const CVector& h, const CVector& h_hat, const DataLinkModel& link) {
  const CVector g = solve_regularized(link.c_q, link.gain * h_hat);
  if (g.squaredNorm() == 0.0) return 0.0;
  const CVector gb = link.gain.adjoint() * g;  // (g^H B)^H
  const double signal = std::norm(gb.dot(h_hat));
  const double error = std::norm(gb.dot(h - h_hat));
  const double noise = gb.dot(link.c_q * gb).real();
  const double denom = error + noise;
  if (!(denom > 0.0)) return 0.0;
  return std::log2(1.0 + signal / denom);
}

MeanWithError rate_lower_bound(std::span<const EstimatePair> pairs, const DataLinkModel& link) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no estimate pairs");
  MetricAccumulator acc;
  for (const auto& [h, h_hat] : pairs) acc.add(rate_term(h, h_hat, link));
  return acc.result();
}

}  // namespace onebit
