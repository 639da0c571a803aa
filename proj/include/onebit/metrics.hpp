// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "onebit/linalg.hpp"

namespace onebit {

struct MeanWithError {
  double value = 0.0;
  double std_error = 0.0;
};

/// Running sum / sum of squares. Single writer; merge() combines
/// per-thread accumulators in a caller-chosen order.
class MetricAccumulator {
 public:
  void add(double x) noexcept {
    sum_ += x;
    sumsq_ += x * x;
    ++count_;
  }
  void merge(const MetricAccumulator& other) noexcept {
    sum_ += other.sum_;
    sumsq_ += other.sumsq_;
    count_ += other.count_;
  }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] double mean() const noexcept { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
  /// Sample standard deviation / sqrt(count).
  [[nodiscard]] double std_error() const noexcept;
  [[nodiscard]] MeanWithError result() const noexcept { return {mean(), std_error()}; }

 private:
  double sum_ = 0.0;
  double sumsq_ = 0.0;
  std::size_t count_ = 0;
};

/// (true channel, estimate)
using EstimatePair = std::pair<CVector, CVector>;

/// ||h - h_hat||^2 / n for a single pair.
double normalized_squared_error(const CVector& h, const CVector& h_hat, Index n);

/// Mean of ||h - h_hat||^2 / n with its standard error. Throws EmptyInput.
MeanWithError mse_empirical(std::span<const EstimatePair> pairs, Index n);

/// Re(h^H h_hat) / (||h|| ||h_hat||). Throws ZeroVector.
double cosine_similarity(const CVector& h, const CVector& h_hat);

/// Bussgang model of the data phase r = Q(h s + n) with unit-variance s:
/// gain B and C_r from C_y = C_h + eta^2 I, and the distortion covariance
/// C_q = C_r - B C_h B^H.
struct DataLinkModel {
  CMatrix gain;
  CMatrix c_r;
  CMatrix c_q;

  static DataLinkModel from_channel(const HermitianPSD& c_h, double eta2);
};

/// g = C_q^{-1} B h_hat, i.e. g^H = h_hat^H B^H C_q^{-1} with
/// C_q = C_r - B C_h B^H. Ill-conditioned C_q is ridge-regularized like C_r.
CVector matched_filter(const CVector& h_hat, const CMatrix& gain, const CMatrix& c_r, const HermitianPSD& c_h);

/// Per-trial log2(1 + |g^H B h_hat|^2 / (|g^H B e|^2 + g^H B C_q B^H g)),
/// e = h - h_hat, with the matched filter g. Zero when g = 0.
double rate_term(const CVector& h, const CVector& h_hat, const DataLinkModel& link);

/// Monte-Carlo mean of rate_term over (h, h_hat) pairs for one link model.
MeanWithError rate_lower_bound(std::span<const EstimatePair> pairs, const DataLinkModel& link);

}  // namespace onebit
