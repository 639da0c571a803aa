// SPDX-License-Identifier: Apache-2.0

#include "onebit/cme.hpp"

#include <cmath>
#include <numbers>

#include "onebit/rng.hpp"

namespace onebit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// exp(-745) underflows to zero.
constexpr double kLogWeightFloor = -745.0;
constexpr double kDegenerateWeight = 1e-300;

double wrap_angle(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

// Whether noiseless pilots with phases psi can produce r from a channel at
// the given phase.
bool reproduces(const QuantizedObs& r, const std::vector<double>& psi, double theta) {
  for (Index m = 0; m < r.size(); ++m) {
    const Complex y = std::polar(1.0, theta + psi[static_cast<std::size_t>(m)]);
    const bool re = y.real() >= 0.0;
    const bool im = y.imag() >= 0.0;
    if (re != (r[m].real() > 0.0) || im != (r[m].imag() > 0.0)) return false;
  }
  return true;
}

SectorBounds finish(double low, double width, const QuantizedObs& r, const std::vector<double>& psi) {
  SectorBounds s;
  s.phi_low = wrap_angle(low);
  s.phi_high = s.phi_low + width;
  s.consistent = reproduces(r, psi, s.midpoint());
  return s;
}

// log(0.5 erfc(-x / sqrt2)) = log Phi(x) with a tail expansion.
double log_half_erfc(double z) {
  // returns log(0.5 * erfc(z))
  if (z < 20.0) return std::log(0.5 * std::erfc(z));
  // erfc(z) ~ exp(-z^2) / (z sqrt(pi)) (1 - 1/(2z^2))
  return -z * z - std::log(z * std::sqrt(kPi)) + std::log1p(-0.5 / (z * z)) - std::numbers::ln2;
}

}  // namespace

void CmeBudget::validate() const {
  if (prior_samples < kMinPriorSamples) throw Error(ErrorCode::InvalidArgument, "prior_samples must be >= 1000");
  mvn.validate();
}

Complex cme_univariate(Complex r, double sigma2, double eta2) {
  if (!(sigma2 > 0.0) || !(eta2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need sigma2 > 0, eta2 >= 0");
  if (std::isinf(eta2)) return {0.0, 0.0};
  return std::sqrt(2.0 / kPi) * sigma2 / std::sqrt(sigma2 + eta2) * r;
}

double mse_univariate_closed(double sigma2, double eta2) {
  if (!(sigma2 > 0.0) || !(eta2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need sigma2 > 0, eta2 >= 0");
  return sigma2 * (1.0 - 2.0 / kPi * sigma2 / (sigma2 + eta2));
}

double mse_unquantized_closed(double sigma2, double eta2) {
  if (!(sigma2 > 0.0) || !(eta2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need sigma2 > 0, eta2 >= 0");
  return sigma2 * (1.0 - sigma2 / (sigma2 + eta2));
}

double label_angle(Complex q) { return wrap_angle(std::atan2(q.imag(), q.real())); }

SectorBounds boundary_angles(const QuantizedObs& r, const std::vector<double>& psi) {
  const Index m = r.size();
  if (m < 1 || static_cast<Index>(psi.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "need one phase per observation");
  }
  if (psi.front() != 0.0) throw Error(ErrorCode::InvalidPhases, "first phase must be 0");
  for (std::size_t i = 1; i < psi.size(); ++i) {
    if (!(psi[i] > psi[i - 1]) || psi[i] >= kPi / 2.0) throw Error(ErrorCode::InvalidPhases, "phases must increase within [0, pi/2)");
  }

  const double first = label_angle(r[0]);
  double low = first - kPi / 4.0;
  const double high_init = first + kPi / 4.0;
  double high = high_init;
  for (Index k = 1; k < m; ++k) {
    const double shift = psi[static_cast<std::size_t>(k)];
    if (r[k] == r[k - 1]) {
      high = high_init - shift;
    } else {
      low = high_init - shift;
      break;
    }
  }
  return finish(low, high - low, r, psi);
}

SectorBounds boundary_angles_compact(const QuantizedObs& r) {
  const Index m = r.size();
  if (m < 1) throw Error(ErrorCode::EmptyInput, "empty observation");
  const double first = label_angle(r[0]);
  double sum = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double angle = label_angle(r[k]);
    sum += angle + kTwoPi * std::round((first - angle) / kTwoPi);
  }
  const double md = static_cast<double>(m);
  std::vector<double> psi(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) psi[static_cast<std::size_t>(k)] = kPi / 2.0 * static_cast<double>(k) / md;
  return finish(sum / md - kPi / 4.0, kPi / (2.0 * md), r, psi);
}

Complex cme_multipilot(const QuantizedObs& r, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  const SectorBounds s = boundary_angles_compact(r);
  const double md = static_cast<double>(r.size());
  const double magnitude = 2.0 * md * sigma / std::sqrt(kPi) * std::sin(kPi / (4.0 * md));
  return std::polar(magnitude, kPi / (4.0 * md) + s.phi_low);
}

Complex cme_sector(const SectorBounds& sector, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  const double w = sector.width();
  if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "sector width must be positive");
  const double mean_magnitude = std::sqrt(kPi) / 2.0 * sigma;
  return std::polar(mean_magnitude * 2.0 * std::sin(0.5 * w) / w, sector.midpoint());
}

double mse_multipilot_closed(Index m, double sigma2) {
  if (m < 1 || !(sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "need M >= 1 and sigma2 > 0");
  const double md = static_cast<double>(m);
  const double s = std::sin(kPi / (4.0 * md));
  return sigma2 * (1.0 - 4.0 * md * md / kPi * s * s);
}

double mse_limit(double sigma2) { return sigma2 * (1.0 - kPi / 4.0); }

EstimateResult cme_multivariate_noiseless(const QuantizedObs& r, const HermitianPSD& c_h, const CmeBudget& budget,
                                          Exec exec) {
  const Index n = c_h.size();
  if (r.size() != n) throw Error(ErrorCode::DimensionMismatch, "noiseless multivariate CME needs M = 1");
  budget.mvn.validate();
  const RMatrix stacked = 0.5 * real_stack_cov(c_h);
  if (!is_positive_definite(stacked)) {
    throw Error(ErrorCode::NotPositiveDefinite, "channel covariance is degenerate");
  }
  const OrthantSpec orthant = OrthantSpec::from_complex(r.values());
  const TruncatedMean tm = truncated_orthant_mean(stacked, orthant, budget.mvn.reseeded({r.fingerprint()}), exec);

  const double p = tm.prob.value;
  EstimateResult out;
  out.samples_used = budget.mvn.sample_count * static_cast<std::size_t>(2 * n + 1);
  if (!(p > 0.0)) {
    out.estimate = CVector::Zero(n);
    out.std_error = CVector::Zero(n);
    out.degenerate = true;
    return out;
  }
  const RVector mean = tm.weighted_sum / p;
  // Delta method for the ratio of two estimates.
  RVector se(2 * n);
  for (Index i = 0; i < 2 * n; ++i) {
    const double a = tm.weighted_sum_std_error(i) / p;
    const double b = mean(i) * tm.prob.std_error / p;
    se(i) = std::sqrt(a * a + b * b);
  }
  out.estimate = complex_unstack(mean);
  out.std_error = complex_unstack(se);
  return out;
}

ProbEstimate conditional_prob_r_given_h(const QuantizedObs& r, const CVector& h, const CMatrix& a,
                                        const HermitianPSD& c_n, const IntegrationBudget& budget) {
  if (a.cols() != h.size() || a.rows() != r.size() || c_n.size() != r.size()) {
    throw Error(ErrorCode::DimensionMismatch, "system dimensions differ");
  }
  const CVector mean = a * h;
  if (c_n.is_diagonal()) {
    double p = 1.0;
    for (Index k = 0; k < r.size(); ++k) {
      const double eta = std::sqrt(c_n.matrix()(k, k).real());
      const double parts[2][2] = {{r[k].real() > 0 ? 1.0 : -1.0, mean(k).real()},
                                  {r[k].imag() > 0 ? 1.0 : -1.0, mean(k).imag()}};
      for (const auto& part : parts) {
        const double s = part[0];
        const double mu = part[1];
        if (eta == 0.0) {
          const bool hit = s > 0 ? mu >= 0.0 : mu < 0.0;
          p *= hit ? 1.0 : 0.0;
        } else {
          p *= 0.5 * std::erfc(-s * mu / eta);
        }
      }
    }
    return {p, 0.0};
  }
  return mvn_orthant_prob(real_stack(mean), 0.5 * real_stack_cov(c_n), OrthantSpec::from_complex(r.values()), budget,
                          Exec::Serial);
}

NumericCme::NumericCme(CMatrix a, HermitianPSD c_h, HermitianPSD c_n, CmeBudget budget, Exec exec)
    : a_(std::move(a)), c_h_(std::move(c_h)), c_n_(std::move(c_n)), budget_(budget), exec_(exec) {
  budget_.validate();
  if (a_.cols() != c_h_.size() || a_.rows() != c_n_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "system matrix does not match covariances");
  }
  if (c_n_.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "numeric CME needs nonzero noise; use the noiseless estimators");
  }
  diagonal_noise_ = c_n_.is_diagonal();
  noise_std_ = c_n_.matrix().diagonal().real().cwiseSqrt();
  prior_ = sample_complex_gaussian(c_h_, budget_.prior_samples, derive_key(budget_.mvn.seed, {stream_tag::prior}), exec_);
  mean_.resize(prior_.size());
  for (std::size_t i = 0; i < prior_.size(); ++i) mean_[i] = a_ * prior_[i];
}

double NumericCme::log_weight_diagonal(const QuantizedObs& r, std::size_t sample) const {
  const CVector& mu = mean_[sample];
  double lw = 0.0;
  for (Index k = 0; k < r.size(); ++k) {
    const double eta = noise_std_(k);
    const double s_re = r[k].real() > 0 ? 1.0 : -1.0;
    const double s_im = r[k].imag() > 0 ? 1.0 : -1.0;
    if (eta == 0.0) {
      const bool hit = (s_re > 0 ? mu(k).real() >= 0.0 : mu(k).real() < 0.0) &&
                       (s_im > 0 ? mu(k).imag() >= 0.0 : mu(k).imag() < 0.0);
      if (!hit) return -std::numeric_limits<double>::infinity();
      continue;
    }
    lw += log_half_erfc(-s_re * mu(k).real() / eta) + log_half_erfc(-s_im * mu(k).imag() / eta);
    if (lw < kLogWeightFloor) return -std::numeric_limits<double>::infinity();
  }
  return lw;
}

EstimateResult NumericCme::estimate(const QuantizedObs& r) const {
  if (r.size() != a_.rows()) throw Error(ErrorCode::DimensionMismatch, "observation length mismatch");
  const std::size_t count = prior_.size();
  const Index n = c_h_.size();
  std::vector<double> weight(count, 0.0);
  const IntegrationBudget mvn = budget_.mvn.reseeded({r.fingerprint()});

  auto one = [&](std::int64_t i) {
    const auto idx = static_cast<std::size_t>(i);
    if (diagonal_noise_) {
      const double lw = log_weight_diagonal(r, idx);
      weight[idx] = std::isfinite(lw) ? std::exp(lw) : 0.0;
    } else {
      weight[idx] = mvn_orthant_prob(real_stack(mean_[idx]), 0.5 * real_stack_cov(c_n_),
                                     OrthantSpec::from_complex(r.values()), mvn.reseeded({idx}), Exec::Serial)
                        .value;
    }
  };
  const auto total = static_cast<std::int64_t>(count);
  if (exec_ == Exec::Serial) {
    for (std::int64_t i = 0; i < total; ++i) one(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) one(i);
  }

  EstimateResult out;
  out.samples_used = count;
  double sum_w = 0.0;
  CVector acc = CVector::Zero(n);
  for (std::size_t i = 0; i < count; ++i) {
    if (weight[i] == 0.0) continue;
    sum_w += weight[i];
    acc += weight[i] * prior_[i];
  }
  if (!(sum_w >= kDegenerateWeight)) {
    out.estimate = CVector::Zero(n);
    out.std_error = CVector::Zero(n);
    out.degenerate = true;
    return out;
  }
  out.estimate = acc / sum_w;
  RVector var_re = RVector::Zero(n);
  RVector var_im = RVector::Zero(n);
  for (std::size_t i = 0; i < count; ++i) {
    if (weight[i] == 0.0) continue;
    const CVector d = prior_[i] - out.estimate;
    const double w2 = weight[i] * weight[i];
    var_re += w2 * d.real().cwiseAbs2();
    var_im += w2 * d.imag().cwiseAbs2();
  }
  out.std_error.resize(n);
  for (Index k = 0; k < n; ++k) {
    out.std_error(k) = Complex(std::sqrt(var_re(k)) / sum_w, std::sqrt(var_im(k)) / sum_w);
  }
  return out;
}

EstimateResult cme_general_numeric(const QuantizedObs& r, const CMatrix& a, const HermitianPSD& c_h,
                                   const HermitianPSD& c_n, const CmeBudget& budget, Exec exec) {
  return NumericCme(a, c_h, c_n, budget, exec).estimate(r);
}

}  // namespace onebit
