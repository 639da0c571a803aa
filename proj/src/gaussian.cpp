// SPDX-License-Identifier: Apache-2.0

#include "onebit/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace onebit {
namespace {

constexpr std::size_t kBatches = 20;

// Mean and standard error of per-sample values via batch means over
// contiguous index blocks. Summation order is fixed by index.
ProbEstimate batch_mean(const std::vector<double>& values) {
  const std::size_t n = values.size();
  const std::size_t batches = std::min(kBatches, n);
  std::vector<double> means(batches, 0.0);
  double total = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * n / batches;
    const std::size_t hi = (b + 1) * n / batches;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    total += s;
    means[b] = s / static_cast<double>(hi - lo);
  }
  const double mean = total / static_cast<double>(n);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  const double se = batches > 1 ? std::sqrt(var / static_cast<double>(batches - 1) / static_cast<double>(batches)) : 0.0;
  return {std::clamp(mean, 0.0, 1.0), se};
}

// Prepared Genz integrand for P(v <= upper), v ~ N(0, L L^T).
struct GenzIntegrand {
  RMatrix chol;
  RVector upper;

  // Integrand value for one point of the (K-1)-dimensional hypercube, drawn
  // from `stream`. `y` is scratch space of length K.
  double operator()(Stream& stream, std::vector<double>& y) const {
    const Index k = upper.size();
    double f = 1.0;
    for (Index i = 0; i < k; ++i) {
      double shift = 0.0;
      for (Index j = 0; j < i; ++j) shift += chol(i, j) * y[static_cast<std::size_t>(j)];
      const double e = normal_cdf((upper(i) - shift) / chol(i, i));
      f *= e;
      if (f == 0.0) return 0.0;
      if (i + 1 < k) {
        const double w = stream.uniform_open();
        y[static_cast<std::size_t>(i)] = normal_quantile(std::clamp(w * e, 1e-300, 1.0 - 1e-16));
      }
    }
    return f;
  }
};

void eval_samples(const GenzIntegrand& g, const IntegrationBudget& budget, std::vector<double>& out, Exec exec) {
  const auto n = static_cast<std::int64_t>(out.size());
  const auto k = static_cast<std::size_t>(g.upper.size());
  if (exec == Exec::Serial) {
    std::vector<double> y(k);
    for (std::int64_t i = 0; i < n; ++i) {
      Stream stream(derive_key(budget.seed, {static_cast<std::uint64_t>(i)}));
      out[static_cast<std::size_t>(i)] = g(stream, y);
    }
    return;
  }
#pragma omp parallel
  {
    std::vector<double> y(k);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      Stream stream(derive_key(budget.seed, {static_cast<std::uint64_t>(i)}));
      out[static_cast<std::size_t>(i)] = g(stream, y);
    }
  }
}

}  // namespace

OrthantSpec::OrthantSpec(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "orthant signs must be +1 or -1");
  }
}

OrthantSpec OrthantSpec::from_complex(const CVector& r) {
  const Index n = r.size();
  std::vector<int> s(static_cast<std::size_t>(2 * n));
  for (Index i = 0; i < n; ++i) {
    s[static_cast<std::size_t>(i)] = r(i).real() >= 0.0 ? 1 : -1;
    s[static_cast<std::size_t>(n + i)] = r(i).imag() >= 0.0 ? 1 : -1;
  }
  return OrthantSpec(std::move(s));
}

OrthantSpec OrthantSpec::without(Index i) const {
  std::vector<int> s = signs_;
  s.erase(s.begin() + i);
  return OrthantSpec(std::move(s));
}

std::uint64_t OrthantSpec::fingerprint() const noexcept {
  std::uint64_t h = mix64(signs_.size());
  for (int s : signs_) h = mix64(h ^ (s > 0 ? 0x5bd1e995ULL : 0xc2b2ae35ULL));
  return h;
}

void IntegrationBudget::validate() const {
  if (sample_count < kMinSamples) {
    throw Error(ErrorCode::InvalidArgument, "integration budget needs at least 1000 samples");
  }
}

CVector draw_complex_gaussian(const CMatrix& chol, Stream& stream) {
  const Index n = chol.rows();
  CVector z(n);
  for (Index i = 0; i < n; ++i) {
    const double re = stream.normal();
    const double im = stream.normal();
    z(i) = Complex(re, im) * kInvSqrt2;
  }
  return chol.triangularView<Eigen::Lower>() * z;
}

std::vector<CVector> sample_complex_gaussian(const HermitianPSD& cov, std::size_t count, std::uint64_t seed, Exec exec) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  const Index n = cov.size();
  std::vector<CVector> out(count, CVector::Zero(n));
  if (cov.is_zero()) return out;
  const CMatrix chol = cholesky(cov);
  const auto total = static_cast<std::int64_t>(count);
  auto draw = [&](std::int64_t i) {
    Stream stream(derive_key(seed, {static_cast<std::uint64_t>(i)}));
    out[static_cast<std::size_t>(i)] = draw_complex_gaussian(chol, stream);
  };
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < total; ++i) draw(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) draw(i);
  }
  return out;
}

namespace detail {

CMatrix random_covariance_unnormalized(Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  Stream stream(derive_key(seed, {stream_tag::covariance}));
  CMatrix s(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double re = stream.uniform();
      const double im = stream.uniform();
      s(i, j) = Complex(re, im);
    }
  const CMatrix gram = s.adjoint() * s;
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const CMatrix& v = eig.eigenvectors();
  RVector spectrum(n);
  for (Index i = 0; i < n; ++i) spectrum(i) = 1.0 + stream.uniform();
  CMatrix c = v * spectrum.cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (c + c.adjoint());
}

}  // namespace detail

HermitianPSD random_channel_covariance(Index n, std::uint64_t seed) {
  CMatrix c = detail::random_covariance_unnormalized(n, seed);
  c *= static_cast<double>(n) / c.diagonal().real().sum();
  return HermitianPSD(c);
}

ProbEstimate mvn_orthant_prob(const RVector& mean, const RMatrix& cov, const OrthantSpec& orthant,
                              const IntegrationBudget& budget, Exec exec) {
  budget.validate();
  const Index k = orthant.size();
  if (mean.size() != k || cov.rows() != k || cov.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "mean, covariance and orthant dimensions differ");
  }
  if (k == 0) return {1.0, 0.0};

  // Flip coordinates so the region becomes {v <= upper} for v ~ N(0, D C D).
  RVector upper(k);
  for (Index i = 0; i < k; ++i) upper(i) = orthant[i] * mean(i);

  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<double> marginal(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    if (!(cov(i, i) > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "zero marginal variance");
    marginal[static_cast<std::size_t>(i)] = normal_cdf(upper(i) / std::sqrt(cov(i, i)));
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return marginal[static_cast<std::size_t>(a)] < marginal[static_cast<std::size_t>(b)];
  });

  RMatrix permuted(k, k);
  RVector permuted_upper(k);
  for (Index i = 0; i < k; ++i) {
    const Index oi = order[static_cast<std::size_t>(i)];
    permuted_upper(i) = upper(oi);
    for (Index j = 0; j < k; ++j) {
      const Index oj = order[static_cast<std::size_t>(j)];
      permuted(i, j) = orthant[oi] * orthant[oj] * cov(oi, oj);
    }
  }

  GenzIntegrand integrand{cholesky(permuted), permuted_upper};
  if (k == 1) {
    std::vector<double> y(1);
    Stream unused(0);
    return {integrand(unused, y), 0.0};
  }
  std::vector<double> values(budget.sample_count);
  eval_samples(integrand, budget, values, exec);
  return batch_mean(values);
}

RMatrix reduced_density_cov(const RMatrix& cov, Index n) {
  const Index k = cov.rows();
  if (k < 2 || cov.cols() != k) throw Error(ErrorCode::InvalidArgument, "reduced covariance needs K >= 2");
  if (n < 0 || n >= k) throw Error(ErrorCode::InvalidArgument, "index out of range");
  const double pivot = cov(n, n);
  if (!(pivot > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "non-positive pivot in Schur complement");
  std::vector<Index> keep;
  for (Index i = 0; i < k; ++i)
    if (i != n) keep.push_back(i);
  RMatrix out(k - 1, k - 1);
  for (Index i = 0; i < k - 1; ++i)
    for (Index j = 0; j < k - 1; ++j) {
      const Index a = keep[static_cast<std::size_t>(i)];
      const Index b = keep[static_cast<std::size_t>(j)];
      out(i, j) = cov(a, b) - cov(a, n) * cov(n, b) / pivot;
    }
  return 0.5 * (out + out.transpose());
}

TruncatedMean truncated_orthant_mean(const RMatrix& cov, const OrthantSpec& orthant, const IntegrationBudget& budget,
                                     Exec exec) {
  const Index k = orthant.size();
  if (k < 1 || cov.rows() != k || cov.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "covariance and orthant dimensions differ");
  }
  if (!is_positive_definite(cov)) throw Error(ErrorCode::NotPositiveDefinite, "truncated mean needs a PD covariance");

  TruncatedMean out;
  out.prob = mvn_orthant_prob(RVector::Zero(k), cov, orthant, budget.reseeded({0}), exec);
  out.weighted_sum = RVector::Zero(k);
  RVector variance = RVector::Zero(k);
  for (Index n = 0; n < k; ++n) {
    ProbEstimate conditional{1.0, 0.0};
    if (k > 1) {
      conditional = mvn_orthant_prob(RVector::Zero(k - 1), reduced_density_cov(cov, n), orthant.without(n),
                                     budget.reseeded({static_cast<std::uint64_t>(n) + 1}), exec);
    }
    const double density_at_zero = 1.0 / std::sqrt(2.0 * std::numbers::pi * cov(n, n));
    for (Index i = 0; i < k; ++i) {
      const double coeff = cov(i, n) * density_at_zero;
      out.weighted_sum(i) += orthant[n] * coeff * conditional.value;
      variance(i) += coeff * coeff * conditional.std_error * conditional.std_error;
    }
  }
  out.weighted_sum_std_error = variance.cwiseSqrt();
  return out;
}

}  // namespace onebit
