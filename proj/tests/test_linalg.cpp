// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "onebit/gaussian.hpp"
#include "onebit/linalg.hpp"
#include "oracles.hpp"

using namespace onebit;

TEST_SUITE("core-linalg") {
  TEST_CASE("HermitianPSD rejects malformed input") {
    CMatrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(HermitianPSD{rect}, Error);

    CMatrix skew(2, 2);
    skew << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
    try {
      HermitianPSD bad(skew);
      FAIL("accepted non-Hermitian input");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotHermitian);
    }

    CMatrix indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    try {
      HermitianPSD bad(indefinite);
      FAIL("accepted indefinite input");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    }

    CMatrix nan = CMatrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(HermitianPSD{nan}, Error);
  }

  TEST_CASE("HermitianPSD symmetrizes within tolerance") {
    CMatrix m(2, 2);
    m << 2.0, Complex(0.5, 0.25), Complex(0.5, -0.25 + 1e-13), 1.0;
    const HermitianPSD c(m);
    CHECK(c.matrix() == c.matrix().adjoint());
    CHECK(c.trace() == doctest::Approx(3.0));
  }

  TEST_CASE("cholesky examples") {
    const CMatrix l3 = cholesky(HermitianPSD::identity(3));
    CHECK((l3 - CMatrix::Identity(3, 3)).norm() < 1e-10);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const CMatrix l = cholesky(HermitianPSD(d));
    CHECK(l(0, 0).real() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(l(1, 1).real() == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::abs(l(0, 1)) == 0.0);
  }

  TEST_CASE("cholesky reconstructs random covariances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const HermitianPSD c = random_channel_covariance(5, seed);
      const CMatrix l = cholesky(c);
      CHECK((l * l.adjoint() - c.matrix()).norm() / c.matrix().norm() < 1e-8);
      CHECK(l.isLowerTriangular());
    }
  }

  TEST_CASE("cholesky of a singular PSD matrix succeeds via the ridge") {
    CVector v(3);
    v << 1.0, Complex(0.0, 1.0), -1.0;
    const HermitianPSD rank1(CMatrix(v * v.adjoint()));
    const CMatrix l = cholesky(rank1);
    CHECK((l * l.adjoint() - rank1.matrix()).norm() < 1e-5);
  }

  TEST_CASE("real cholesky validates symmetry") {
    RMatrix a(2, 2);
    a << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(cholesky(a), Error);
    a(1, 0) = 0.5;
    const RMatrix l = cholesky(a);
    CHECK((l * l.transpose() - a).norm() < 1e-10);
  }

  TEST_CASE("real_stack_cov structure") {
    const RMatrix s1 = real_stack_cov(HermitianPSD::identity(1));
    CHECK((s1 - RMatrix::Identity(2, 2)).norm() == 0.0);

    CMatrix c(2, 2);
    c << 1.0, Complex(0.0, 0.5), Complex(0.0, -0.5), 1.0;
    const RMatrix s = real_stack_cov(HermitianPSD(c));
    CHECK((s.block(2, 0, 2, 2) - c.imag()).norm() == 0.0);
    CHECK((s.block(0, 2, 2, 2) + c.imag()).norm() == 0.0);
    CHECK((s.block(0, 0, 2, 2) - c.real()).norm() == 0.0);
  }

  TEST_CASE("real_stack_cov doubles every eigenvalue") {
    for (Index n : {2, 3, 5}) {
      const HermitianPSD c = random_channel_covariance(n, 100 + static_cast<std::uint64_t>(n));
      Eigen::SelfAdjointEigenSolver<CMatrix> ce(c.matrix());
      Eigen::SelfAdjointEigenSolver<RMatrix> re(real_stack_cov(c));
      for (Index i = 0; i < n; ++i) {
        CHECK(re.eigenvalues()(2 * i) == doctest::Approx(ce.eigenvalues()(i)).epsilon(1e-8));
        CHECK(re.eigenvalues()(2 * i + 1) == doctest::Approx(ce.eigenvalues()(i)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("stacked samples have covariance real_stack_cov / 2") {
    const HermitianPSD c = random_channel_covariance(2, 7);
    const auto samples = sample_complex_gaussian(c, 1000000, 11);
    RMatrix acc = RMatrix::Zero(4, 4);
    for (const auto& h : samples) {
      const RVector x = real_stack(h);
      acc += x * x.transpose();
    }
    acc /= static_cast<double>(samples.size());
    const RMatrix target = 0.5 * real_stack_cov(c);
    // Entry stderr is at most sqrt(2) * 0.6 / sqrt(1e6) for these variances.
    CHECK((acc - target).cwiseAbs().maxCoeff() < 5.0 * 0.85e-3);
  }

  TEST_CASE("real_stack round trip") {
    CVector v(2);
    v << Complex(1.0, -2.0), Complex(0.5, 3.0);
    const RVector s = real_stack(v);
    CHECK(s(0) == 1.0);
    CHECK(s(2) == -2.0);
    CHECK(complex_unstack(s) == v);
  }

  TEST_CASE("erf examples and properties") {
    CHECK(onebit::erf(0.0) == 0.0);
    CHECK(onebit::erf(0.7) == -onebit::erf(-0.7));
    CHECK(std::abs(onebit::erf(1.0) - 0.8427007929) < 1e-9);
    double prev = -1.0;
    for (double x = -3.0; x <= 3.0; x += 0.01) {
      CHECK(std::abs(onebit::erf(x) - oracle::erf_series(x)) < 1e-12);
      CHECK(onebit::erf(x) + onebit::erf(-x) == 0.0);
      CHECK(onebit::erf(x) >= prev);
      prev = onebit::erf(x);
    }
  }

  TEST_CASE("normal cdf, pdf and quantile") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.5 * (1.0 + oracle::erf_series(1.0 / std::sqrt(2.0)))).epsilon(1e-14));
    CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-9}) {
      CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isinf(normal_quantile(1.0)));
  }

  TEST_CASE("condition number and definiteness") {
    CMatrix d = CMatrix::Identity(2, 2);
    d(1, 1) = 1e-3;
    CHECK(hermitian_condition(d) == doctest::Approx(1e3));
    RMatrix a(2, 2);
    a << 1.0, 0.9, 0.9, 1.0;
    CHECK(is_positive_definite(a));
    a(0, 1) = a(1, 0) = 1.1;
    CHECK_FALSE(is_positive_definite(a));
  }
}
