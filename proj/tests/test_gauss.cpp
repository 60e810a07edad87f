#include <gtest/gtest.h>

#include <cmath>

#include "heavytail/error.hpp"
#include "heavytail/gauss.hpp"
#include "heavytail/stats.hpp"

using namespace heavytail;
using gauss::CovarianceMatrix;

namespace {

void expect_matrix_near(const CovarianceMatrix& m, std::vector<double> expected,
                        double tol) {
  ASSERT_EQ(m.entries().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(m.entries()[i], expected[i], tol) << "entry " << i;
  }
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::Numerical;
}

// Empirical covariance of a batch of 2-vectors.
std::array<double, 3> empirical_cov2(const SampleBatch& b) {
  double s00 = 0, s01 = 0, s11 = 0;
  for (std::size_t i = 0; i < b.count(); ++i) {
    const double x = b.at(i, 0), y = b.at(i, 1);
    s00 += x * x;
    s01 += x * y;
    s11 += y * y;
  }
  const double n = static_cast<double>(b.count());
  return {s00 / n, s01 / n, s11 / n};
}

}  // namespace

TEST(ThetaToCovariance, ZeroIsIdentity) {
  expect_matrix_near(gauss::theta_to_covariance(0.0), {1, 0, 0, 1}, 0.0);
}

TEST(ThetaToCovariance, HalfMatchesAnalyticInverse) {
  expect_matrix_near(gauss::theta_to_covariance(0.5),
                     {4.0 / 3, -2.0 / 3, -2.0 / 3, 4.0 / 3}, 1e-15);
}

TEST(ThetaToCovariance, ProductWithInverseIsIdentity) {
  for (double t : {-0.99, -0.9, -0.5, -0.1, 0.0, 0.3, 0.5, 0.9, 0.99}) {
    const gauss::ThetaCovariance tc(t);
    const auto s = tc.covariance();
    const auto inv = tc.inverse();
    EXPECT_GT(tc.determinant_of_inverse(), 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 2; ++k) acc += s(i, k) * inv(k, j);
        EXPECT_NEAR(acc, i == j ? 1.0 : 0.0, 1e-12) << "theta " << t;
      }
    }
  }
}

TEST(ThetaToCovariance, RejectsOutOfRange) {
  for (double t : {1.0, -1.0, 1.5, std::nan("")}) {
    EXPECT_EQ(kind_of([&] { gauss::theta_to_covariance(t); }),
              ErrorKind::ParameterOutOfRange);
  }
}

TEST(CovarianceMatrix, SymmetrizesRoundingAndRejectsAsymmetry) {
  const CovarianceMatrix ok(2, {2.0, 0.5, 0.5 + 1e-14, 1.0});
  EXPECT_EQ(ok(0, 1), ok(1, 0));
  EXPECT_EQ(kind_of([] { CovarianceMatrix(2, {2.0, 0.5, 0.6, 1.0}); }),
            ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([] { CovarianceMatrix(2, {0.0, 0.0, 0.0, 1.0}); }),
            ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([] { CovarianceMatrix(2, {1.0, 0.0, 0.0}); }),
            ErrorKind::DimensionMismatch);
}

TEST(Cholesky, IdentityIsItsOwnFactor) {
  const auto l = gauss::cholesky(CovarianceMatrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(l(i, j), i == j ? 1.0 : 0.0);
  }
}

TEST(Cholesky, TwoByTwoExample) {
  const auto l = gauss::cholesky(CovarianceMatrix(2, {4, 2, 2, 3}));
  EXPECT_DOUBLE_EQ(l(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(l(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(l(1, 0), 1.0);
  EXPECT_NEAR(l(1, 1), std::sqrt(2.0), 1e-15);
  expect_matrix_near(l.reconstruct(), {4, 2, 2, 3}, 1e-14);
}

TEST(Cholesky, SingularMatrixIsRejected) {
  EXPECT_EQ(kind_of([] { gauss::cholesky(CovarianceMatrix(2, {1, 1, 1, 1})); }),
            ErrorKind::NotPositiveDefinite);
}

TEST(Cholesky, RoundTripOnThetaGrid) {
  for (double t : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const auto sigma = gauss::theta_to_covariance(t);
    const auto back = gauss::cholesky(sigma).reconstruct();
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(back.entries()[i], sigma.entries()[i],
                  1e-10 * std::abs(sigma.entries()[i]) + 1e-300);
    }
  }
}

TEST(Cholesky, LargerMatrixReconstructs) {
  // AR(1)-style correlation, well conditioned.
  const std::size_t n = 6;
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e[i * n + j] = std::pow(0.6, std::abs(static_cast<int>(i) - static_cast<int>(j)));
    }
  }
  const CovarianceMatrix sigma(n, e);
  const auto l = gauss::cholesky(sigma);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_GT(l(i, i), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) EXPECT_EQ(l(i, j), 0.0);
  }
  expect_matrix_near(l.reconstruct(), e, 1e-12);
}

TEST(SampleMvn, IdentityCovarianceWithinFiveStandardErrors) {
  const auto batch =
      gauss::sample_mvn(gauss::cholesky(CovarianceMatrix::identity(2)), 1'000'000, 11);
  ASSERT_EQ(batch.count(), 1'000'000u);
  const auto c = empirical_cov2(batch);
  const double n = 1e6;
  // SE of a sample variance of N(0,1) is sqrt(2/n); of a cross moment sqrt(1/n).
  EXPECT_NEAR(c[0], 1.0, 5 * std::sqrt(2 / n));
  EXPECT_NEAR(c[2], 1.0, 5 * std::sqrt(2 / n));
  EXPECT_NEAR(c[1], 0.0, 5 * std::sqrt(1 / n));
}

TEST(SampleMvn, ThetaHalfCorrelationIsMinusHalf) {
  const auto batch =
      gauss::sample_mvn(gauss::cholesky(gauss::theta_to_covariance(0.5)), 1'000'000, 12);
  const auto c = empirical_cov2(batch);
  const double r = c[1] / std::sqrt(c[0] * c[2]);
  // SE of a correlation estimate: (1 - rho^2) / sqrt(n).
  EXPECT_NEAR(r, -0.5, 5 * 0.75 / 1e3);
}

TEST(SampleMvn, SameSeedSameBatch) {
  const auto l = gauss::cholesky(gauss::theta_to_covariance(0.3));
  const auto a = gauss::sample_mvn(l, 50'000, 99);
  const auto b = gauss::sample_mvn(l, 50'000, 99);
  const auto c = gauss::sample_mvn(l, 50'000, 100);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
}

TEST(GaussianInvariance, UnitNormWeightsGiveStandardNormal) {
  // sum w_j X_j with sum w_j^2 = 1 over iid N(0,1) is N(0,1).
  const std::vector<double> w = {0.6, 0.8};
  const auto batch =
      gauss::sample_mvn(gauss::cholesky(CovarianceMatrix::identity(2)), 1'000'000, 21);
  std::vector<double> combo(batch.count());
  for (std::size_t i = 0; i < combo.size(); ++i) {
    combo[i] = w[0] * batch.at(i, 0) + w[1] * batch.at(i, 1);
  }
  const auto r = stats::ks_one_sample(
      stats::EmpiricalSample(std::move(combo)),
      [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }, 0.01);
  EXPECT_TRUE(r.passes) << r.statistic << " vs " << r.critical_value;
}
