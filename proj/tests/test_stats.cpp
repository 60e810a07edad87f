#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heavytail/cauchy.hpp"
#include "heavytail/density.hpp"
#include "heavytail/error.hpp"
#include "heavytail/gauss.hpp"
#include "heavytail/stats.hpp"
#include "heavytail/transforms.hpp"

using namespace heavytail;
using stats::EmpiricalSample;

namespace {

const cauchy::CauchyScale kOne(1.0);
double cauchy_cdf(double x) { return cauchy::cdf(x, kOne); }

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed) {
  return gauss::sample_mvn(gauss::cholesky(gauss::CovarianceMatrix::identity(1)), n, seed)
      .values;
}

}  // namespace

TEST(Kolmogorov, CriticalValues) {
  EXPECT_NEAR(stats::kolmogorov_critical(0.05), 1.35810, 1e-4);
  EXPECT_NEAR(stats::kolmogorov_critical(0.01), 1.62762, 1e-4);
  EXPECT_NEAR(stats::kolmogorov_critical(0.001), 1.94947, 1e-4);
  EXPECT_THROW(stats::kolmogorov_critical(0.1), Error);
}

TEST(Kolmogorov, SurvivalBranchesAgree) {
  // The two series overlap around the switch point.
  for (double x : {1.0, 1.17, 1.19, 1.5}) {
    EXPECT_GE(stats::kolmogorov_survival(x), 0.0);
    EXPECT_LE(stats::kolmogorov_survival(x), 1.0);
  }
  EXPECT_NEAR(stats::kolmogorov_survival(1.1799999), stats::kolmogorov_survival(1.18),
              1e-6);
  EXPECT_EQ(stats::kolmogorov_survival(0.0), 1.0);
}

TEST(EmpiricalSample, SortsAndEvaluatesEcdf) {
  const EmpiricalSample s({3.0, 1.0, 2.0, 2.0});
  EXPECT_EQ(s.sorted_values(), (std::vector<double>{1.0, 2.0, 2.0, 3.0}));
  EXPECT_EQ(s.ecdf(0.5), 0.0);
  EXPECT_EQ(s.ecdf(2.0), 0.75);
  EXPECT_EQ(s.ecdf(10.0), 1.0);
  EXPECT_THROW(EmpiricalSample({}), Error);
}

TEST(KsOneSample, CauchyQuantileGridIsNearlyPerfect) {
  const std::size_t n = 1000;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = cauchy::quantile((static_cast<double>(i) + 0.5) / n, kOne);
  }
  const auto r = stats::ks_one_sample(EmpiricalSample(v), cauchy_cdf, 0.01);
  EXPECT_LE(r.statistic, 0.5 / n + 1e-12);
  EXPECT_TRUE(r.passes);
}

TEST(KsOneSample, UniformGridStatisticIsHalfOverN) {
  const std::size_t n = 500;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (static_cast<double>(i) + 0.5) / n;
  const auto r = stats::ks_one_sample(
      EmpiricalSample(v), [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.05);
  EXPECT_NEAR(r.statistic, 0.5 / n, 1e-15);
}

TEST(KsOneSample, NormalDrawsFailAgainstCauchy) {
  const auto r = stats::ks_one_sample(EmpiricalSample(normal_draws(1'000'000, 5)),
                                      cauchy_cdf, 0.001);
  EXPECT_FALSE(r.passes);
  EXPECT_GT(r.statistic, 0.05);
}

TEST(KsOneSample, InvariantUnderIncreasingTransforms) {
  const auto x = cauchy::sample(20'000, kOne, 8).values;
  const double base = stats::ks_one_sample(EmpiricalSample(x), cauchy_cdf, 0.05).statistic;

  struct Map {
    double (*forward)(double);
    double (*inverse)(double);
  };
  const std::array<Map, 3> maps = {{
      {[](double t) { return std::atan(t); }, [](double u) { return std::tan(u); }},
      {[](double t) { return std::cbrt(t); }, [](double u) { return u * u * u; }},
      {[](double t) { return 2.0 * t + 1.0; }, [](double u) { return (u - 1.0) / 2.0; }},
  }};
  for (const auto& m : maps) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = m.forward(x[i]);
    const double d = stats::ks_one_sample(
                         EmpiricalSample(y),
                         [&](double u) { return cauchy_cdf(m.inverse(u)); }, 0.05)
                         .statistic;
    EXPECT_NEAR(d, base, 1e-9);
  }
}

TEST(KsTwoSample, SelfIsZero) {
  const EmpiricalSample s(cauchy::sample(10'000, kOne, 9).values);
  EXPECT_EQ(stats::ks_two_sample(s, s, 0.01).statistic, 0.0);
}

TEST(KsTwoSample, DisjointBatchesOfOneLawPass) {
  const auto r = stats::ks_two_sample(EmpiricalSample(cauchy::sample(1'000'000, kOne, 10).values),
                                      EmpiricalSample(cauchy::sample(1'000'000, kOne, 11).values),
                                      0.01);
  EXPECT_TRUE(r.passes) << r.statistic << " vs " << r.critical_value;
}

TEST(KsTwoSample, CauchyVersusNormalFails) {
  const auto r = stats::ks_two_sample(EmpiricalSample(cauchy::sample(200'000, kOne, 12).values),
                                      EmpiricalSample(normal_draws(200'000, 13)), 0.01);
  EXPECT_FALSE(r.passes);
}

TEST(KsTwoSample, HandlesTies) {
  const EmpiricalSample a({0.0, 0.0, 1.0, 1.0});
  const EmpiricalSample b({0.0, 1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(stats::ks_two_sample(a, b, 0.05).statistic, 0.25);
}

TEST(Histogram, AllEqualSampleFillsOneBin) {
  const std::vector<double> v(1000, 0.0);
  const auto bins = stats::histogram_density(v, 0.5, -1.0, 1.0);
  ASSERT_EQ(bins.size(), 5u);
  for (const auto& b : bins) {
    EXPECT_DOUBLE_EQ(b.density, b.center == 0.0 ? 2.0 : 0.0);
    EXPECT_EQ(b.standard_error, 0.0);
  }
}

TEST(Histogram, StandardCauchyAtZero) {
  const auto v = cauchy::sample(10'000'000, kOne, 14).values;
  const auto bins = stats::histogram_density(v, 0.05, 0.0, 0.0);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_NEAR(bins[0].density, std::numbers::inv_pi, 4 * bins[0].standard_error);
}

TEST(Histogram, AbsRatioSampleMatchesQuadrature) {
  const transforms::Weights w({0.3, 0.7});
  const auto v = transforms::sample_abs_ratio(gauss::theta_to_covariance(0.5), w, 1'000'000,
                                              15).values;
  const auto bins = stats::histogram_density(v, 0.05, -5.0, 5.0);
  const density::DensityModel model(density::DensityKind::AbsRatio, 0.5, w);
  for (std::size_t k = 0; k < bins.size(); k += 5) {
    const double g = density::gv(model, bins[k].center).value;
    EXPECT_LT(std::abs(bins[k].density - g), 4 * bins[k].standard_error)
        << "bin " << bins[k].center;
  }
}

TEST(Histogram, InvalidArguments) {
  const std::vector<double> v = {1.0};
  EXPECT_THROW(stats::histogram_density(v, 0.0, 0.0, 1.0), Error);
  EXPECT_THROW(stats::histogram_density(v, 0.1, 1.0, 0.0), Error);
  EXPECT_THROW(stats::histogram_density({}, 0.1, 0.0, 1.0), Error);
}
