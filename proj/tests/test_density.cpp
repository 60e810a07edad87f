#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "heavytail/cauchy.hpp"
#include "heavytail/density.hpp"
#include "heavytail/error.hpp"

using namespace heavytail;
using density::DensityKind;
using density::DensityModel;
using transforms::Weights;
using std::numbers::inv_pi;
using std::numbers::pi;

namespace {

const Weights kHalf({0.5, 0.5});
const std::array<Weights, 3> kWeightGrid = {Weights({0.5, 0.5}), Weights({0.3, 0.7}),
                                           Weights({0.9, 0.1})};
constexpr std::array<DensityKind, 2> kKinds = {DensityKind::AbsRatio,
                                               DensityKind::StoppedBM};

double cauchy_pdf(double v) { return cauchy::pdf(v, cauchy::CauchyScale(1.0)); }

// Derivative oracles: the w = (1/2, 1/2) integrands reduce to
// (2/pi) x^2/(1+x^2)^3 on (0, inf) and twice (2/pi) x^3/(1+x^2)^3 on [0, 1].
// Both reduced integrals are evaluated with Boost's double-exponential rules.
double abs_derivative_oracle() {
  boost::math::quadrature::exp_sinh<double> es;
  const double i = es.integrate([](double x) { return x * x / std::pow(1 + x * x, 3); },
                                0.0, std::numeric_limits<double>::infinity());
  return 2.0 / pi * i;
}

double bm_derivative_oracle() {
  boost::math::quadrature::tanh_sinh<double> ts;
  // u = x^2 turns int_0^1 x^3/(1+x^2)^3 dx into (1/2) int_0^1 u/(1+u)^3 du.
  const double i =
      0.5 * ts.integrate([](double u) { return u / std::pow(1 + u, 3); }, 0.0, 1.0);
  return 2.0 * (2.0 / pi) * i;
}

}  // namespace

TEST(DerivativeOracles, MatchFrozenValues) {
  // Frozen: pi/16 * 2/pi = 1/8 and 2 * (2/pi) * (1/16) = 1/(4 pi).
  EXPECT_NEAR(abs_derivative_oracle(), 0.125, 1e-14);
  EXPECT_NEAR(bm_derivative_oracle(), 1.0 / (4.0 * pi), 1e-14);
}

TEST(DensityModel, Validation) {
  EXPECT_THROW(DensityModel(DensityKind::AbsRatio, 1.0, kHalf), Error);
  EXPECT_THROW(DensityModel(DensityKind::AbsRatio, 0.0, Weights({0.2, 0.3, 0.5})), Error);
  EXPECT_THROW(density::from_transform(transforms::TransformKind::RatioPM), Error);
  EXPECT_EQ(density::from_transform(transforms::TransformKind::StoppedBM),
            DensityKind::StoppedBM);
}

TEST(GvAbs, ZeroThetaIsStandardCauchy) {
  EXPECT_NEAR(density::gv_abs(0.0, 0.0, kHalf).value, inv_pi, 1e-8);
  for (const auto& w : kWeightGrid) {
    EXPECT_NEAR(density::gv_abs(2.0, 0.0, w).value, 1.0 / (5.0 * pi), 1e-8);
  }
}

TEST(GvAbs, SmallPositiveThetaExceedsInversePi) {
  EXPECT_GT(density::gv_abs(0.0, 0.1, kHalf).value, inv_pi);
}

// Frozen values from a 30-digit mpmath evaluation of the same integrals.
TEST(GvAbs, FrozenHighPrecisionValues) {
  EXPECT_NEAR(density::gv_abs(0.0, 0.1, kHalf).value, 0.33252239304165005506, 1e-9);
  EXPECT_NEAR(density::gv_abs(1.5, 0.5, Weights({0.3, 0.7})).value,
              0.082694867348801539031, 1e-9);
  EXPECT_NEAR(density::gv_abs(0.7, -0.6, Weights({0.9, 0.1})).value,
              0.20690309942732301673, 1e-9);
  EXPECT_NEAR(density::gv_abs(3.0, 0.9, kHalf).value, 0.015688275929448157107, 1e-9);
}

TEST(GvBm, FrozenHighPrecisionValues) {
  EXPECT_NEAR(density::gv_bm(0.0, 0.1, kHalf).value, 0.32753795252115950591, 1e-9);
  EXPECT_NEAR(density::gv_bm(1.5, 0.5, Weights({0.3, 0.7})).value,
              0.087922255004164456521, 1e-9);
  EXPECT_NEAR(density::gv_bm(0.7, -0.6, Weights({0.9, 0.1})).value,
              0.21085480604633490813, 1e-9);
  EXPECT_NEAR(density::gv_bm(3.0, 0.9, kHalf).value, 0.020404267928732404257, 1e-9);
}

TEST(GvBm, ZeroThetaIsStandardCauchy) {
  EXPECT_NEAR(density::gv_bm(0.0, 0.0, kHalf).value, inv_pi, 1e-8);
  EXPECT_GT(density::gv_bm(0.0, 0.1, kHalf).value, inv_pi);
  for (const auto& w : kWeightGrid) {
    for (double v : {0.0, 1.0, 5.0}) {
      EXPECT_NEAR(density::gv_bm(v, 0.0, w).value, density::gv_abs(v, 0.0, w).value, 2e-8);
      EXPECT_NEAR(density::gv_bm(v, 0.0, w).value, cauchy_pdf(v), 1e-8);
    }
  }
}

TEST(Gv, EvenInV) {
  for (auto kind : kKinds) {
    for (double t : {-0.7, 0.2, 0.6}) {
      const DensityModel m(kind, t, Weights({0.3, 0.7}));
      for (double v : {0.3, 1.7, 12.0}) {
        EXPECT_EQ(density::gv(m, v).value, density::gv(m, -v).value);
      }
    }
  }
}

TEST(Gv, WeightSwapSymmetry) {
  for (auto kind : kKinds) {
    for (double t : {-0.5, 0.3, 0.8}) {
      for (double v : {0.0, 0.9, 4.0}) {
        const double a = density::gv(DensityModel(kind, t, Weights({0.3, 0.7})), v).value;
        const double b = density::gv(DensityModel(kind, t, Weights({0.7, 0.3})), v).value;
        EXPECT_NEAR(a, b, 2e-8) << density::to_string(kind) << " t=" << t << " v=" << v;
      }
    }
  }
}

TEST(GvZero, AgreesWithGeneralDensityAtZero) {
  for (auto kind : kKinds) {
    for (double t : {-0.9, -0.3, 0.0, 0.1, 0.5, 0.9}) {
      for (const auto& w : kWeightGrid) {
        const DensityModel m(kind, t, w);
        EXPECT_NEAR(density::gv_zero(m).value, density::gv(m, 0.0).value, 2e-8)
            << density::to_string(kind) << " t=" << t;
      }
    }
  }
  EXPECT_NEAR(density::gv_zero(DensityModel(DensityKind::AbsRatio, 0.0, kHalf)).value,
              inv_pi, 1e-8);
  EXPECT_NEAR(density::gv_zero(DensityModel(DensityKind::StoppedBM, 0.0, kHalf)).value,
              inv_pi, 1e-8);
}

TEST(GvZero, DeviationPositiveForSmallPositiveTheta) {
  for (auto kind : kKinds) {
    for (double t : {0.02, 0.05, 0.1, 0.2}) {
      EXPECT_GT(density::gv_zero(DensityModel(kind, t, kHalf)).value - inv_pi, 0.0)
          << density::to_string(kind) << " t=" << t;
    }
  }
}

TEST(Derivative, QuadratureMatchesOracle) {
  EXPECT_NEAR(density::dgv0_dtheta_at_zero(DensityKind::AbsRatio, kHalf).value,
              abs_derivative_oracle(), 1e-8);
  EXPECT_NEAR(density::dgv0_dtheta_at_zero(DensityKind::StoppedBM, kHalf).value,
              bm_derivative_oracle(), 1e-8);
  for (auto kind : kKinds) {
    EXPECT_EQ(density::dgv0_dtheta_at_zero(kind, Weights({1.0, 0.0})).value, 0.0);
    EXPECT_GT(density::dgv0_dtheta_at_zero(kind, Weights({0.3, 0.7})).value, 0.0);
  }
}

TEST(Derivative, FiniteDifferenceAgrees) {
  EXPECT_NEAR(density::finite_difference_derivative(DensityKind::AbsRatio, kHalf, 1e-4),
              0.125, 1e-5);
  EXPECT_NEAR(density::finite_difference_derivative(DensityKind::StoppedBM, kHalf, 1e-4),
              1.0 / (4.0 * pi), 1e-5);
  for (auto kind : kKinds) {
    EXPECT_NEAR(density::finite_difference_derivative(kind, Weights({1.0, 0.0}), 1e-4), 0.0,
                1e-6);
    for (const auto& w : kWeightGrid) {
      EXPECT_NEAR(density::finite_difference_derivative(kind, w, 1e-4),
                  density::dgv0_dtheta_at_zero(kind, w).value, 1e-5);
    }
  }
  EXPECT_THROW(density::finite_difference_derivative(DensityKind::AbsRatio, kHalf, 1e-2),
               Error);
  EXPECT_THROW(density::finite_difference_derivative(DensityKind::AbsRatio, kHalf, 0.0),
               Error);
}

TEST(TailFunctional, ZeroThetaIsAnalytic) {
  for (auto kind : kKinds) {
    const DensityModel m(kind, 0.0, Weights({0.3, 0.7}));
    for (double v : {0.5, 3.0, 100.0, 1e4}) {
      EXPECT_NEAR(density::tail_functional(m, v).value, v * v / (pi * (1 + v * v)), 1e-9);
    }
  }
}

TEST(TailFunctional, ApproachesInversePi) {
  const DensityModel a(DensityKind::AbsRatio, 0.5, Weights({0.3, 0.7}));
  const DensityModel b(DensityKind::StoppedBM, 0.5, kHalf);
  EXPECT_NEAR(density::tail_functional(a, 1e4).value, inv_pi, 1e-3);
  EXPECT_NEAR(density::tail_functional(b, 1e4).value, inv_pi, 1e-3);
  for (auto kind : kKinds) {
    for (double t : {0.0, 0.25, 0.5, 0.75}) {
      const DensityModel m(kind, t, kHalf);
      const double d4 = std::abs(density::tail_functional(m, 1e4).value - inv_pi);
      const double d5 = std::abs(density::tail_functional(m, 1e5).value - inv_pi);
      EXPECT_LT(d4, 1e-3);
      EXPECT_LT(d5, 1e-4);
      EXPECT_LE(d5, d4);
    }
  }
  EXPECT_THROW(density::tail_functional(a, 0.0), Error);
}

TEST(Normalization, IntegratesToOne) {
  EXPECT_NEAR(
      density::normalization_check(DensityModel(DensityKind::AbsRatio, 0.0, kHalf)).value,
      1.0, 1e-8);
  EXPECT_NEAR(density::normalization_check(
                  DensityModel(DensityKind::AbsRatio, 0.5, Weights({0.3, 0.7})))
                  .value,
              1.0, 1e-6);
  EXPECT_NEAR(
      density::normalization_check(DensityModel(DensityKind::StoppedBM, -0.5, kHalf)).value,
      1.0, 1e-6);
}

TEST(Verdict, ZeroThetaIsCauchy) {
  for (auto kind : kKinds) {
    const auto v = density::cauchy_verdict(DensityModel(kind, 0.0, Weights({0.3, 0.7})));
    EXPECT_TRUE(v.is_cauchy);
    EXPECT_TRUE(v.normalization_ok);
    EXPECT_NEAR(v.tail_value, inv_pi, 1e-8);
  }
}

TEST(Verdict, SmallPositiveThetaIsNotCauchy) {
  for (auto kind : kKinds) {
    const auto v = density::cauchy_verdict(DensityModel(kind, 0.1, kHalf));
    EXPECT_FALSE(v.is_cauchy);
    EXPECT_GT(v.gv0_minus_inv_pi, 0.0);
    EXPECT_TRUE(v.normalization_ok);
    EXPECT_NEAR(v.tail_value, inv_pi, 1e-3);
  }
}
