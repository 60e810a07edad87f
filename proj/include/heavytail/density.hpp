#pragma once

#include <string>

#include "heavytail/quadrature.hpp"
#include "heavytail/transforms.hpp"

namespace heavytail::density {

using quadrature::IntegralResult;
using quadrature::QuadratureConfig;

// Transform kinds that have a non-trivial density. RatioPM is exactly
// standard Cauchy for every covariance and is not modelled here.
enum class DensityKind { AbsRatio, StoppedBM };

std::string to_string(DensityKind kind);
// Throws ParameterOutOfRange for RatioPM.
DensityKind from_transform(transforms::TransformKind kind);

// Two-coordinate model under the theta parametrization of the inverse
// covariance.
class DensityModel {
 public:
  // Throws ParameterOutOfRange for |theta| >= 1, DimensionMismatch unless
  // two weights.
  DensityModel(DensityKind kind, double theta, transforms::Weights w);

  DensityKind kind() const noexcept { return kind_; }
  double theta() const noexcept { return theta_; }
  double w1() const noexcept { return w_[0]; }
  double w2() const noexcept { return w_[1]; }
  const transforms::Weights& weights() const noexcept { return w_; }

  DensityModel with_theta(double theta) const { return {kind_, theta, w_}; }

 private:
  DensityKind kind_;
  double theta_;
  transforms::Weights w_;
};

// Density of w1 X1/|Y1| + w2 X2/|Y2| at v: two integrals over (0, inf).
IntegralResult gv_abs(double v, double theta, const transforms::Weights& w,
                      const QuadratureConfig& cfg = {});

// Density of w1 X1(Y1^-2) + w2 X2(Y2^-2) at v: four integrals over [0, 1].
IntegralResult gv_bm(double v, double theta, const transforms::Weights& w,
                     const QuadratureConfig& cfg = {});

IntegralResult gv(const DensityModel& model, double v,
                  const QuadratureConfig& cfg = {});

// g_V(0) from the dedicated v = 0 integrands, independent of gv_abs/gv_bm.
IntegralResult gv_zero(const DensityModel& model,
                       const QuadratureConfig& cfg = {});

// d g_V(0) / d theta at theta = 0, from the differentiated integrands.
IntegralResult dgv0_dtheta_at_zero(DensityKind kind, const transforms::Weights& w,
                                   const QuadratureConfig& cfg = {});

// Central difference (g_V(0; h) - g_V(0; -h)) / 2h. Requires 0 < h <= 1e-3.
double finite_difference_derivative(DensityKind kind,
                                    const transforms::Weights& w, double h,
                                    const QuadratureConfig& cfg = {});

// v^2 g_V(v), integrated with the v^2 factor inside the integrand so that the
// absolute tolerance applies to an O(1) quantity. Requires v > 0.
IntegralResult tail_functional(const DensityModel& model, double v,
                               const QuadratureConfig& cfg = {});

// 2 * int_0^inf g_V(v) dv.
IntegralResult normalization_check(const DensityModel& model,
                                   const QuadratureConfig& cfg = {});

inline constexpr double kDefaultDecisionTol = 1e-6;
inline constexpr double kNormalizationTol = 1e-6;
inline constexpr double kVerdictTailPoint = 1e4;

struct CauchyVerdict {
  DensityModel model;
  double gv0 = 0.0;
  double gv0_minus_inv_pi = 0.0;
  double tail_v = kVerdictTailPoint;
  double tail_value = 0.0;
  double normalization = 0.0;
  bool normalization_ok = false;
  bool is_cauchy = false;
  double decision_tol = kDefaultDecisionTol;
};

// A standard Cauchy limit v^2 g(v) -> 1/pi pins the scale to one, after which
// a Cauchy law must have g(0) = 1/pi. is_cauchy is |g_V(0) - 1/pi| <= tol and
// the density normalizes.
CauchyVerdict cauchy_verdict(const DensityModel& model,
                             const QuadratureConfig& cfg = {},
                             double decision_tol = kDefaultDecisionTol);

}  // namespace heavytail::density
