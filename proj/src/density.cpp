#include "heavytail/density.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "heavytail/error.hpp"

namespace heavytail::density {

using std::numbers::inv_pi;
using std::numbers::pi;
using quadrature::integrate_adaptive;
using quadrature::kInfinity;

std::string to_string(DensityKind kind) {
  return kind == DensityKind::AbsRatio ? "abs" : "bm";
}

DensityKind from_transform(transforms::TransformKind kind) {
  switch (kind) {
    case transforms::TransformKind::AbsRatio: return DensityKind::AbsRatio;
    case transforms::TransformKind::StoppedBM: return DensityKind::StoppedBM;
    case transforms::TransformKind::RatioPM: break;
  }
  throw Error(ErrorKind::ParameterOutOfRange,
              "the ratio transform is standard Cauchy for every covariance; "
              "no density model is needed");
}

namespace {

void check_model(double theta, const transforms::Weights& w) {
  if (!(std::abs(theta) < 1.0)) {
    std::ostringstream msg;
    msg << "theta must lie in (-1, 1), got " << theta;
    throw Error(ErrorKind::ParameterOutOfRange, msg.str());
  }
  if (w.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch,
                "density models are defined for two weights");
  }
}

// Integrand of the absolute-ratio density, both signs of the 2 theta x term
// summed, multiplied by `scale`.
struct AbsIntegrand {
  double theta, w1, w2, v2, scale;

  double operator()(double x) const {
    const double det = 1.0 - theta * theta;
    const double a = w2 * w2 * x * x - 2.0 * theta * w1 * w2 * x + w1 * w1;
    const double tail = det * v2 * x * x;
    const double plus = a * (x * x + 2.0 * theta * x + 1.0) + tail;
    const double minus = a * (x * x - 2.0 * theta * x + 1.0) + tail;
    const double num = det * a * x;
    return scale * num / (2.0 * pi) *
           (1.0 / (plus * std::sqrt(plus)) + 1.0 / (minus * std::sqrt(minus)));
  }
};

// Integrand of the stopped-BM density over [0, 1]: the pair (w1, w2) and the
// swapped pair (w2, w1), each with both signs of the 2 theta x term.
struct BmIntegrand {
  double theta, w1, w2, v2, scale;

  double operator()(double x) const {
    const double det = 1.0 - theta * theta;
    const double cross = 2.0 * w1 * w2 * theta * x * x;
    const double tail = det * x * x * v2;
    const double b_plus = x * x + 2.0 * theta * x + 1.0;
    const double b_minus = x * x - 2.0 * theta * x + 1.0;
    double sum = 0.0;
    for (const auto [p, q] : {std::array{w1, w2}, std::array{w2, w1}}) {
      const double a = p * p - cross + q * q * x * x;
      const double plus = a * b_plus + tail;
      const double minus = a * b_minus + tail;
      sum += det * a * x *
             (1.0 / (plus * std::sqrt(plus)) + 1.0 / (minus * std::sqrt(minus)));
    }
    return scale * sum / (2.0 * pi);
  }
};

IntegralResult abs_scaled(double v, double theta, const transforms::Weights& w,
                          double scale, const QuadratureConfig& cfg) {
  check_model(theta, w);
  const double av = std::abs(v);
  const AbsIntegrand f{theta, w[0], w[1], v * v, scale};
  std::vector<double> cuts{1.0};
  if (av > 1.0) {
    cuts.push_back(1.0 / av);
    cuts.push_back(av);
  }
  return integrate_adaptive(f, 0.0, kInfinity, cfg, cuts);
}

IntegralResult bm_scaled(double v, double theta, const transforms::Weights& w,
                         double scale, const QuadratureConfig& cfg) {
  check_model(theta, w);
  const double av = std::abs(v);
  const BmIntegrand f{theta, w[0], w[1], v * v, scale};
  std::vector<double> cuts;
  if (av > 1.0) cuts.push_back(1.0 / av);
  return integrate_adaptive(f, 0.0, 1.0, cfg, cuts);
}

IntegralResult scaled(const DensityModel& model, double v, double scale,
                      const QuadratureConfig& cfg) {
  return model.kind() == DensityKind::AbsRatio
             ? abs_scaled(v, model.theta(), model.weights(), scale, cfg)
             : bm_scaled(v, model.theta(), model.weights(), scale, cfg);
}

}  // namespace

DensityModel::DensityModel(DensityKind kind, double theta, transforms::Weights w)
    : kind_(kind), theta_(theta), w_(std::move(w)) {
  check_model(theta_, w_);
}

IntegralResult gv_abs(double v, double theta, const transforms::Weights& w,
                      const QuadratureConfig& cfg) {
  return abs_scaled(v, theta, w, 1.0, cfg);
}

IntegralResult gv_bm(double v, double theta, const transforms::Weights& w,
                     const QuadratureConfig& cfg) {
  return bm_scaled(v, theta, w, 1.0, cfg);
}

IntegralResult gv(const DensityModel& model, double v,
                  const QuadratureConfig& cfg) {
  return scaled(model, v, 1.0, cfg);
}

IntegralResult gv_zero(const DensityModel& model, const QuadratureConfig& cfg) {
  const double t = model.theta();
  const double w1 = model.w1();
  const double w2 = model.w2();
  const double det = 1.0 - t * t;

  if (model.kind() == DensityKind::AbsRatio) {
    auto f = [=](double x) {
      const double a = w2 * w2 * x * x - 2.0 * t * w1 * w2 * x + w1 * w1;
      const double a32 = std::pow(a, 1.5);
      const double plus = std::pow(x * x + 2.0 * t * x + 1.0, 1.5);
      const double minus = std::pow(x * x - 2.0 * t * x + 1.0, 1.5);
      return det * a * x / (2.0 * pi * a32 * plus) +
             det * a * x / (2.0 * pi * a32 * minus);
    };
    const double cut = 1.0;
    return integrate_adaptive(f, 0.0, kInfinity, cfg, std::span(&cut, 1));
  }

  auto f = [=](double x) {
    const double plus = std::pow(x * x + 2.0 * t * x + 1.0, 1.5);
    const double minus = std::pow(x * x - 2.0 * t * x + 1.0, 1.5);
    const double a = w1 * w1 - 2.0 * w1 * w2 * t * x * x + w2 * w2 * x * x;
    const double b = w2 * w2 - 2.0 * w1 * w2 * t * x * x + w1 * w1 * x * x;
    const double a32 = std::pow(a, 1.5);
    const double b32 = std::pow(b, 1.5);
    return det * a * x / (2.0 * pi * a32 * plus) +
           det * a * x / (2.0 * pi * a32 * minus) +
           det * b * x / (2.0 * pi * b32 * plus) +
           det * b * x / (2.0 * pi * b32 * minus);
  };
  return integrate_adaptive(f, 0.0, 1.0, cfg);
}

IntegralResult dgv0_dtheta_at_zero(DensityKind kind, const transforms::Weights& w,
                                   const QuadratureConfig& cfg) {
  check_model(0.0, w);
  const double w1 = w[0];
  const double w2 = w[1];
  if (kind == DensityKind::AbsRatio) {
    auto f = [=](double x) {
      return w1 * w2 * x * x /
             (pi * std::pow(w1 * w1 + w2 * w2 * x * x, 1.5) *
              std::pow(x * x + 1.0, 1.5));
    };
    const double cut = 1.0;
    return integrate_adaptive(f, 0.0, kInfinity, cfg, std::span(&cut, 1));
  }
  auto f = [=](double x) {
    const double x3 = x * x * x;
    const double common = pi * std::pow(x * x + 1.0, 1.5);
    return w1 * w2 * x3 / (std::pow(w1 * w1 + w2 * w2 * x * x, 1.5) * common) +
           w1 * w2 * x3 / (std::pow(w2 * w2 + w1 * w1 * x * x, 1.5) * common);
  };
  return integrate_adaptive(f, 0.0, 1.0, cfg);
}

double finite_difference_derivative(DensityKind kind, const transforms::Weights& w,
                                    double h, const QuadratureConfig& cfg) {
  if (!(h > 0.0 && h <= 1e-3)) {
    std::ostringstream msg;
    msg << "finite-difference step must satisfy 0 < h <= 1e-3, got " << h;
    throw Error(ErrorKind::ParameterOutOfRange, msg.str());
  }
  const double up = gv_zero(DensityModel(kind, h, w), cfg).value;
  const double down = gv_zero(DensityModel(kind, -h, w), cfg).value;
  return (up - down) / (2.0 * h);
}

IntegralResult tail_functional(const DensityModel& model, double v,
                               const QuadratureConfig& cfg) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "tail functional needs a positive finite v");
  }
  return scaled(model, v, v * v, cfg);
}

IntegralResult normalization_check(const DensityModel& model,
                                   const QuadratureConfig& cfg) {
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol * 1e-3;
  inner.rel_tol = cfg.rel_tol * 1e-3;
  auto f = [&](double v) { return gv(model, v, inner).value; };
  const double cut = 1.0;
  IntegralResult half = integrate_adaptive(f, 0.0, kInfinity, cfg, std::span(&cut, 1));
  half.value *= 2.0;
  half.error_estimate *= 2.0;
  return half;
}

CauchyVerdict cauchy_verdict(const DensityModel& model, const QuadratureConfig& cfg,
                             double decision_tol) {
  if (!(decision_tol > 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "decision_tol must be positive");
  }
  CauchyVerdict out{.model = model};
  out.decision_tol = decision_tol;
  out.gv0 = gv_zero(model, cfg).value;
  out.gv0_minus_inv_pi = out.gv0 - inv_pi;
  out.tail_v = kVerdictTailPoint;
  out.tail_value = tail_functional(model, kVerdictTailPoint, cfg).value;
  out.normalization = normalization_check(model, cfg).value;
  out.normalization_ok = std::abs(out.normalization - 1.0) <= kNormalizationTol;
  out.is_cauchy =
      std::abs(out.gv0_minus_inv_pi) <= decision_tol && out.normalization_ok;
  return out;
}

}  // namespace heavytail::density
