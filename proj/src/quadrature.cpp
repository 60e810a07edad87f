#include "heavytail/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "heavytail/error.hpp"

namespace heavytail::quadrature {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "max_subdivisions must be at least 1");
  }
}

namespace {

// 21-point Kronrod abscissae on [0, 1]; odd entries are the 10-point Gauss
// abscissae. Last entry is the centre.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208965413380, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment kronrod21(const F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 10> lo{};
  std::array<double, 10> hi{};
  const double fc = f(centre);
  double gauss = 0.0;
  double kronrod = kKronrodWeights[10] * fc;
  double abs_sum = std::abs(kronrod);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kNodes[j];
    lo[j] = f(centre - dx);
    hi[j] = f(centre + dx);
    const double pair = lo[j] + hi[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(lo[j]) + std::abs(hi[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
  }

  const double scale = std::abs(half);
  const double value = kronrod * half;
  abs_sum *= scale;
  asc *= scale;
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  if (abs_sum > tiny / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  return {a, b, value, err};
}

}  // namespace

IntegralResult integrate_adaptive(const Integrand& f, double lower, double upper,
                                  const QuadratureConfig& cfg,
                                  std::span<const double> breakpoints) {
  cfg.validate();
  if (std::isnan(lower) || std::isnan(upper) || std::isinf(lower) ||
      (std::isinf(upper) && upper < 0.0) || upper < lower) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "integration limits must satisfy finite lower <= upper <= +inf");
  }
  if (upper == lower) return {};

  const bool infinite = std::isinf(upper);
  auto g = [&](double t) {
    double y;
    if (infinite) {
      const double s = 1.0 - t;
      y = f(lower + t / s) / (s * s);
    } else {
      y = f(t);
    }
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "integrand is not finite at t = " << t;
      throw Error(ErrorKind::Numerical, msg.str());
    }
    return y;
  };

  // Initial partition in the integration variable.
  const double t_hi = infinite ? 1.0 : upper;
  std::vector<double> cuts{lower};
  for (double p : breakpoints) {
    if (!(p > lower && p < upper)) continue;
    cuts.push_back(infinite ? (p - lower) / (1.0 + p - lower) : p);
  }
  cuts.push_back(t_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> pool;
  double total = 0.0;
  double total_err = 0.0;
  // Value and error of segments too narrow to bisect further.
  double frozen = 0.0;
  double frozen_err = 0.0;
  int segments = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = kronrod21(g, cuts[i], cuts[i + 1]);
    total += s.value;
    total_err += s.error;
    pool.push(s);
    ++segments;
  }

  auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

  while (total_err > tolerance()) {
    if (pool.empty()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "quadrature hit roundoff limit: value " << total << ", error "
          << total_err;
      throw Error(ErrorKind::NonConvergence, msg.str());
    }
    if (segments >= cfg.max_subdivisions) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "quadrature exhausted " << cfg.max_subdivisions
          << " subdivisions on [" << lower << ", " << upper << "]: value "
          << total << ", error " << total_err;
      throw Error(ErrorKind::NonConvergence, msg.str());
    }
    const Segment worst = pool.top();
    pool.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 100.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen += worst.value;
      frozen_err += worst.error;
      continue;
    }
    const Segment left = kronrod21(g, worst.a, mid);
    const Segment right = kronrod21(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    pool.push(left);
    pool.push(right);
    ++segments;
  }

  // Re-sum from the segments to shed drift from the running updates.
  double value = frozen;
  double err = frozen_err;
  while (!pool.empty()) {
    value += pool.top().value;
    err += pool.top().error;
    pool.pop();
  }
  return {value, err, segments};
}

}  // namespace heavytail::quadrature
