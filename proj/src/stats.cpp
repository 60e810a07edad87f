#include "heavytail/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "heavytail/error.hpp"

namespace heavytail::stats {

EmpiricalSample::EmpiricalSample(std::vector<double> values)
    : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw Error(ErrorKind::EmptySample, "empirical sample needs at least one value");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalSample::ecdf(double x) const noexcept {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double kolmogorov_survival(double x) noexcept {
  if (x <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (x < 1.18) {
    // Jacobi-theta form of the CDF converges quickly for small x.
    const double root = std::sqrt(2.0 * pi) / x;
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(-m * m * pi * pi / (8.0 * x * x));
    }
    return 1.0 - root * cdf;
  }
  double sum = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
  }
  return 2.0 * sum;
}

double kolmogorov_critical(double alpha) {
  if (alpha != 0.05 && alpha != 0.01 && alpha != 0.001) {
    std::ostringstream msg;
    msg << "alpha must be one of 0.05, 0.01, 0.001; got " << alpha;
    throw Error(ErrorKind::ParameterOutOfRange, msg.str());
  }
  double lo = 0.5;
  double hi = 3.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KSResult ks_one_sample(const EmpiricalSample& sample, const Cdf& cdf,
                       double alpha) {
  const double crit = kolmogorov_critical(alpha);
  const auto& xs = sample.sorted_values();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  KSResult r;
  r.statistic = d;
  r.critical_value = crit / std::sqrt(n);
  r.passes = r.statistic < r.critical_value;
  return r;
}

KSResult ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b,
                       double alpha) {
  const double crit = kolmogorov_critical(alpha);
  const auto& xa = a.sorted_values();
  const auto& xb = b.sorted_values();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  KSResult r;
  r.statistic = d;
  r.critical_value = crit * std::sqrt((na + nb) / (na * nb));
  r.passes = r.statistic < r.critical_value;
  return r;
}

std::vector<HistogramBin> histogram_density(std::span<const double> sample,
                                            double bin_width, double lower,
                                            double upper, Execution exec) {
  if (sample.empty()) {
    throw Error(ErrorKind::EmptySample, "histogram needs a non-empty sample");
  }
  if (!(bin_width > 0.0) || !(upper >= lower) || !std::isfinite(upper - lower)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "histogram needs bin_width > 0 and a finite range lower <= upper");
  }
  const auto bins =
      static_cast<std::size_t>(std::llround((upper - lower) / bin_width)) + 1;
  std::vector<std::uint64_t> counts(bins, 0);

  auto bin_of = [&](double x) -> std::int64_t {
    const double k = std::floor((x - lower) / bin_width + 0.5);
    if (!(k >= 0.0 && k < static_cast<double>(bins))) return -1;
    return static_cast<std::int64_t>(k);
  };

  const auto n = static_cast<std::int64_t>(sample.size());
  if (exec == Execution::Serial) {
    for (double x : sample) {
      if (const auto k = bin_of(x); k >= 0) ++counts[static_cast<std::size_t>(k)];
    }
  } else {
#pragma omp parallel
    {
      std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
      for (std::int64_t i = 0; i < n; ++i) {
        if (const auto k = bin_of(sample[static_cast<std::size_t>(i)]); k >= 0) {
          ++local[static_cast<std::size_t>(k)];
        }
      }
#pragma omp critical(heavytail_histogram_merge)
      for (std::size_t k = 0; k < bins; ++k) counts[k] += local[k];
    }
  }

  const double total = static_cast<double>(sample.size());
  std::vector<HistogramBin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = static_cast<double>(counts[k]) / total;
    out[k].center = lower + static_cast<double>(k) * bin_width;
    out[k].density = p / bin_width;
    out[k].standard_error = std::sqrt(p * (1.0 - p) / total) / bin_width;
  }
  return out;
}

}  // namespace heavytail::stats
