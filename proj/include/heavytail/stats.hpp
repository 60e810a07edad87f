#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "heavytail/parallel.hpp"

namespace heavytail::stats {

class EmpiricalSample {
 public:
  // Sorts a copy. Throws EmptySample for empty input.
  explicit EmpiricalSample(std::vector<double> values);

  std::size_t count() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_values() const noexcept { return sorted_; }
  // Fraction of values <= x.
  double ecdf(double x) const noexcept;

 private:
  std::vector<double> sorted_;
};

struct KSResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool passes = false;
};

// Quantile of the asymptotic Kolmogorov distribution, i.e. c with
// P(K > c) = alpha. Only alpha in {0.05, 0.01, 0.001} is accepted.
double kolmogorov_critical(double alpha);

// Survival function P(K > x) of the Kolmogorov distribution.
double kolmogorov_survival(double x) noexcept;

using Cdf = std::function<double(double)>;

KSResult ks_one_sample(const EmpiricalSample& sample, const Cdf& cdf,
                       double alpha);

KSResult ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b,
                       double alpha);

struct HistogramBin {
  double center;
  double density;
  double standard_error;
};

// Bins of width `bin_width` centred on lower, lower + bin_width, ..., upper.
// Density is count / (n bin_width) with n the full sample size; the standard
// error is sqrt(p (1 - p) / n) / bin_width.
std::vector<HistogramBin> histogram_density(std::span<const double> sample,
                                            double bin_width, double lower,
                                            double upper,
                                            Execution exec = Execution::Parallel);

}  // namespace heavytail::stats
