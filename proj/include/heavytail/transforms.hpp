#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "heavytail/gauss.hpp"
#include "heavytail/parallel.hpp"

namespace heavytail::transforms {

// Convex-combination coefficients: 0 <= w_j <= 1 and |sum w_j - 1| <= 1e-12.
class Weights {
 public:
  explicit Weights(std::vector<double> w);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t j) const noexcept { return w_[j]; }
  const std::vector<double>& values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

enum class TransformKind { RatioPM, AbsRatio, StoppedBM };

std::string_view to_string(TransformKind kind) noexcept;
// Accepts the CLI spellings "pm", "abs", "bm".
std::optional<TransformKind> parse_kind(std::string_view name) noexcept;

// sum_j w_j X_j / Y_j with X, Y iid N(0, sigma).
SampleBatch sample_ratio_pm(const gauss::CovarianceMatrix& sigma,
                            const Weights& w, std::size_t count,
                            std::uint64_t seed,
                            Execution exec = Execution::Parallel);

// sum_j w_j X_j / |Y_j|.
SampleBatch sample_abs_ratio(const gauss::CovarianceMatrix& sigma,
                             const Weights& w, std::size_t count,
                             std::uint64_t seed,
                             Execution exec = Execution::Parallel);

// sum_j w_j X_j(Y_j^-2) for a vector Brownian motion X with X(1) ~ N(0, sigma),
// built by independent increments at the sorted stopping times.
SampleBatch sample_stopped_bm_path(const gauss::CovarianceMatrix& sigma,
                                   const Weights& w, std::size_t count,
                                   std::uint64_t seed,
                                   Execution exec = Execution::Parallel);

// Conditional variance of the two-coordinate stopped-BM combination given
// (y1, y2), in the theta parametrization.
double stopped_bm_conditional_variance(const gauss::ThetaCovariance& cov,
                                       const Weights& w, double y1, double y2);

// Same law as sample_stopped_bm_path for n = 2, drawn as a normal mixture
// over (Y1, Y2). Throws DimensionMismatch for n != 2 and Numerical if a
// conditional variance is not positive.
SampleBatch sample_stopped_bm_mixture(const gauss::ThetaCovariance& cov,
                                      const Weights& w, std::size_t count,
                                      std::uint64_t seed,
                                      Execution exec = Execution::Parallel);

// Dispatch by kind; StoppedBM uses the path sampler.
SampleBatch sample(TransformKind kind, const gauss::CovarianceMatrix& sigma,
                   const Weights& w, std::size_t count, std::uint64_t seed,
                   Execution exec = Execution::Parallel);

// Compares X(c) built from eight Brownian increments on [0, c] against
// sqrt(c) X(1) drawn in one step, coordinate by coordinate, with a two-sample
// KS test at alpha = 0.01. True when every coordinate passes.
bool bm_selfsimilarity_check(const gauss::CovarianceMatrix& sigma, double c,
                             std::size_t count, std::uint64_t seed);

}  // namespace heavytail::transforms
