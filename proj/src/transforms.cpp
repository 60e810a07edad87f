#include "heavytail/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "heavytail/error.hpp"
#include "heavytail/stats.hpp"

namespace heavytail::transforms {

Weights::Weights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) {
    throw Error(ErrorKind::ParameterOutOfRange, "weights must be non-empty");
  }
  double sum = 0.0;
  for (double x : w_) {
    if (!(x >= 0.0 && x <= 1.0)) {
      std::ostringstream msg;
      msg << "weights must lie in [0, 1], got " << x;
      throw Error(ErrorKind::ParameterOutOfRange, msg.str());
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights must sum to 1, got " << sum;
    throw Error(ErrorKind::ParameterOutOfRange, msg.str());
  }
}

std::string_view to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::RatioPM: return "pm";
    case TransformKind::AbsRatio: return "abs";
    case TransformKind::StoppedBM: return "bm";
  }
  return "?";
}

std::optional<TransformKind> parse_kind(std::string_view name) noexcept {
  if (name == "pm") return TransformKind::RatioPM;
  if (name == "abs") return TransformKind::AbsRatio;
  if (name == "bm") return TransformKind::StoppedBM;
  return std::nullopt;
}

namespace {

void check_dims(const gauss::CovarianceMatrix& sigma, const Weights& w) {
  if (sigma.dim() != w.size()) {
    std::ostringstream msg;
    msg << "covariance dimension " << sigma.dim() << " does not match "
        << w.size() << " weights";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

SampleBatch make_batch(std::string name, const gauss::CovarianceMatrix& sigma,
                       const Weights& w, std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw Error(ErrorKind::ParameterOutOfRange, "count must be positive");
  }
  SampleBatch batch;
  batch.seed = seed;
  batch.values.resize(count);
  batch.meta.generator = std::move(name);
  batch.meta.covariance = sigma.entries();
  batch.meta.weights = w.values();
  batch.meta.count = count;
  return batch;
}

// sum_j w_j X_j / d(Y_j) where d is the identity or the absolute value.
// A draw with a denominator that is exactly zero is discarded and redrawn.
template <bool Absolute>
SampleBatch sample_ratio(std::string name, const gauss::CovarianceMatrix& sigma,
                         const Weights& w, std::size_t count,
                         std::uint64_t seed, Execution exec) {
  check_dims(sigma, w);
  const auto factor = gauss::cholesky(sigma);
  SampleBatch batch = make_batch(std::move(name), sigma, w, count, seed);
  const std::size_t n = sigma.dim();

  par::fill_rows(batch.values, 1, seed, exec,
                 [&](par::Engine& engine, std::span<double> row) {
                   auto buf = par::scratch(3 * n);
                   double* z = buf.data();
                   double* x = z + n;
                   double* y = x + n;
                   for (;;) {
                     gauss::draw_mvn(engine, factor, z, x);
                     gauss::draw_mvn(engine, factor, z, y);
                     if (std::any_of(y, y + n, [](double v) { return v == 0.0; })) {
                       continue;
                     }
                     double acc = 0.0;
                     for (std::size_t j = 0; j < n; ++j) {
                       acc += w[j] * x[j] / (Absolute ? std::abs(y[j]) : y[j]);
                     }
                     row[0] = acc;
                     return;
                   }
                 });
  return batch;
}

}  // namespace

SampleBatch sample_ratio_pm(const gauss::CovarianceMatrix& sigma,
                            const Weights& w, std::size_t count,
                            std::uint64_t seed, Execution exec) {
  return sample_ratio<false>("ratio_pm", sigma, w, count, seed, exec);
}

SampleBatch sample_abs_ratio(const gauss::CovarianceMatrix& sigma,
                             const Weights& w, std::size_t count,
                             std::uint64_t seed, Execution exec) {
  return sample_ratio<true>("abs_ratio", sigma, w, count, seed, exec);
}

SampleBatch sample_stopped_bm_path(const gauss::CovarianceMatrix& sigma,
                                   const Weights& w, std::size_t count,
                                   std::uint64_t seed, Execution exec) {
  check_dims(sigma, w);
  const auto factor = gauss::cholesky(sigma);
  SampleBatch batch = make_batch("stopped_bm_path", sigma, w, count, seed);
  const std::size_t n = sigma.dim();

  par::fill_rows(batch.values, 1, seed, exec,
                 [&](par::Engine& engine, std::span<double> row) {
                   thread_local std::vector<std::size_t> order;
                   order.resize(n);
                   auto buf = par::scratch(5 * n);
                   double* z = buf.data();
                   double* y = z + n;
                   double* times = y + n;
                   double* pos = times + n;
                   double* step = pos + n;
                   for (;;) {
                     gauss::draw_mvn(engine, factor, z, y);
                     bool finite = true;
                     for (std::size_t j = 0; j < n; ++j) {
                       times[j] = 1.0 / (y[j] * y[j]);
                       finite = finite && std::isfinite(times[j]);
                     }
                     if (!finite) continue;

                     std::iota(order.begin(), order.end(), std::size_t{0});
                     std::sort(order.begin(), order.end(),
                               [&](std::size_t a, std::size_t b) {
                                 return times[a] < times[b];
                               });

                     std::fill(pos, pos + n, 0.0);
                     double now = 0.0;
                     double acc = 0.0;
                     for (std::size_t k = 0; k < n; ++k) {
                       const std::size_t j = order[k];
                       const double dt = times[j] - now;
                       gauss::draw_mvn(engine, factor, z, step);
                       const double scale = std::sqrt(dt);
                       for (std::size_t i = 0; i < n; ++i) pos[i] += scale * step[i];
                       now = times[j];
                       acc += w[j] * pos[j];
                     }
                     row[0] = acc;
                     return;
                   }
                 });
  return batch;
}

double stopped_bm_conditional_variance(const gauss::ThetaCovariance& cov,
                                       const Weights& w, double y1, double y2) {
  const double t = cov.theta();
  const double det = 1.0 - t * t;
  const double s1 = y1 * y1;
  const double s2 = y2 * y2;
  return w[0] * w[0] / (s1 * det) - 2.0 * w[0] * w[1] * t / (std::max(s1, s2) * det) +
         w[1] * w[1] / (s2 * det);
}

SampleBatch sample_stopped_bm_mixture(const gauss::ThetaCovariance& cov,
                                      const Weights& w, std::size_t count,
                                      std::uint64_t seed, Execution exec) {
  if (w.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch,
                "the mixture sampler is defined for two coordinates only");
  }
  const auto sigma = cov.covariance();
  const auto factor = gauss::cholesky(sigma);
  SampleBatch batch = make_batch("stopped_bm_mixture", sigma, w, count, seed);
  batch.meta.theta = cov.theta();

  par::fill_rows(batch.values, 1, seed, exec,
                 [&](par::Engine& engine, std::span<double> row) {
                   double z[2];
                   double y[2];
                   for (;;) {
                     gauss::draw_mvn(engine, factor, z, y);
                     // Stopping times 1/y^2 must be finite.
                     if (!std::isfinite(1.0 / (y[0] * y[0])) ||
                         !std::isfinite(1.0 / (y[1] * y[1]))) {
                       continue;
                     }
                     const double var =
                         stopped_bm_conditional_variance(cov, w, y[0], y[1]);
                     if (!(var > 0.0) || !std::isfinite(var)) {
                       std::ostringstream msg;
                       msg << "invalid conditional variance " << var
                           << " at y = (" << y[0] << ", " << y[1] << ")";
                       throw Error(ErrorKind::Numerical, msg.str());
                     }
                     row[0] = std::sqrt(var) * engine.gaussian();
                     return;
                   }
                 });
  return batch;
}

SampleBatch sample(TransformKind kind, const gauss::CovarianceMatrix& sigma,
                   const Weights& w, std::size_t count, std::uint64_t seed,
                   Execution exec) {
  switch (kind) {
    case TransformKind::RatioPM:
      return sample_ratio_pm(sigma, w, count, seed, exec);
    case TransformKind::AbsRatio:
      return sample_abs_ratio(sigma, w, count, seed, exec);
    case TransformKind::StoppedBM:
      return sample_stopped_bm_path(sigma, w, count, seed, exec);
  }
  throw Error(ErrorKind::ParameterOutOfRange, "unknown transform kind");
}

bool bm_selfsimilarity_check(const gauss::CovarianceMatrix& sigma, double c,
                             std::size_t count, std::uint64_t seed) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::ParameterOutOfRange, "scale c must be positive");
  }
  if (count == 0) {
    throw Error(ErrorKind::ParameterOutOfRange, "count must be positive");
  }
  constexpr int kSteps = 8;
  const auto factor = gauss::cholesky(sigma);
  const std::size_t n = sigma.dim();

  // Two independent substream families: even seeds for the walked path, odd
  // for the rescaled single step.
  std::vector<double> walked(count * n);
  std::vector<double> rescaled(count * n);
  const double dt = c / kSteps;
  par::fill_rows(walked, n, seed * 2, Execution::Parallel,
                 [&](par::Engine& engine, std::span<double> row) {
                   auto buf = par::scratch(2 * n);
                   std::fill(row.begin(), row.end(), 0.0);
                   for (int s = 0; s < kSteps; ++s) {
                     gauss::draw_mvn(engine, factor, buf.data(), buf.data() + n);
                     for (std::size_t i = 0; i < n; ++i) {
                       row[i] += std::sqrt(dt) * buf[n + i];
                     }
                   }
                 });
  par::fill_rows(rescaled, n, seed * 2 + 1, Execution::Parallel,
                 [&](par::Engine& engine, std::span<double> row) {
                   auto buf = par::scratch(n);
                   gauss::draw_mvn(engine, factor, buf.data(), row.data());
                   for (double& x : row) x *= std::sqrt(c);
                 });

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> a(count);
    std::vector<double> b(count);
    for (std::size_t i = 0; i < count; ++i) {
      a[i] = walked[i * n + j];
      b[i] = rescaled[i * n + j];
    }
    const auto r = stats::ks_two_sample(stats::EmpiricalSample(std::move(a)),
                                        stats::EmpiricalSample(std::move(b)),
                                        0.01);
    if (!r.passes) return false;
  }
  return true;
}

}  // namespace heavytail::transforms
