#include "heavytail/cauchy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "heavytail/error.hpp"

namespace heavytail::cauchy {

using std::numbers::pi;

CauchyScale::CauchyScale(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    std::ostringstream msg;
    msg << "Cauchy scale must be positive and finite, got " << sigma;
    throw Error(ErrorKind::ParameterOutOfRange, msg.str());
  }
}

double pdf(double x, CauchyScale sigma) noexcept {
  const double s = sigma.value();
  return s / (pi * (x * x + s * s));
}

double pdf_selfref(double x, CauchyScale sigma) noexcept {
  const double f0 = 1.0 / (pi * sigma.value());
  return f0 / (pi * pi * f0 * f0 * x * x + 1.0);
}

double cdf(double x, CauchyScale sigma) noexcept {
  const double s = sigma.value();
  // In the tails atan(x) + pi/2 = atan(-1/x) avoids cancellation.
  if (x < -s) return std::atan(-s / x) / pi;
  if (x > s) return 1.0 - std::atan(s / x) / pi;
  return 0.5 + std::atan(x / s) / pi;
}

double quantile(double p, CauchyScale sigma) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "Cauchy quantile needs 0 < p < 1, got " << p;
    throw Error(ErrorKind::DomainError, msg.str());
  }
  // tan(pi (p - 1/2)) loses relative accuracy near p = 1/2 when p is formed
  // as 1/2 + small; the reflected form keeps the lower tail exact.
  if (p < 0.5) return -sigma.value() / std::tan(pi * p);
  return sigma.value() / std::tan(pi * (1.0 - p));
}

SampleBatch sample(std::size_t count, CauchyScale sigma, std::uint64_t seed,
                   Execution exec) {
  if (count == 0) {
    throw Error(ErrorKind::ParameterOutOfRange, "count must be positive");
  }
  SampleBatch batch;
  batch.seed = seed;
  batch.values.resize(count);
  batch.meta.generator = "cauchy";
  batch.meta.count = count;
  par::fill_rows(batch.values, 1, seed, exec,
                 [sigma](par::Engine& engine, std::span<double> row) {
                   row[0] = draw(engine, sigma);
                 });
  return batch;
}

SpectralMeasure& SpectralMeasure::add_atom(std::vector<double> direction,
                                           double pair_mass) {
  if (direction.size() != dim_) {
    throw Error(ErrorKind::DimensionMismatch,
                "spectral atom direction has the wrong dimension");
  }
  double norm2 = 0.0;
  for (double s : direction) norm2 += s * s;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "spectral atom direction must be a unit vector");
  }
  if (!(pair_mass > 0.0) || !std::isfinite(pair_mass)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "spectral atom mass must be positive");
  }
  for (const Atom& a : atoms_) {
    double dot = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) dot += a.direction[j] * direction[j];
    if (std::abs(std::abs(dot) - 1.0) <= 1e-12) {
      throw Error(ErrorKind::DomainError,
                  "spectral atom duplicates an existing direction up to sign");
    }
  }
  atoms_.push_back({std::move(direction), pair_mass});
  return *this;
}

SpectralMeasure SpectralMeasure::axes(std::size_t dim) {
  SpectralMeasure m(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<double> e(dim, 0.0);
    e[j] = 1.0;
    m.add_atom(std::move(e), 1.0);
  }
  return m;
}

SpectralMeasure SpectralMeasure::diagonal(std::size_t dim) {
  const double root = std::sqrt(static_cast<double>(dim));
  SpectralMeasure m(dim);
  m.add_atom(std::vector<double>(dim, 1.0 / root), root);
  return m;
}

double SpectralMeasure::marginal_scale(std::size_t coord) const {
  if (coord >= dim_) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate out of range");
  }
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.pair_mass * std::abs(a.direction[coord]);
  return s;
}

double mv_charfn(std::span<const double> t, const SpectralMeasure& gamma) {
  if (t.size() != gamma.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "argument and spectral measure dimensions differ");
  }
  double exponent = 0.0;
  for (const auto& a : gamma.atoms()) {
    double dot = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) dot += t[j] * a.direction[j];
    exponent += a.pair_mass * std::abs(dot);
  }
  return std::exp(-exponent);
}

SampleBatch sample_mv(const SpectralMeasure& gamma, std::size_t count,
                      std::uint64_t seed, Execution exec) {
  if (count == 0) {
    throw Error(ErrorKind::ParameterOutOfRange, "count must be positive");
  }
  const std::size_t n = gamma.dim();
  SampleBatch batch;
  batch.dim = n;
  batch.seed = seed;
  batch.values.resize(count * n);
  batch.meta.generator = "mv_cauchy";
  batch.meta.count = count;
  const CauchyScale standard(1.0);
  par::fill_rows(batch.values, n, seed, exec,
                 [&](par::Engine& engine, std::span<double> row) {
                   std::fill(row.begin(), row.end(), 0.0);
                   for (const auto& a : gamma.atoms()) {
                     const double w = a.pair_mass * draw(engine, standard);
                     for (std::size_t j = 0; j < n; ++j) row[j] += w * a.direction[j];
                   }
                 });
  return batch;
}

}  // namespace heavytail::cauchy
