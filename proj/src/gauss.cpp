#include "heavytail/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heavytail/error.hpp"

namespace heavytail {

std::vector<double> SampleBatch::column(std::size_t coord) const {
  if (coord >= dim) {
    throw Error(ErrorKind::DimensionMismatch, "column index out of range");
  }
  std::vector<double> out(count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i * dim + coord];
  return out;
}

namespace gauss {

CovarianceMatrix::CovarianceMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0 || entries_.size() != dim_ * dim_) {
    throw Error(ErrorKind::DimensionMismatch,
                "covariance matrix needs dim*dim entries");
  }
  double scale = 1.0;
  for (double e : entries_) {
    if (!std::isfinite(e)) {
      throw Error(ErrorKind::ParameterOutOfRange,
                  "covariance matrix has a non-finite entry");
    }
    scale = std::max(scale, std::abs(e));
  }
  const double sym_tol = 1e-12 * scale;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!(entries_[i * dim_ + i] > 0.0)) {
      throw Error(ErrorKind::ParameterOutOfRange,
                  "covariance matrix needs positive variances");
    }
    for (std::size_t j = i + 1; j < dim_; ++j) {
      double& a = entries_[i * dim_ + j];
      double& b = entries_[j * dim_ + i];
      if (std::abs(a - b) > sym_tol) {
        std::ostringstream msg;
        msg << "covariance matrix is not symmetric at (" << i << ", " << j
            << ")";
        throw Error(ErrorKind::ParameterOutOfRange, msg.str());
      }
      a = b = 0.5 * (a + b);
    }
  }
}

CovarianceMatrix CovarianceMatrix::identity(std::size_t dim) {
  return diagonal(std::vector<double>(dim, 1.0));
}

CovarianceMatrix CovarianceMatrix::diagonal(const std::vector<double>& variances) {
  const std::size_t n = variances.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = variances[i];
  return CovarianceMatrix(n, std::move(e));
}

double CovarianceMatrix::max_diagonal() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) m = std::max(m, (*this)(i, i));
  return m;
}

ThetaCovariance::ThetaCovariance(double theta) : theta_(theta) {
  if (!(std::abs(theta) < 1.0)) {
    std::ostringstream msg;
    msg << "theta must lie in (-1, 1), got " << theta;
    throw Error(ErrorKind::ParameterOutOfRange, msg.str());
  }
}

CovarianceMatrix ThetaCovariance::inverse() const {
  return CovarianceMatrix(2, {1.0, theta_, theta_, 1.0});
}

CovarianceMatrix ThetaCovariance::covariance() const {
  const double s = 1.0 / (1.0 - theta_ * theta_);
  return CovarianceMatrix(2, {s, -theta_ * s, -theta_ * s, s});
}

CovarianceMatrix theta_to_covariance(double theta) {
  return ThetaCovariance(theta).covariance();
}

void CholeskyFactor::apply(const double* z, double* y) const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    const double* row = entries_.data() + i * dim_;
    for (std::size_t k = 0; k <= i; ++k) acc += row[k] * z[k];
    y[i] = acc;
  }
}

CovarianceMatrix CholeskyFactor::reconstruct() const {
  std::vector<double> out(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= std::min(i, j); ++k) {
        acc += (*this)(i, k) * (*this)(j, k);
      }
      out[i * dim_ + j] = acc;
    }
  }
  return CovarianceMatrix(dim_, std::move(out));
}

CholeskyFactor cholesky(const CovarianceMatrix& sigma) {
  const std::size_t n = sigma.dim();
  const double tol = kPivotTolerance * sigma.max_diagonal();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = sigma(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l[j * n + k] * l[j * n + k];
    if (!(pivot > tol)) {
      std::ostringstream msg;
      msg << "matrix is not positive definite (pivot " << j << " = " << pivot
          << ")";
      throw Error(ErrorKind::NotPositiveDefinite, msg.str());
    }
    const double d = std::sqrt(pivot);
    l[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = sigma(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = acc / d;
    }
  }
  return CholeskyFactor(n, std::move(l));
}

void draw_mvn(par::Engine& engine, const CholeskyFactor& factor, double* scratch,
              double* out) {
  for (std::size_t i = 0; i < factor.dim(); ++i) scratch[i] = engine.gaussian();
  factor.apply(scratch, out);
}

SampleBatch sample_mvn(const CholeskyFactor& factor, std::size_t count,
                       std::uint64_t seed, Execution exec) {
  if (count == 0) {
    throw Error(ErrorKind::ParameterOutOfRange, "count must be positive");
  }
  const std::size_t n = factor.dim();
  SampleBatch batch;
  batch.dim = n;
  batch.seed = seed;
  batch.values.resize(count * n);
  batch.meta.generator = "mvn";
  batch.meta.covariance = factor.reconstruct().entries();
  batch.meta.count = count;

  par::fill_rows(batch.values, n, seed, exec,
                 [&](par::Engine& engine, std::span<double> row) {
                   draw_mvn(engine, factor, par::scratch(n).data(), row.data());
                 });
  return batch;
}

}  // namespace gauss
}  // namespace heavytail
