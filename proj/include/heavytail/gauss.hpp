#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/parallel.hpp"

namespace heavytail {

// Reproducible batch of draws. Vector-valued batches store `dim` doubles per
// draw, row-major; scalar batches have dim == 1.
struct SampleBatch {
  struct Meta {
    std::string generator;
    std::optional<double> theta;
    std::vector<double> covariance;  // row-major, empty when theta is used
    std::vector<double> weights;
    std::size_t count = 0;
  };

  std::vector<double> values;
  std::size_t dim = 1;
  std::uint64_t seed = 0;
  Meta meta;

  std::size_t count() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  double at(std::size_t draw, std::size_t coord = 0) const {
    return values.at(draw * dim + coord);
  }
  std::vector<double> column(std::size_t coord) const;
};

namespace gauss {

// Symmetric positive definite matrix with positive variances, stored row-major.
class CovarianceMatrix {
 public:
  // Symmetrizes (A + A^T)/2 when the asymmetry is within rounding and rejects
  // it otherwise. Throws ParameterOutOfRange / DimensionMismatch.
  CovarianceMatrix(std::size_t dim, std::vector<double> entries);

  static CovarianceMatrix identity(std::size_t dim);
  static CovarianceMatrix diagonal(const std::vector<double>& variances);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * dim_ + j];
  }
  const std::vector<double>& entries() const noexcept { return entries_; }
  double max_diagonal() const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

// The 2x2 equal-variance family whose inverse is [[1, theta], [theta, 1]].
class ThetaCovariance {
 public:
  explicit ThetaCovariance(double theta);

  double theta() const noexcept { return theta_; }
  double determinant_of_inverse() const noexcept { return 1.0 - theta_ * theta_; }
  CovarianceMatrix inverse() const;
  CovarianceMatrix covariance() const;

 private:
  double theta_;
};

// Lower-triangular L with L L^T equal to the source covariance.
class CholeskyFactor {
 public:
  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * dim_ + j];
  }
  const std::vector<double>& entries() const noexcept { return entries_; }

  // y = L z
  void apply(const double* z, double* y) const noexcept;
  CovarianceMatrix reconstruct() const;

 private:
  friend CholeskyFactor cholesky(const CovarianceMatrix& sigma);
  CholeskyFactor(std::size_t dim, std::vector<double> entries)
      : dim_(dim), entries_(std::move(entries)) {}

  std::size_t dim_;
  std::vector<double> entries_;
};

inline constexpr double kPivotTolerance = 1e-12;

CovarianceMatrix theta_to_covariance(double theta);

// Throws NotPositiveDefinite if a pivot is <= kPivotTolerance * max diagonal.
CholeskyFactor cholesky(const CovarianceMatrix& sigma);

SampleBatch sample_mvn(const CholeskyFactor& factor, std::size_t count,
                       std::uint64_t seed,
                       Execution exec = Execution::Parallel);

// Draws one centered normal vector with covariance L L^T into `out`, using
// `scratch` (length dim) for the standard normals.
void draw_mvn(par::Engine& engine, const CholeskyFactor& factor, double* scratch,
              double* out);

}  // namespace gauss
}  // namespace heavytail
