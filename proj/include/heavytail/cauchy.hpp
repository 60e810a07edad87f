#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "heavytail/gauss.hpp"
#include "heavytail/parallel.hpp"

namespace heavytail::cauchy {

class CauchyScale {
 public:
  // Throws ParameterOutOfRange unless sigma > 0 and finite.
  explicit CauchyScale(double sigma);
  double value() const noexcept { return sigma_; }

 private:
  double sigma_;
};

// sigma / (pi (x^2 + sigma^2))
double pdf(double x, CauchyScale sigma) noexcept;

// The same density written through its value at the origin:
// f(0) / (pi^2 f(0)^2 x^2 + 1).
double pdf_selfref(double x, CauchyScale sigma) noexcept;

double cdf(double x, CauchyScale sigma) noexcept;

// Throws DomainError unless 0 < p < 1.
double quantile(double p, CauchyScale sigma);

inline double draw(par::Engine& engine, CauchyScale sigma) {
  return quantile(engine.open_uniform(), sigma);
}

SampleBatch sample(std::size_t count, CauchyScale sigma, std::uint64_t seed,
                   Execution exec = Execution::Parallel);

// Finite symmetric atomic measure on the unit sphere. Each stored atom stands
// for the pair {+s, -s} carrying total mass `pair_mass`, so the characteristic
// function exponent is sum_k pair_mass_k |<t, s_k>|.
class SpectralMeasure {
 public:
  struct Atom {
    std::vector<double> direction;
    double pair_mass;
  };

  explicit SpectralMeasure(std::size_t dim) : dim_(dim) {}

  // Throws DimensionMismatch, ParameterOutOfRange (non-unit direction,
  // non-positive mass) or DomainError (direction duplicates an existing atom
  // up to sign).
  SpectralMeasure& add_atom(std::vector<double> direction, double pair_mass);

  // Unit masses on e_1..e_n: independent standard Cauchy coordinates.
  static SpectralMeasure axes(std::size_t dim);
  // Single atom on (1,...,1)/sqrt(n) with mass sqrt(n): equal standard
  // Cauchy coordinates.
  static SpectralMeasure diagonal(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  // Scale of coordinate j: sum_k pair_mass_k |s_kj|.
  double marginal_scale(std::size_t coord) const;

 private:
  std::size_t dim_;
  std::vector<Atom> atoms_;
};

// exp(-sum_k pair_mass_k |<t, s_k>|). Throws DimensionMismatch.
double mv_charfn(std::span<const double> t, const SpectralMeasure& gamma);

// X = sum_k pair_mass_k W_k s_k with W_k iid standard Cauchy.
SampleBatch sample_mv(const SpectralMeasure& gamma, std::size_t count,
                      std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace heavytail::cauchy
