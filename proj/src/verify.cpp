#include "heavytail/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heavytail/cauchy.hpp"
#include "heavytail/density.hpp"
#include "heavytail/error.hpp"
#include "heavytail/gauss.hpp"
#include "heavytail/stats.hpp"
#include "heavytail/transforms.hpp"

namespace heavytail::verify {

namespace {

using std::numbers::inv_pi;
using std::numbers::pi;
using density::DensityKind;
using density::DensityModel;
using transforms::Weights;

constexpr double kAlpha = 0.01;
constexpr std::size_t kDraws = 1'000'000;
constexpr std::size_t kHistogramDraws = 10'000'000;

const std::array<double, 6> kPmThetas = {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9};
const std::array<std::array<double, 2>, 3> kWeightGrid = {
    {{0.5, 0.5}, {0.3, 0.7}, {0.9, 0.1}}};

std::string kind_name(DensityKind k) { return density::to_string(k); }

stats::KSResult ks_vs_standard_cauchy(std::vector<double> values) {
  const cauchy::CauchyScale one(1.0);
  return stats::ks_one_sample(stats::EmpiricalSample(std::move(values)),
                              [one](double x) { return cauchy::cdf(x, one); },
                              kAlpha);
}

void c1_cauchy_identity(std::ostringstream& why, std::ostringstream& info) {
  double worst = 0.0;
  constexpr int kPoints = 10'000;
  for (double s : {0.1, 1.0, 10.0}) {
    const cauchy::CauchyScale sigma(s);
    for (int i = 0; i < kPoints; ++i) {
      const double x = -100.0 + 200.0 * i / (kPoints - 1);
      worst = std::max(worst, std::abs(cauchy::pdf(x, sigma) -
                                        cauchy::pdf_selfref(x, sigma)));
    }
  }
  info << "max |pdf - selfref| = " << worst;
  if (!(worst < 1e-12)) why << "deviation " << worst << " >= 1e-12";
}

void c2_pillai_meng(std::ostringstream& why, std::ostringstream& info) {
  std::uint64_t seed = 2'000;
  double worst_ratio = 0.0;
  for (double theta : kPmThetas) {
    for (const auto& w : kWeightGrid) {
      const auto batch = transforms::sample_ratio_pm(
          gauss::theta_to_covariance(theta), Weights({w[0], w[1]}), kDraws, seed++);
      const auto r = ks_vs_standard_cauchy(batch.values);
      worst_ratio = std::max(worst_ratio, r.statistic / r.critical_value);
      if (!r.passes) {
        why << "theta=" << theta << " w=(" << w[0] << "," << w[1]
            << ") D=" << r.statistic << " crit=" << r.critical_value << "; ";
      }
    }
  }
  info << "18 combinations, max D/crit = " << worst_ratio;
}

void c3_diagonal(std::ostringstream& why, std::ostringstream& info) {
  const cauchy::CauchyScale one(1.0);
  double worst = 0.0;
  for (const auto& w : kWeightGrid) {
    const Weights weights({w[0], w[1]});
    for (int i = 0; i <= 100; ++i) {
      const double v = -5.0 + 0.1 * i;
      const double ref = cauchy::pdf(v, one);
      worst = std::max(worst, std::abs(density::gv_abs(v, 0.0, weights).value - ref));
      worst = std::max(worst, std::abs(density::gv_bm(v, 0.0, weights).value - ref));
    }
  }
  info << "max quadrature deviation " << worst;
  if (!(worst < 1e-8)) why << "quadrature deviation " << worst << " >= 1e-8; ";

  std::uint64_t seed = 3'000;
  const auto identity = gauss::theta_to_covariance(0.0);
  for (auto kind : {transforms::TransformKind::RatioPM,
                    transforms::TransformKind::AbsRatio,
                    transforms::TransformKind::StoppedBM}) {
    for (const auto& w : {kWeightGrid[0], kWeightGrid[1]}) {
      const auto batch =
          transforms::sample(kind, identity, Weights({w[0], w[1]}), kDraws, seed++);
      const auto r = ks_vs_standard_cauchy(batch.values);
      if (!r.passes) {
        why << transforms::to_string(kind) << " w=(" << w[0] << "," << w[1]
            << ") KS D=" << r.statistic << " crit=" << r.critical_value << "; ";
      }
    }
  }
  info << "; 6 sample batches KS-tested";
}

void c4_non_cauchy(std::ostringstream& why, std::ostringstream& info) {
  const Weights half({0.5, 0.5});
  double smallest = 1.0;
  for (auto kind : {DensityKind::AbsRatio, DensityKind::StoppedBM}) {
    for (double theta : {0.05, 0.1, 0.2}) {
      const double dev =
          density::gv_zero(DensityModel(kind, theta, half)).value - inv_pi;
      smallest = std::min(smallest, dev);
      if (!(dev > 1e-4)) {
        why << kind_name(kind) << " theta=" << theta << " g(0)-1/pi=" << dev
            << "; ";
      }
    }
  }
  info << "smallest g(0)-1/pi = " << smallest;
}

void c5_derivative(std::ostringstream& why, std::ostringstream& info) {
  const Weights half({0.5, 0.5});
  const std::array<std::pair<DensityKind, double>, 2> expected = {
      {{DensityKind::AbsRatio, 0.125}, {DensityKind::StoppedBM, 1.0 / (4.0 * pi)}}};
  for (const auto& [kind, target] : expected) {
    const double q = density::dgv0_dtheta_at_zero(kind, half).value;
    const double fd = density::finite_difference_derivative(kind, half, 1e-4);
    info << kind_name(kind) << ": quadrature " << q << ", finite difference "
         << fd << "; ";
    if (!(std::abs(q - target) < 1e-8)) {
      why << kind_name(kind) << " quadrature derivative " << q << " vs " << target
          << "; ";
    }
    if (!(std::abs(fd - q) < 1e-5)) {
      why << kind_name(kind) << " finite difference " << fd << " vs " << q << "; ";
    }
  }
}

void c6_tail(std::ostringstream& why, std::ostringstream& info) {
  double worst4 = 0.0;
  double worst5 = 0.0;
  for (auto kind : {DensityKind::AbsRatio, DensityKind::StoppedBM}) {
    for (double theta : {0.0, 0.25, 0.5, 0.75}) {
      for (const auto& w : {kWeightGrid[0], kWeightGrid[1]}) {
        const DensityModel model(kind, theta, Weights({w[0], w[1]}));
        const double d4 =
            std::abs(density::tail_functional(model, 1e4).value - inv_pi);
        const double d5 =
            std::abs(density::tail_functional(model, 1e5).value - inv_pi);
        worst4 = std::max(worst4, d4);
        worst5 = std::max(worst5, d5);
        if (!(d4 < 1e-3) || !(d5 < 1e-4)) {
          why << kind_name(kind) << " theta=" << theta << " w1=" << w[0]
              << " |tail-1/pi| at 1e4: " << d4 << ", at 1e5: " << d5 << "; ";
        }
      }
    }
  }
  info << "max deviation at v=1e4: " << worst4 << ", at v=1e5: " << worst5;
}

void c7_normalization(std::ostringstream& why, std::ostringstream& info) {
  struct Point {
    DensityKind kind;
    double theta;
    double w1;
  };
  const std::array<Point, 6> grid = {{{DensityKind::AbsRatio, 0.0, 0.5},
                                      {DensityKind::AbsRatio, 0.5, 0.3},
                                      {DensityKind::AbsRatio, -0.9, 0.9},
                                      {DensityKind::StoppedBM, 0.0, 0.3},
                                      {DensityKind::StoppedBM, -0.5, 0.5},
                                      {DensityKind::StoppedBM, 0.9, 0.1}}};
  double worst = 0.0;
  for (const auto& p : grid) {
    const DensityModel model(p.kind, p.theta, Weights({p.w1, 1.0 - p.w1}));
    const double dev = std::abs(density::normalization_check(model).value - 1.0);
    worst = std::max(worst, dev);
    if (!(dev < 1e-6)) {
      why << kind_name(p.kind) << " theta=" << p.theta << " w1=" << p.w1
          << " |int g - 1| = " << dev << "; ";
    }
  }
  info << "max |int g - 1| = " << worst;
}

void c8_histogram(std::ostringstream& why, std::ostringstream& info) {
  struct Case {
    transforms::TransformKind kind;
    double theta;
    double w1;
    std::uint64_t seed;
  };
  const std::array<Case, 2> cases = {
      {{transforms::TransformKind::AbsRatio, 0.5, 0.3, 8'001},
       {transforms::TransformKind::StoppedBM, 0.5, 0.5, 8'002}}};
  for (const auto& c : cases) {
    const Weights w({c.w1, 1.0 - c.w1});
    const auto batch = transforms::sample(c.kind, gauss::theta_to_covariance(c.theta),
                                          w, kHistogramDraws, c.seed);
    const auto bins = stats::histogram_density(batch.values, 0.05, -5.0, 5.0);
    const DensityModel model(density::from_transform(c.kind), c.theta, w);
    double worst = 0.0;
    for (const auto& b : bins) {
      const double g = density::gv(model, b.center).value;
      const double z = std::abs(b.density - g) / b.standard_error;
      worst = std::max(worst, z);
      if (!(z < 4.0)) {
        why << transforms::to_string(c.kind) << " bin " << b.center
            << ": histogram " << b.density << " vs density " << g << " ("
            << z << " SE); ";
      }
    }
    info << transforms::to_string(c.kind) << " worst " << worst << " SE over "
         << bins.size() << " bins; ";
  }
}

void c9_bm_cross(std::ostringstream& why, std::ostringstream& info) {
  std::uint64_t seed = 9'000;
  double worst_ratio = 0.0;
  for (double theta : {-0.5, 0.5, 0.9}) {
    for (const auto& w : kWeightGrid) {
      const Weights weights({w[0], w[1]});
      const gauss::ThetaCovariance cov(theta);
      const auto path = transforms::sample_stopped_bm_path(cov.covariance(), weights,
                                                           kDraws, seed++);
      const auto mix =
          transforms::sample_stopped_bm_mixture(cov, weights, kDraws, seed++);
      const auto r = stats::ks_two_sample(stats::EmpiricalSample(path.values),
                                          stats::EmpiricalSample(mix.values), kAlpha);
      worst_ratio = std::max(worst_ratio, r.statistic / r.critical_value);
      if (!r.passes) {
        why << "theta=" << theta << " w=(" << w[0] << "," << w[1]
            << ") D=" << r.statistic << " crit=" << r.critical_value << "; ";
      }
    }
  }
  info << "9 combinations, max D/crit = " << worst_ratio;
}

void c10_multivariate(std::ostringstream& why, std::ostringstream& info) {
  constexpr std::size_t kCount = 1'000'000;
  const auto axes = cauchy::SpectralMeasure::axes(2);
  const auto axes_batch = cauchy::sample_mv(axes, kCount, 10'001);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto r = ks_vs_standard_cauchy(axes_batch.column(j));
    if (!r.passes) why << "axis coordinate " << j << " KS D=" << r.statistic << "; ";
  }

  const auto diag = cauchy::SpectralMeasure::diagonal(3);
  const auto diag_batch = cauchy::sample_mv(diag, kCount, 10'002);
  std::size_t unequal = 0;
  for (std::size_t i = 0; i < kCount; ++i) {
    if (diag_batch.at(i, 0) != diag_batch.at(i, 1) ||
        diag_batch.at(i, 0) != diag_batch.at(i, 2)) {
      ++unequal;
    }
  }
  if (unequal != 0) why << unequal << " diagonal-atom draws with unequal coordinates; ";

  // 20-point grid of arguments t, shared by both measures (first two
  // coordinates for the axis measure).
  double worst = 0.0;
  auto check_charfn = [&](const cauchy::SpectralMeasure& m,
                          const SampleBatch& batch, const char* name) {
    const std::size_t n = m.dim();
    for (int g = 0; g < 20; ++g) {
      const double angle = 2.0 * pi * g / 20.0;
      const double radius = 0.1 + 0.1 * (g % 5);
      std::vector<double> t(n, 0.0);
      t[0] = radius * std::cos(angle);
      t[1] = radius * std::sin(angle);
      if (n > 2) t[2] = 0.5 * radius;
      std::vector<double> t2(t);
      for (double& x : t2) x *= 2.0;
      const double phi = cauchy::mv_charfn(t, m);
      const double phi2 = cauchy::mv_charfn(t2, m);
      double mean = 0.0;
      for (std::size_t i = 0; i < batch.count(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += t[j] * batch.at(i, j);
        mean += std::cos(dot);
      }
      mean /= static_cast<double>(batch.count());
      const double var = 0.5 * (1.0 + phi2) - phi * phi;
      const double se = std::sqrt(var / static_cast<double>(batch.count()));
      const double z = std::abs(mean - phi) / se;
      worst = std::max(worst, z);
      if (!(z < 5.0)) {
        why << name << " charfn point " << g << ": empirical " << mean
            << " vs " << phi << " (" << z << " SE); ";
      }
    }
  };
  check_charfn(axes, axes_batch, "axes");
  check_charfn(diag, diag_batch, "diagonal");
  info << "worst charfn deviation " << worst << " SE";
}

// Each criterion body appends failure notes to `why` and progress notes to
// `info`; an empty `why` means the criterion passed.
struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  bool full_only;
  void (*body)(std::ostringstream&, std::ostringstream&);
};

constexpr std::array<Criterion, 10> kCriteria = {{
    {1, "Cauchy density self-referential identity", 1.0, false, c1_cauchy_identity},
    {2, "ratio transform is standard Cauchy (18 theta/w combinations)", 120.0, false,
     c2_pillai_meng},
    {3, "diagonal covariance gives standard Cauchy (quadrature + KS)", 60.0, false,
     c3_diagonal},
    {4, "g_V(0) exceeds 1/pi for small positive theta", 10.0, false, c4_non_cauchy},
    {5, "theta-derivative of g_V(0) at zero", 10.0, false, c5_derivative},
    {6, "tail functional v^2 g_V(v) tends to 1/pi", 30.0, false, c6_tail},
    {7, "density normalization", 30.0, false, c7_normalization},
    {8, "10^7-draw histogram matches quadrature density", 300.0, true, c8_histogram},
    {9, "stopped-BM path and mixture samplers agree", 180.0, false, c9_bm_cross},
    {10, "multivariate Cauchy spectral-measure laws", 60.0, false, c10_multivariate},
}};

}  // namespace

std::vector<CriterionResult> run_acceptance(Suite suite, const Reporter& report) {
  std::vector<CriterionResult> results;
  for (const auto& c : kCriteria) {
    if (c.full_only && suite != Suite::Full) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget_seconds;
    std::ostringstream why;
    std::ostringstream info;
    why.precision(10);
    info.precision(10);
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(why, info);
    } catch (const std::exception& e) {
      why << "exception: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
    if (r.seconds > r.budget_seconds) {
      why << "runtime " << r.seconds << " s exceeds budget " << r.budget_seconds
          << " s; ";
    }
    r.passed = why.str().empty();
    r.detail = r.passed ? info.str() : why.str();
    while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) {
      r.detail.pop_back();
    }
    if (report) report(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream line;
  line.precision(3);
  line << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": "
       << r.title << " (" << std::fixed << r.seconds << " s) :: " << r.detail;
  return line.str();
}

}  // namespace heavytail::verify
