#include "heavytail/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "heavytail/density.hpp"
#include "heavytail/error.hpp"
#include "heavytail/gauss.hpp"
#include "heavytail/parallel.hpp"
#include "heavytail/transforms.hpp"
#include "heavytail/verify.hpp"

#ifndef HEAVYTAIL_VERSION
#define HEAVYTAIL_VERSION "0.0.0"
#endif

namespace heavytail::cli {

namespace {

using json = nlohmann::ordered_json;

// Command-line mistakes that CLI11 cannot see (grids, files, combinations).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      now = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
      throw UsageError("SOURCE_DATE_EPOCH is not an integer");
    }
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream s;
  s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HEAVYTAIL_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw UsageError("HEAVYTAIL_SEED is not an unsigned integer");
    }
  }
  return 1;
}

json make_manifest(const std::string& subcommand, json parameters,
                   std::optional<std::uint64_t> seed) {
  json m;
  m["subcommand"] = subcommand;
  m["parameters"] = std::move(parameters);
  if (seed) m["seed"] = *seed;
  m["version"] = HEAVYTAIL_VERSION;
  m["timestamp"] = timestamp();
  return m;
}

// Output sink: a file when a path is given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file: " + path);
      stream_ = &file_;
    }
    *stream_ << std::setprecision(17);
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_csv_preamble(std::ostream& out, const json& manifest,
                        const std::string& header) {
  out << "# manifest: " << manifest.dump() << '\n' << header << '\n';
}

struct Grid {
  double lo;
  double hi;
  std::size_t points;
};

// "vmin:vmax:steps" with steps >= 1 points, inclusive of both ends.
Grid parse_point_grid(const std::string& text) {
  std::istringstream in(text);
  double lo = 0.0;
  double hi = 0.0;
  long long steps = 0;
  char c1 = 0;
  char c2 = 0;
  if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' ||
      (in >> std::ws, !in.eof()) || steps < 1 || hi < lo ||
      (steps == 1 && hi != lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw UsageError("malformed grid '" + text +
                     "': expected vmin:vmax:steps with vmin <= vmax, steps >= 1");
  }
  return {lo, hi, static_cast<std::size_t>(steps)};
}

double grid_point(const Grid& g, std::size_t i) {
  if (g.points == 1) return g.lo;
  return g.lo + (g.hi - g.lo) * static_cast<double>(i) /
                    static_cast<double>(g.points - 1);
}

// "a:b:step" with step > 0; values a, a + step, ... up to b (inclusive
// within rounding).
std::vector<double> parse_step_grid(const std::string& text) {
  std::istringstream in(text);
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  char c1 = 0;
  char c2 = 0;
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      (in >> std::ws, !in.eof()) || !(step > 0.0) || hi < lo) {
    throw UsageError("malformed grid '" + text +
                     "': expected a:b:step with a <= b, step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 1e-12 so that e.g. -0.9 + 9 * 0.1 reads as 0.
    out[i] = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
  }
  return out;
}

gauss::CovarianceMatrix read_covariance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open covariance file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw UsageError("covariance file " + path + ": bad number '" + token + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw UsageError("covariance file " + path + " is empty");
  std::vector<double> entries;
  for (const auto& r : rows) {
    if (r.size() != n) {
      throw UsageError("covariance file " + path + " is not a square matrix");
    }
    entries.insert(entries.end(), r.begin(), r.end());
  }
  try {
    return gauss::CovarianceMatrix(n, std::move(entries));
  } catch (const Error& e) {
    throw UsageError("covariance file " + path + ": " + e.what());
  }
}

transforms::TransformKind require_kind(const std::string& name) {
  const auto kind = transforms::parse_kind(name);
  if (!kind) throw UsageError("unknown transform '" + name + "' (pm|abs|bm)");
  return *kind;
}

density::DensityKind require_density_kind(const std::string& name,
                                          const std::string& subcommand) {
  const auto kind = require_kind(name);
  if (kind == transforms::TransformKind::RatioPM) {
    throw UsageError(subcommand +
                     ": the pm transform is standard Cauchy for every covariance "
                     "and has no density model; use `sample --transform pm` instead");
  }
  return density::from_transform(kind);
}

// Evaluates fn(i) for i in [0, count) over the OpenMP pool, keeping results
// in index order. The first failure is rethrown.
template <class T, class Fn>
std::vector<T> ordered_map(std::size_t count, Fn&& fn) {
  std::vector<std::optional<T>> slots(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      slots[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(heavytail_cli_ordered_map)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

json weights_json(const transforms::Weights& w) { return w.values(); }

json verdict_json(const density::CauchyVerdict& v) {
  json j;
  j["kind"] = density::to_string(v.model.kind());
  j["theta"] = v.model.theta();
  j["weights"] = weights_json(v.model.weights());
  j["gv0"] = v.gv0;
  j["gv0_minus_inv_pi"] = v.gv0_minus_inv_pi;
  j["tail_v"] = v.tail_v;
  j["tail_value"] = v.tail_value;
  j["normalization"] = v.normalization;
  j["normalization_ok"] = v.normalization_ok;
  j["is_cauchy"] = v.is_cauchy;
  j["decision_tol"] = v.decision_tol;
  return j;
}

struct QuadratureOptions {
  density::QuadratureConfig cfg;
  void attach(CLI::App* sub) {
    sub->add_option("--abs-tol", cfg.abs_tol, "Absolute quadrature tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", cfg.rel_tol, "Relative quadrature tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-subdivisions", cfg.max_subdivisions,
                    "Adaptive subdivision limit")
        ->check(CLI::PositiveNumber);
  }
  json to_json() const {
    return {{"abs_tol", cfg.abs_tol},
            {"rel_tol", cfg.rel_tol},
            {"max_subdivisions", cfg.max_subdivisions}};
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample and verify normal-to-Cauchy transformations", "heavytail"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HEAVYTAIL_VERSION);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw from one transformation; CSV index,value");
  std::string s_transform;
  std::optional<double> s_theta;
  std::string s_cov;
  std::vector<double> s_weights;
  std::size_t s_count = 0;
  std::optional<std::uint64_t> s_seed;
  std::string s_out;
  sample->add_option("--transform", s_transform, "pm | abs | bm")->required();
  auto* theta_opt = sample->add_option("--theta", s_theta, "Off-diagonal of the 2x2 inverse covariance");
  auto* cov_opt = sample->add_option("--cov", s_cov, "Plain-text n x n covariance matrix");
  theta_opt->excludes(cov_opt);
  cov_opt->excludes(theta_opt);
  sample->add_option("--weights", s_weights, "Comma-separated convex weights")
      ->required()
      ->delimiter(',');
  sample->add_option("--n", s_count, "Number of draws")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", s_seed, "Seed (default: $HEAVYTAIL_SEED or 1)");
  sample->add_option("--out", s_out, "Output CSV path (default: stdout)");

  // density
  auto* dens = app.add_subcommand("density", "Evaluate g_V on a grid; CSV v,g_v,err_est");
  std::string d_transform;
  double d_theta = 0.0;
  std::vector<double> d_weights;
  std::string d_grid;
  std::string d_out;
  QuadratureOptions d_quad;
  dens->add_option("--transform", d_transform, "abs | bm")->required();
  dens->add_option("--theta", d_theta, "Off-diagonal of the 2x2 inverse covariance")->required();
  dens->add_option("--weights", d_weights, "w1,w2")->required()->delimiter(',');
  dens->add_option("--grid", d_grid, "vmin:vmax:steps")->required();
  dens->add_option("--out", d_out, "Output CSV path (default: stdout)");
  d_quad.attach(dens);

  // tail
  auto* tail = app.add_subcommand("tail", "Tail functional v^2 g_V(v); CSV v,v2_gv");
  std::string t_transform;
  double t_theta = 0.0;
  std::vector<double> t_weights;
  std::vector<double> t_values;
  std::string t_out;
  QuadratureOptions t_quad;
  tail->add_option("--transform", t_transform, "abs | bm")->required();
  tail->add_option("--theta", t_theta, "Off-diagonal of the 2x2 inverse covariance")->required();
  tail->add_option("--weights", t_weights, "w1,w2")->required()->delimiter(',');
  tail->add_option("--v-values", t_values, "Comma-separated v > 0")->required()->delimiter(',');
  tail->add_option("--out", t_out, "Output CSV path (default: stdout)");
  t_quad.attach(tail);

  // derivative
  auto* deriv = app.add_subcommand("derivative", "d g_V(0)/d theta at theta = 0; JSON");
  deriv->set_help_flag("--help", "Print this help message and exit");
  std::string r_transform;
  std::vector<double> r_weights;
  double r_h = 1e-4;
  std::string r_out;
  QuadratureOptions r_quad;
  deriv->add_option("--transform", r_transform, "abs | bm")->required();
  deriv->add_option("--weights", r_weights, "w1,w2")->required()->delimiter(',');
  deriv->add_option("--h", r_h, "Finite-difference step, 0 < h <= 1e-3");
  deriv->add_option("--out", r_out, "Output JSON path (default: stdout)");
  r_quad.attach(deriv);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Cauchy verdicts over a theta grid; JSON");
  std::string w_transform;
  std::string w_grid;
  std::vector<double> w_weights;
  double w_tol = density::kDefaultDecisionTol;
  std::string w_out;
  QuadratureOptions w_quad;
  sweep->add_option("--transform", w_transform, "abs | bm")->required();
  sweep->add_option("--theta-grid", w_grid, "a:b:step")->required();
  sweep->add_option("--weights", w_weights, "w1,w2")->required()->delimiter(',');
  sweep->add_option("--decision-tol", w_tol, "|g_V(0) - 1/pi| threshold")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", w_out, "Output JSON path (default: stdout)");
  w_quad.attach(sweep);

  // verify
  auto* ver = app.add_subcommand("verify", "Run the acceptance criteria");
  std::string v_suite = "quick";
  ver->add_option("--suite", v_suite, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));

  std::vector<const char*> argv{"heavytail"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
      out << (e.get_name() == "CallForVersion" ? std::string(e.what()) + "\n"
                                                : app.help());
      return kExitOk;
    } catch (const CLI::CallForHelp&) {
      const auto* active = app.get_subcommands().empty() ? &app : app.get_subcommands()[0];
      out << active->help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    par::set_thread_count(threads);

    if (*sample) {
      const auto kind = require_kind(s_transform);
      if (!s_theta && s_cov.empty()) throw UsageError("sample needs --theta or --cov");
      const std::uint64_t seed = s_seed ? *s_seed : default_seed();
      const transforms::Weights w(s_weights);
      const auto sigma =
          s_theta ? gauss::theta_to_covariance(*s_theta) : read_covariance_file(s_cov);
      json params{{"transform", s_transform}, {"weights", s_weights}, {"n", s_count}};
      if (s_theta) {
        params["theta"] = *s_theta;
      } else {
        params["cov_file"] = s_cov;
        params["cov"] = sigma.entries();
      }
      const json manifest = make_manifest("sample", params, seed);
      err << "manifest: " << manifest.dump() << '\n';
      const auto batch = transforms::sample(kind, sigma, w, s_count, seed);
      Sink sink(s_out, out);
      write_csv_preamble(*sink, manifest, "index,value");
      for (std::size_t i = 0; i < batch.values.size(); ++i) {
        *sink << i << ',' << batch.values[i] << '\n';
      }
      return kExitOk;
    }

    if (*dens) {
      const auto kind = require_density_kind(d_transform, "density");
      const Grid grid = parse_point_grid(d_grid);
      const density::DensityModel model(kind, d_theta, transforms::Weights(d_weights));
      const json manifest = make_manifest(
          "density",
          {{"transform", d_transform}, {"theta", d_theta}, {"weights", d_weights},
           {"grid", d_grid}, {"quadrature", d_quad.to_json()}},
          std::nullopt);
      err << "manifest: " << manifest.dump() << '\n';
      const auto rows = ordered_map<density::IntegralResult>(grid.points, [&](std::size_t i) {
        const double v = grid_point(grid, i);
        try {
          return density::gv(model, v, d_quad.cfg);
        } catch (const Error& e) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "at v = " << v << ": " << e.what();
          throw Error(e.kind(), msg.str());
        }
      });
      Sink sink(d_out, out);
      write_csv_preamble(*sink, manifest, "v,g_v,err_est");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        *sink << grid_point(grid, i) << ',' << rows[i].value << ','
              << rows[i].error_estimate << '\n';
      }
      return kExitOk;
    }

    if (*tail) {
      const auto kind = require_density_kind(t_transform, "tail");
      if (t_values.empty()) throw UsageError("tail needs at least one --v-values entry");
      for (double v : t_values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("tail needs v > 0");
      }
      const density::DensityModel model(kind, t_theta, transforms::Weights(t_weights));
      const json manifest = make_manifest(
          "tail",
          {{"transform", t_transform}, {"theta", t_theta}, {"weights", t_weights},
           {"v_values", t_values}, {"quadrature", t_quad.to_json()}},
          std::nullopt);
      err << "manifest: " << manifest.dump() << '\n';
      const auto rows = ordered_map<double>(t_values.size(), [&](std::size_t i) {
        return density::tail_functional(model, t_values[i], t_quad.cfg).value;
      });
      Sink sink(t_out, out);
      write_csv_preamble(*sink, manifest, "v,v2_gv");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        *sink << t_values[i] << ',' << rows[i] << '\n';
      }
      return kExitOk;
    }

    if (*deriv) {
      const auto kind = require_density_kind(r_transform, "derivative");
      const transforms::Weights w(r_weights);
      if (w.size() != 2) throw UsageError("derivative needs two weights");
      const json manifest = make_manifest(
          "derivative",
          {{"transform", r_transform}, {"weights", r_weights}, {"h", r_h},
           {"quadrature", r_quad.to_json()}},
          std::nullopt);
      err << "manifest: " << manifest.dump() << '\n';
      json result;
      result["quadrature_value"] = density::dgv0_dtheta_at_zero(kind, w, r_quad.cfg).value;
      result["finite_difference_value"] =
          density::finite_difference_derivative(kind, w, r_h, r_quad.cfg);
      result["h"] = r_h;
      result["manifest"] = manifest;
      Sink sink(r_out, out);
      *sink << result.dump(2) << '\n';
      return kExitOk;
    }

    if (*sweep) {
      const auto kind = require_density_kind(w_transform, "sweep");
      const auto thetas = parse_step_grid(w_grid);
      const transforms::Weights w(w_weights);
      for (double t : thetas) {
        if (!(std::abs(t) < 1.0)) throw UsageError("theta grid must stay inside (-1, 1)");
      }
      const json manifest = make_manifest(
          "sweep",
          {{"transform", w_transform}, {"theta_grid", w_grid}, {"weights", w_weights},
           {"decision_tol", w_tol}, {"quadrature", w_quad.to_json()}},
          std::nullopt);
      err << "manifest: " << manifest.dump() << '\n';
      const auto verdicts = ordered_map<json>(thetas.size(), [&](std::size_t i) {
        return verdict_json(density::cauchy_verdict(
            density::DensityModel(kind, thetas[i], w), w_quad.cfg, w_tol));
      });
      json result;
      result["manifest"] = manifest;
      result["verdicts"] = verdicts;
      Sink sink(w_out, out);
      *sink << result.dump(2) << '\n';
      return kExitOk;
    }

    if (*ver) {
      const auto suite = v_suite == "full" ? verify::Suite::Full : verify::Suite::Quick;
      const auto results = verify::run_acceptance(
          suite, [&](const verify::CriterionResult& r) {
            err << verify::format_line(r) << '\n';
          });
      json report;
      report["manifest"] = make_manifest("verify", {{"suite", v_suite}}, std::nullopt);
      bool ok = true;
      json list = json::array();
      for (const auto& r : results) {
        ok = ok && r.passed;
        list.push_back({{"id", r.id},
                        {"title", r.title},
                        {"passed", r.passed},
                        {"seconds", r.seconds},
                        {"detail", r.detail}});
      }
      report["passed"] = ok;
      report["criteria"] = list;
      if (!ok) {
        json failures = json::array();
        for (const auto& item : list) {
          if (!item["passed"].get<bool>()) failures.push_back(item);
        }
        report["failures"] = failures;
      }
      out << report.dump(2) << '\n';
      return ok ? kExitOk : kExitVerification;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::NonConvergence:
      case ErrorKind::Numerical:
      case ErrorKind::NotPositiveDefinite:
        return kExitNumerical;
      default:
        return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace heavytail::cli
