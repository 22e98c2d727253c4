#include "rwc/experiment.hpp"

#include "rwc/bm.hpp"
#include "rwc/conditioned.hpp"
#include "rwc/counting.hpp"
#include "rwc/harmonic.hpp"
#include "rwc/special.hpp"
#include "rwc/spectral.hpp"
#include "rwc/stats.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rwc {

using nlohmann::json;

namespace {

constexpr const char* kKindNames[] = {"tail",        "harmonic",  "bm",    "clt", "llt-uniform",
                                      "llt-fixed",   "bridge",    "count", "fn-check"};
constexpr const char* kVersion = "rwcone 1.0.0";

IVec to_ivec(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ConfigInvalid("config: point must be a nonempty array");
  IVec v(static_cast<int>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) throw ConfigInvalid("config: point entries must be integers");
    v(static_cast<int>(i)) = arr[i].get<int>();
  }
  return v;
}

double tol(const ExperimentConfig& c, const std::string& name, double fallback) {
  auto it = c.tolerances.find(name);
  return it == c.tolerances.end() ? fallback : it->second;
}

void push_metric(ExperimentReport& r, const std::string& name, double est, double target,
                 double tolerance, bool pass) {
  r.metrics.push_back(MetricResult{name, est, target, tolerance, true, pass});
}

void push_value(ExperimentReport& r, const std::string& name, double est, bool pass) {
  r.metrics.push_back(MetricResult{name, est, 0, 0, false, pass});
}

WalkSpec spec_from(const ExperimentConfig& c) {
  if (c.steps_path.empty()) throw ConfigInvalid("config: 'steps' is required");
  std::ifstream probe(c.steps_path);
  if (!probe) throw ConfigInvalid("config: step file not found: " + c.steps_path);
  return make_walk_spec(parse_cone(c.cone_spec), parse_steps(c.steps_path));
}

IVec require_start(const ExperimentConfig& c) {
  if (!c.start) throw ConfigInvalid("config: 'start' is required for this experiment");
  return *c.start;
}

std::vector<long> grid_of(const ExperimentConfig& c, std::vector<long> fallback) {
  if (!c.n_grid.empty()) return c.n_grid;
  if (c.n) return {*c.n};
  return fallback;
}

// ---------------------------------------------------------------------------

void run_tail(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  IVec x = require_start(c);
  std::vector<long> grid = grid_of(c, {128, 256, 512, 1024, 2048, 4096, 8192, 16384});
  long n_max = *std::max_element(grid.begin(), grid.end());
  double radius = c.radius.value_or(
      x.cast<double>().norm() + 12.0 * spec.dist.max_step_norm() * std::sqrt((double)n_max) + 1);
  LatticeBox box = cone_box(spec.cone, radius);
  long xi = box.index(x);
  if (xi < 0) throw ConfigInvalid("tail: start outside DP box");
  std::vector<double> layer(box.size(), 0.0), next;
  for (std::size_t i = 0; i < box.size(); ++i)
    if (box.inside[i]) layer[i] = 1.0;
  std::set<long> want(grid.begin(), grid.end());
  std::vector<std::pair<double, double>> series;
  for (long k = 1; k <= n_max; ++k) {
    dp_step_backward(box, spec.dist, layer, next);
    layer.swap(next);
    if (want.count(k)) series.emplace_back((double)k, layer[(std::size_t)xi]);
  }
  for (auto& [n, q] : series) r.diagnostics.emplace_back("q_" + std::to_string((long)n), q);

  SpectralData sd = spectral_data(spec.image_cone);
  double p = sd.p();
  if (series.size() >= 4) {
    std::size_t wlo = std::min(series.size() / 2, series.size() - 4);
    SlopeFit sf = loglog_slope(series, wlo, series.size() - 1);
    double stol = tol(c, "slope_tol", 0.02);
    push_metric(r, "slope", sf.slope, -p / 2, stol, std::abs(sf.slope + p / 2) <= stol);
  }
  long vh = c.horizon.value_or(4096);
  double vrad = x.cast<double>().norm() + 4.0 * spec.dist.max_step_norm() * std::sqrt((double)vh);
  HarmonicTable vhat = value_iteration_table(spec, vh, vrad);
  double limit = series.back().second * std::pow((double)n_max, p / 2);
  double target = sd.kappa() * vhat.value_at(x);
  double ltol = tol(c, "limit_tol", 0.02);
  push_metric(r, "limit_ratio", limit / target, 1.0, ltol, std::abs(limit / target - 1) <= ltol);
  r.diagnostics.emplace_back("kappa", sd.kappa());
  r.diagnostics.emplace_back("v_hat", vhat.value_at(x));
}

void run_harmonic(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  IVec x = require_start(c);
  long samples = c.samples.value_or(20000);
  long cap = c.horizon.value_or(20000);
  Rng rng(*c.seed, 0);
  ExtensionParams base = default_extension(spec.cone);
  std::vector<ExtensionParams> plist{base, {base.epsilon / 2, base.a / 2}};
  InvarianceReport inv = invariance_check(spec.cone, spec.dist, x, plist, samples, cap, rng);
  push_value(r, "invariance_sigma", inv.max_sigma_distance, inv.consistent);
  Estimate series = inv.estimates[0];
  LimitDpResult limit = v_limit_dp(spec.cone, spec.dist, x, c.horizon.value_or(4096), c.radius.value_or(-1));
  double sigma = std::max(series.stderr_, 1e-12);
  double dist_sigma = std::abs(series.value - limit.value) / sigma;
  push_value(r, "series_vs_limit_sigma", dist_sigma, dist_sigma <= 3.0);
  r.diagnostics.emplace_back("v_series", series.value);
  r.diagnostics.emplace_back("v_series_stderr", series.stderr_);
  r.diagnostics.emplace_back("v_limit", limit.value);
  r.diagnostics.emplace_back("v_limit_mass_lost", limit.mass_lost);
  long vh = c.horizon.value_or(4096);
  HarmonicTable table = value_iteration_table(
      spec.cone, spec.dist, vh,
      x.cast<double>().norm() + 4.0 * spec.dist.max_step_norm() * std::sqrt((double)vh));
  double res = harmonicity_residual(table, spec.dist, spec.cone, x);
  double rel = res / table.value_at(x);
  double rtol = tol(c, "residual_tol", 1e-3);
  push_metric(r, "harmonicity_residual_rel", rel, 0.0, rtol, rel <= rtol);
}

void run_bm(const ExperimentConfig& c, ExperimentReport& r) {
  Cone cone = parse_cone(c.cone_spec);
  SpectralData sd = spectral_data(cone);
  r.diagnostics.emplace_back("p", sd.p());
  r.diagnostics.emplace_back("kappa", sd.kappa());
  r.diagnostics.emplace_back("h0", sd.h0_const());
  r.diagnostics.emplace_back("rho", sd.rho_const());
  if (c.start) {
    Vec x = c.start->cast<double>();
    double t = c.t.value_or(1.0);
    double val = bm_survival(cone, x, t);
    r.diagnostics.emplace_back("survival", val);
    if (cone.kind() == ConeKind::HalfLine || cone.kind() == ConeKind::Orthant) {
      double oracle = 1.0;
      for (int i = 0; i < x.size(); ++i)
        oracle *= std::erf(x(i) / std::sqrt(2 * t));
      double btol = tol(c, "bm_tol", 1e-6);
      push_metric(r, "survival_vs_reflection", val, oracle, btol, std::abs(val - oracle) <= btol);
    }
  }
}

void run_clt(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  IVec x = require_start(c);
  long n = c.n.value_or(10000);
  long samples = c.samples.value_or(100000);
  double radius = c.radius.value_or(
      x.cast<double>().norm() + 5.0 * spec.dist.max_step_norm() * std::sqrt((double)n) + 1);
  SurvivalTable table(spec.cone, spec.dist, radius, n);
  std::vector<IVec> ends = conditioned_endpoints(table, x, n, samples, *c.seed, c.workers);
  GofReport gof = clt_verify(spec, ends, n, c.radial_cells, c.angular_cells, false);
  double pmin = tol(c, "chi2_p_min", 0.01);
  push_metric(r, "chi2_p", gof.p_value, pmin, pmin, gof.p_value > pmin);
  GofReport ctrl = clt_verify(spec, ends, n, c.radial_cells, c.angular_cells, true);
  push_metric(r, "control_p", ctrl.p_value, 1e-6, 1e-6, ctrl.p_value < 1e-6);
  r.diagnostics.emplace_back("chi2_statistic", gof.statistic);
  r.diagnostics.emplace_back("control_statistic", ctrl.statistic);
  for (const auto& [k, v] : gof.extras) r.diagnostics.emplace_back(k, v);
}

void run_llt_uniform(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  IVec x = require_start(c);
  std::vector<long> grid = grid_of(c, {128, 256, 512});
  long vh = c.horizon.value_or(4096);
  HarmonicTable vhat = value_iteration_table(
      spec, vh, x.cast<double>().norm() + 4.0 * spec.dist.max_step_norm() * std::sqrt((double)vh));
  auto sup = llt_uniform_verify(spec, vhat, x, grid);
  bool monotone = true;
  for (std::size_t i = 1; i < sup.size(); ++i)
    if (sup[i].sup_error >= sup[i - 1].sup_error) monotone = false;
  for (const auto& s : sup)
    r.diagnostics.emplace_back("sup_error_" + std::to_string(s.n), s.sup_error);
  push_value(r, "sup_error_decreasing", monotone ? 1.0 : 0.0, monotone);
}

void run_llt_fixed(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  IVec x = require_start(c);
  IVec y = c.end.value_or(x);
  std::vector<long> grid = grid_of(c, {1024, 2048, 4096, 8192});
  long vh = c.horizon.value_or(4096);
  double vrad = x.cast<double>().norm() + 4.0 * spec.dist.max_step_norm() * std::sqrt((double)vh);
  HarmonicTable vhat = value_iteration_table(spec, vh, vrad);
  WalkSpec rspec{spec.cone, spec.dist.reflected(), spec.whitening, spec.image_cone};
  HarmonicTable vref = value_iteration_table(rspec, vh, vrad);
  auto ratios = llt_fixed_verify(spec, vhat, vref, x, y, grid);
  for (const auto& rp : ratios)
    r.diagnostics.emplace_back("ratio_" + std::to_string(rp.n), rp.ratio);
  double rtol = tol(c, "ratio_tol", 0.1);
  double last = ratios.back().ratio;
  push_metric(r, "ratio_at_max_n", last, 1.0, rtol, std::abs(last - 1) <= rtol);
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (std::abs(ratios[i].ratio - 1) > std::abs(ratios[i - 1].ratio - 1) + 1e-12) monotone = false;
  push_value(r, "ratio_monotone", monotone ? 1.0 : 0.0, monotone);
}

void run_bridge(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  IVec x = require_start(c);
  IVec y = c.end.value_or(x);
  long n = c.n.value_or(512);
  long samples = c.samples.value_or(10000);
  GofReport gof = bridge_midpoint_verify(spec, x, y, n, c.t.value_or(0.5), c.radial_cells,
                                         c.angular_cells, samples, *c.seed, c.radius.value_or(-1));
  double pmin = tol(c, "chi2_p_min", 0.01);
  push_metric(r, "chi2_p", gof.p_value, pmin, pmin, gof.p_value > pmin);
  r.diagnostics.emplace_back("chi2_statistic", gof.statistic);
  for (const auto& [k, v] : gof.extras) r.diagnostics.emplace_back(k, v);
}

void run_count(const ExperimentConfig& c, ExperimentReport& r) {
  if (c.steps_path.empty()) throw ConfigInvalid("config: 'steps' is required");
  std::ifstream probe(c.steps_path);
  if (!probe) throw ConfigInvalid("config: step file not found: " + c.steps_path);
  std::vector<IVec> steps = parse_step_multiset(c.steps_path);
  Cone cone = parse_cone(c.cone_spec);
  IVec x = require_start(c);
  IVec y = c.end.value_or(x);
  long n_max = c.n.value_or(4000);
  AsymptoticFit fit = asymptotic_predict(steps, cone, x, y, static_cast<int>(n_max));
  r.diagnostics.emplace_back("growth", fit.growth);
  r.diagnostics.emplace_back("poly_exponent", fit.poly_exponent);
  r.diagnostics.emplace_back("c_estimate", fit.c_estimate);
  r.diagnostics.emplace_back("residue_period", (double)fit.residue_period);
  if (!fit.converged) {
    push_value(r, "fit_converged", 0.0, false);
    return;
  }
  push_value(r, "fit_converged", 1.0, true);
  // Exponent target p + d/2 for the tilted, whitened walk when derivable.
  TiltResult tr = cramer_tilt(steps);
  try {
    WalkSpec wspec = make_walk_spec(cone, tr.tilted);
    double p = spectral_data(wspec.image_cone).p();
    double etol = tol(c, "exponent_tol", 0.05);
    push_metric(r, "poly_exponent", fit.poly_exponent, p + cone.dim() / 2.0, etol,
                std::abs(fit.poly_exponent - p - cone.dim() / 2.0) <= etol);
  } catch (const UnsupportedCone&) {
    // image cone outside the catalog: exponent reported without a target
  }
  auto it = c.tolerances.find("growth_target");
  if (it != c.tolerances.end()) {
    double gtol = tol(c, "growth_tol", 1e-3);
    push_metric(r, "growth", fit.growth, it->second, gtol, std::abs(fit.growth - it->second) <= gtol);
  }
  it = c.tolerances.find("c_target");
  if (it != c.tolerances.end()) {
    double ctol = tol(c, "c_rel_tol", 0.05);
    push_metric(r, "c_estimate", fit.c_estimate, it->second, ctol,
                std::abs(fit.c_estimate / it->second - 1) <= ctol);
  }
}

void run_fn_check(const ExperimentConfig& c, ExperimentReport& r) {
  WalkSpec spec = spec_from(c);
  long samples = c.samples.value_or(1000000);
  std::vector<long> grid = grid_of(c, {64, 128, 256, 512});
  long n_max = *std::max_element(grid.begin(), grid.end());
  const int d = spec.dist.dim();
  auto [mean, cov] = moments(spec.dist);
  std::vector<double> mult{2.0, 3.0, 4.0, 6.0};
  // empirical tail counts per (n, x-level)
  std::vector<std::vector<long>> exceed(grid.size(), std::vector<long>(mult.size(), 0));
  auto cum = spec.dist.cumulative();
  for (long i = 0; i < samples; ++i) {
    Rng rng(*c.seed, (std::uint64_t)i);
    IVec s = IVec::Zero(d);
    std::size_t gi = 0;
    for (long k = 1; k <= n_max; ++k) {
      s += spec.dist.support[rng.next_discrete(cum)];
      if (gi < grid.size() && k == grid[gi]) {
        double norm = s.cast<double>().norm();
        for (std::size_t mi = 0; mi < mult.size(); ++mi)
          if (norm > mult[mi] * std::sqrt((double)k)) ++exceed[gi][mi];
        ++gi;
      }
    }
  }
  long violations = 0;
  for (std::size_t gi = 0; gi < grid.size(); ++gi)
    for (std::size_t mi = 0; mi < mult.size(); ++mi) {
      double n = (double)grid[gi];
      double x = mult[mi] * std::sqrt(n);
      double y = std::sqrt(n);
      double tail_prob = 0.0;  // bounded steps, y >= max |step|
      for (std::size_t si = 0; si < spec.dist.support.size(); ++si)
        if (spec.dist.support[si].cast<double>().norm() > y) tail_prob += spec.dist.probs[si];
      FNParams fp{grid[gi], x, y, cov.trace() / d, tail_prob, d};
      double bound = fn_bound(fp, FNKind::NF4);
      double phat = (double)exceed[gi][mi] / (double)samples;
      double sigma = std::sqrt(std::max(phat * (1 - phat), 1e-12) / (double)samples);
      r.diagnostics.emplace_back(
          "tail_n" + std::to_string(grid[gi]) + "_m" + std::to_string((long)mult[mi]), phat);
      if (phat > bound + 4 * sigma) ++violations;
    }
  push_metric(r, "violations", (double)violations, 0.0, 0.0, violations == 0);
}

}  // namespace

std::string to_string(ExperimentKind kind) { return kKindNames[static_cast<int>(kind)]; }

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigInvalid("config: document must be an object");
  static const std::set<std::string> allowed{
      "experiment", "cone",    "steps",  "start",        "end",          "n",
      "n_grid",     "samples", "seed",   "workers",      "radius",       "horizon",
      "t",          "radial_cells",      "angular_cells", "tolerances",  "out"};
  for (const auto& [key, val] : doc.items())
    if (!allowed.count(key)) throw ConfigInvalid("config: unknown key '" + key + "'");
  if (!doc.contains("experiment")) throw ConfigInvalid("config: missing 'experiment'");
  ExperimentConfig c;
  std::string kind = doc["experiment"].get<std::string>();
  bool found = false;
  for (int i = 0; i < 9; ++i)
    if (kind == kKindNames[i]) {
      c.kind = static_cast<ExperimentKind>(i);
      found = true;
    }
  if (!found) throw ConfigInvalid("config: unknown experiment '" + kind + "'");
  if (!doc.contains("cone")) throw ConfigInvalid("config: missing 'cone'");
  c.cone_spec = doc["cone"].get<std::string>();
  if (doc.contains("steps")) c.steps_path = doc["steps"].get<std::string>();
  if (doc.contains("start")) c.start = to_ivec(doc["start"]);
  if (doc.contains("end")) c.end = to_ivec(doc["end"]);
  if (doc.contains("n")) c.n = doc["n"].get<long>();
  if (doc.contains("n_grid"))
    for (const auto& v : doc["n_grid"]) c.n_grid.push_back(v.get<long>());
  if (doc.contains("samples")) c.samples = doc["samples"].get<long>();
  if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("workers")) c.workers = doc["workers"].get<int>();
  if (doc.contains("radius")) c.radius = doc["radius"].get<double>();
  if (doc.contains("horizon")) c.horizon = doc["horizon"].get<long>();
  if (doc.contains("t")) c.t = doc["t"].get<double>();
  if (doc.contains("radial_cells")) c.radial_cells = doc["radial_cells"].get<int>();
  if (doc.contains("angular_cells")) c.angular_cells = doc["angular_cells"].get<int>();
  if (doc.contains("tolerances"))
    for (const auto& [key, val] : doc["tolerances"].items())
      c.tolerances[key] = val.get<double>();
  if (doc.contains("out")) c.out_path = doc["out"].get<std::string>();
  bool stochastic = c.kind == ExperimentKind::harmonic || c.kind == ExperimentKind::clt ||
                    c.kind == ExperimentKind::bridge || c.kind == ExperimentKind::fn_check;
  if (stochastic && !c.seed)
    throw ConfigInvalid("config: 'seed' is mandatory for stochastic experiments");
  c.raw_json = doc.dump();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

bool ExperimentReport::all_pass() const {
  for (const auto& m : metrics)
    if (!m.pass) return false;
  return true;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string payload(const ExperimentReport& r, bool with_clock) {
  std::ostringstream os;
  os << "{\"kind\":\"" << r.kind << "\",\"config\":" << (r.config_echo.empty() ? "{}" : r.config_echo)
     << ",\"metrics\":[";
  for (std::size_t i = 0; i < r.metrics.size(); ++i) {
    const auto& m = r.metrics[i];
    if (i) os << ",";
    os << "{\"name\":\"" << m.name << "\",\"estimate\":" << fmt(m.estimate);
    if (m.has_target)
      os << ",\"target\":" << fmt(m.target) << ",\"tolerance\":" << fmt(m.tolerance);
    os << ",\"pass\":" << (m.pass ? "true" : "false") << "}";
  }
  os << "],\"diagnostics\":{";
  for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
    if (i) os << ",";
    os << "\"" << r.diagnostics[i].first << "\":" << fmt(r.diagnostics[i].second);
  }
  os << "},\"version\":\"" << r.version << "\"";
  if (with_clock) os << ",\"wall_clock_sec\":" << fmt(r.wall_clock_sec);
  os << "}";
  return os.str();
}

}  // namespace

std::string ExperimentReport::payload_json() const { return payload(*this, false); }

ExperimentReport run(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = to_string(config.kind);
  report.config_echo = config.raw_json;
  report.version = kVersion;
  auto start = std::chrono::steady_clock::now();
  switch (config.kind) {
    case ExperimentKind::tail: run_tail(config, report); break;
    case ExperimentKind::harmonic: run_harmonic(config, report); break;
    case ExperimentKind::bm: run_bm(config, report); break;
    case ExperimentKind::clt: run_clt(config, report); break;
    case ExperimentKind::llt_uniform: run_llt_uniform(config, report); break;
    case ExperimentKind::llt_fixed: run_llt_fixed(config, report); break;
    case ExperimentKind::bridge: run_bridge(config, report); break;
    case ExperimentKind::count: run_count(config, report); break;
    case ExperimentKind::fn_check: run_fn_check(config, report); break;
  }
  report.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string emit(const ExperimentReport& report, const std::string& format) {
  if (format == "json") return payload(report, true) + "\n";
  if (format != "csv") throw ConfigInvalid("emit: format must be json or csv");
  std::ostringstream os;
  os.precision(17);
  os << "name,estimate,target,tolerance,pass\n";
  for (const auto& m : report.metrics) {
    os << m.name << "," << fmt(m.estimate) << ",";
    if (m.has_target) os << fmt(m.target) << "," << fmt(m.tolerance);
    else os << ",";
    os << "," << (m.pass ? "true" : "false") << "\n";
  }
  for (const auto& [k, v] : report.diagnostics) os << k << "," << fmt(v) << ",,,\n";
  return os.str();
}

}  // namespace rwc
