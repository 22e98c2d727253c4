#include "rwc/harmonic.hpp"

#include "rwc/dp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace rwc {

namespace {

constexpr const char* kMethodNames[] = {"series_mc", "limit_dp", "value_iteration",
                                        "closed_form_1d", "bounded_jump"};

double default_radius(const StepDistribution& dist, const IVec& x, long horizon) {
  return x.cast<double>().norm() +
         4.0 * dist.max_step_norm() * std::sqrt(static_cast<double>(horizon));
}

// Indices within one max-step of a box face: the only cells that can leak
// mass out of the box in a single step.
std::vector<std::size_t> boundary_band(const LatticeBox& box, int reach) {
  std::vector<std::size_t> band;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    if (!box.inside[idx]) continue;
    IVec z = box.point(idx);
    for (int i = 0; i < z.size(); ++i)
      if (z(i) - box.lo(i) < reach || box.hi(i) - z(i) < reach) {
        band.push_back(idx);
        break;
      }
  }
  return band;
}

LimitDpResult forward_limit_dp(const Cone& cone, const StepDistribution& dist, const IVec& x,
                               long horizon, double radius,
                               const std::function<double(const Vec&)>& terminal) {
  dist.validate();
  if (!contains(cone, x.cast<double>()))
    throw std::invalid_argument("v_limit_dp: start outside the open cone");
  if (radius <= 0) radius = default_radius(dist, x, horizon);
  LatticeBox box = cone_box(cone, radius);
  long xi = box.index(x);
  if (xi < 0 || !box.inside[static_cast<std::size_t>(xi)])
    throw std::invalid_argument("v_limit_dp: start not contained in the DP box");
  int reach = static_cast<int>(std::ceil(dist.max_step_norm()));
  std::vector<std::size_t> band = boundary_band(box, reach);
  std::vector<double> layer(box.size(), 0.0), next;
  layer[static_cast<std::size_t>(xi)] = 1.0;
  double leaked = 0;
  for (long k = 0; k < horizon; ++k) {
    for (std::size_t idx : band) {
      if (layer[idx] == 0) continue;
      IVec z = box.point(idx);
      for (std::size_t si = 0; si < dist.support.size(); ++si) {
        IVec t = z + dist.support[si];
        if (box.index(t) < 0 && contains(cone, t.cast<double>()))
          leaked += layer[idx] * dist.probs[si];
      }
    }
    dp_step_forward(box, dist, layer, next);
    layer.swap(next);
  }
  double value = 0;
  for (std::size_t idx = 0; idx < box.size(); ++idx)
    if (box.inside[idx] && layer[idx] != 0) value += layer[idx] * terminal(box.point(idx).cast<double>());
  return LimitDpResult{value, leaked};
}

}  // namespace

std::string to_string(HarmonicMethod method) {
  return kMethodNames[static_cast<int>(method)];
}

bool HarmonicTable::has(const IVec& x) const {
  for (const auto& p : points)
    if (p == x) return true;
  return false;
}

double HarmonicTable::value_at(const IVec& x) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == x) return values[i];
  std::ostringstream os;
  os << "harmonic table: point (" << x.transpose() << ") not tabulated";
  throw MissingNeighbor(os.str());
}

std::string HarmonicTable::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "# method=" << rwc::to_string(method) << "\n";
  os << "# horizon=" << horizon << "\n";
  os << "# radius=" << radius << "\n";
  os << "# epsilon=" << params.epsilon << "\n";
  os << "# a=" << params.a << "\n";
  if (shift) {
    os << "# shift=";
    for (int i = 0; i < shift->size(); ++i) os << (i ? " " : "") << (*shift)(i);
    os << "\n";
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < points[i].size(); ++k) os << points[i](k) << " ";
    os << values[i] << " " << stderrs[i] << "\n";
  }
  return os.str();
}

HarmonicTable HarmonicTable::from_csv(const std::string& text) {
  HarmonicTable table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(2, eq - 2);
      std::string val = line.substr(eq + 1);
      if (key == "method") {
        for (int m = 0; m < 5; ++m)
          if (val == kMethodNames[m]) table.method = static_cast<HarmonicMethod>(m);
      } else if (key == "horizon") {
        table.horizon = std::stol(val);
      } else if (key == "radius") {
        table.radius = std::stod(val);
      } else if (key == "epsilon") {
        table.params.epsilon = std::stod(val);
      } else if (key == "a") {
        table.params.a = std::stod(val);
      } else if (key == "shift") {
        std::istringstream vs(val);
        std::vector<int> coords;
        int c;
        while (vs >> c) coords.push_back(c);
        IVec s(static_cast<int>(coords.size()));
        for (std::size_t i = 0; i < coords.size(); ++i) s(static_cast<int>(i)) = coords[i];
        table.shift = s;
      }
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.size() < 3) throw std::invalid_argument("harmonic table csv: short row");
    int d = static_cast<int>(row.size()) - 2;
    IVec p(d);
    for (int i = 0; i < d; ++i) p(i) = static_cast<int>(std::lround(row[static_cast<std::size_t>(i)]));
    table.points.push_back(p);
    table.values.push_back(row[static_cast<std::size_t>(d)]);
    table.stderrs.push_back(row[static_cast<std::size_t>(d) + 1]);
  }
  return table;
}

double corrector_f(const Cone& cone, const StepDistribution& dist, const Vec& x,
                   const ExtensionParams& params) {
  dist.validate();
  SpectralData sd = spectral_data(cone);
  double acc = 0;
  for (std::size_t i = 0; i < dist.support.size(); ++i)
    acc += dist.probs[i] * sd.v(x + dist.support[i].cast<double>(), params);
  return acc - sd.v(x, params);
}

Estimate v_series_estimate(const Cone& cone, const StepDistribution& dist, const IVec& x,
                           const ExtensionParams& params, long n_samples, long horizon_cap,
                           Rng& rng) {
  dist.validate();
  if (n_samples < 100) throw std::invalid_argument("v_series_estimate: need >= 100 samples");
  if (!contains(cone, x.cast<double>()))
    throw std::invalid_argument("v_series_estimate: start outside the open cone");
  SpectralData sd = spectral_data(cone);
  auto cum = dist.cumulative();
  double v_x = sd.v(x.cast<double>(), params);
  double mean = 0, m2 = 0;
  long count = 0, censored = 0;
  double censor_scale = 0;
  for (long i = 0; i < n_samples; ++i) {
    IVec pos = x;
    double acc = v_x;
    bool exited = false;
    for (long k = 0; k < horizon_cap; ++k) {
      // corrector at the current (surviving) position
      double f = 0;
      Vec pr = pos.cast<double>();
      for (std::size_t si = 0; si < dist.support.size(); ++si)
        f += dist.probs[si] * sd.v(pr + dist.support[si].cast<double>(), params);
      f -= sd.v(pr, params);
      acc += f;
      pos += dist.support[rng.next_discrete(cum)];
      if (!contains(cone, pos.cast<double>())) {
        acc -= sd.v(pos.cast<double>(), params);
        exited = true;
        break;
      }
    }
    if (!exited) {
      ++censored;
      double tail = std::abs(sd.v(pos.cast<double>(), params));
      censor_scale = std::max(censor_scale, tail);
      acc -= sd.v(pos.cast<double>(), params);
    }
    ++count;
    double delta = acc - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (acc - mean);
  }
  if (censored == n_samples)
    throw AllPathsCensored("v_series_estimate: no path exited within the horizon cap");
  double se = std::sqrt(m2 / (static_cast<double>(count) - 1) / static_cast<double>(count));
  // Censoring bias: surviving paths still owe V at the cap, bounded by the
  // scale of |v| there; folded into the error bar.
  double bias = 2.0 * censor_scale * static_cast<double>(censored) / static_cast<double>(count);
  return Estimate{mean, se + bias};
}

LimitDpResult v_limit_dp(const Cone& cone, const StepDistribution& dist, const IVec& x,
                         long horizon, double radius) {
  SpectralData sd = spectral_data(cone);
  return forward_limit_dp(cone, dist, x, horizon, radius,
                          [&](const Vec& y) { return sd.u(y); });
}

LimitDpResult v_bounded_jump(const Cone& cone, const StepDistribution& dist, const IVec& x,
                             const Vec& x_star, long horizon, double radius) {
  dist.validate();
  for (const auto& s : dist.support)
    if (s.size() != x_star.size()) throw DimensionMismatch("v_bounded_jump: shift dimension");
  double jump = dist.max_step_norm();
  if (!contains(cone, x_star) || !(dist_to_boundary(cone, x_star) > jump))
    throw ShiftTooSmall("v_bounded_jump: shifted cone is not clear of the boundary by the jump bound");
  SpectralData sd = spectral_data(cone);
  return forward_limit_dp(cone, dist, x, horizon, radius,
                          [&](const Vec& y) { return sd.u(y + x_star); });
}

double v_one_dim(const StepDistribution& dist, long x, long radius) {
  dist.validate();
  if (dist.dim() != 1) throw DimensionMismatch("v_one_dim: one-dimensional walks only");
  auto [mean, cov] = moments(dist);
  if (std::abs(mean(0)) > 1e-12) throw NonzeroMean("v_one_dim: zero-mean walks only");
  if (x < 1 || x > radius) throw std::invalid_argument("v_one_dim: x outside [1, radius]");
  const long L = radius;
  // h(z) = E[z + S(tau_z)]; linear fixed point of the one-step equation with
  // exits absorbing and the right edge clamped to h(L) (h converges to a
  // constant at infinity).
  Mat A = Mat::Identity(L, L);
  Vec b = Vec::Zero(L);
  for (long z = 1; z <= L; ++z) {
    for (std::size_t si = 0; si < dist.support.size(); ++si) {
      long t = z + dist.support[si](0);
      double p = dist.probs[si];
      if (t < 1)
        b(z - 1) += p * static_cast<double>(t);
      else
        A(z - 1, std::min(t, L) - 1) -= p;
    }
  }
  Vec h = A.partialPivLu().solve(b);
  return static_cast<double>(x) - h(x - 1);
}

namespace {

HarmonicTable value_iteration_impl(const Cone& cone, const StepDistribution& dist, long horizon,
                                   double radius, const std::function<double(const Vec&)>& seed) {
  dist.validate();
  LatticeBox box = cone_box(cone, radius);
  std::vector<double> layer(box.size(), 0.0), next;
  for (std::size_t idx = 0; idx < box.size(); ++idx)
    if (box.inside[idx]) layer[idx] = seed(box.point(idx).cast<double>());
  for (long k = 0; k < horizon; ++k) {
    dp_step_backward(box, dist, layer, next);
    layer.swap(next);
  }
  HarmonicTable table;
  table.method = HarmonicMethod::value_iteration;
  table.horizon = horizon;
  table.radius = radius;
  table.params = default_extension(cone);
  for (std::size_t idx = 0; idx < box.size(); ++idx)
    if (box.inside[idx]) {
      table.points.push_back(box.point(idx));
      table.values.push_back(layer[idx]);
      table.stderrs.push_back(0.0);
    }
  return table;
}

}  // namespace

HarmonicTable value_iteration_table(const Cone& cone, const StepDistribution& dist, long horizon,
                                    double radius) {
  SpectralData sd = spectral_data(cone);
  return value_iteration_impl(cone, dist, horizon, radius,
                              [&](const Vec& y) { return sd.u(y); });
}

HarmonicTable value_iteration_table(const WalkSpec& spec, long horizon, double radius) {
  SpectralData sd = spectral_data(spec.image_cone);
  const Mat m = spec.whitening;
  return value_iteration_impl(spec.cone, spec.dist, horizon, radius,
                              [&](const Vec& y) { return sd.u(m * y); });
}

double harmonicity_residual(const HarmonicTable& table, const StepDistribution& dist,
                            const Cone& cone, const IVec& x) {
  dist.validate();
  double acc = 0;
  for (std::size_t si = 0; si < dist.support.size(); ++si) {
    IVec y = x + dist.support[si];
    if (!contains(cone, y.cast<double>())) continue;
    acc += dist.probs[si] * table.value_at(y);
  }
  return std::abs(acc - table.value_at(x));
}

InvarianceReport invariance_check(const Cone& cone, const StepDistribution& dist, const IVec& x,
                                  const std::vector<ExtensionParams>& params_list, long n_samples,
                                  long horizon_cap, Rng& rng) {
  if (params_list.empty()) throw std::invalid_argument("invariance_check: empty parameter list");
  InvarianceReport report;
  report.params = params_list;
  for (std::size_t i = 0; i < params_list.size(); ++i) {
    Rng sub(rng.next_u64(), 0x696e76 + i);
    report.estimates.push_back(
        v_series_estimate(cone, dist, x, params_list[i], n_samples, horizon_cap, sub));
  }
  double worst = 0;
  for (std::size_t i = 0; i < report.estimates.size(); ++i)
    for (std::size_t k = i + 1; k < report.estimates.size(); ++k) {
      double delta = std::abs(report.estimates[i].value - report.estimates[k].value);
      double sigma = std::hypot(report.estimates[i].stderr_, report.estimates[k].stderr_);
      if (sigma == 0) {
        if (delta > 1e-12) worst = std::max(worst, 1e9);
      } else {
        worst = std::max(worst, delta / sigma);
      }
    }
  report.max_sigma_distance = worst;
  report.consistent = worst <= 3.0;
  return report;
}

}  // namespace rwc
