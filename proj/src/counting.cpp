#include "rwc/counting.hpp"

#include "rwc/dp.hpp"
#include "rwc/spectral.hpp"
#include "rwc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace rwc {

namespace {

// Collapse the multiset to distinct steps with integer multiplicities.
struct StepMultiset {
  std::vector<IVec> steps;
  std::vector<long> mult;
  long total = 0;
};

StepMultiset collapse(const std::vector<IVec>& steps) {
  if (steps.empty()) throw std::invalid_argument("count_paths: empty step multiset");
  std::map<std::vector<int>, long> agg;
  const int d = static_cast<int>(steps[0].size());
  for (const auto& s : steps) {
    if (s.size() != d) throw DimensionMismatch("count_paths: inconsistent step dimensions");
    agg[std::vector<int>(s.data(), s.data() + s.size())] += 1;
  }
  StepMultiset out;
  for (const auto& [key, m] : agg) {
    IVec s(d);
    for (int i = 0; i < d; ++i) s(i) = key[static_cast<std::size_t>(i)];
    out.steps.push_back(s);
    out.mult.push_back(m);
    out.total += m;
  }
  return out;
}

LatticeBox reachable_box(const Cone& cone, const StepMultiset& ms, const IVec& x, int n) {
  const int d = static_cast<int>(x.size());
  IVec lo = x, hi = x;
  for (std::size_t i = 0; i < ms.steps.size(); ++i)
    for (int k = 0; k < d; ++k) {
      lo(k) = std::min(lo(k), x(k) + n * std::min(0, ms.steps[i](k)));
      hi(k) = std::max(hi(k), x(k) + n * std::max(0, ms.steps[i](k)));
    }
  return make_box(cone, lo, hi);
}

}  // namespace

std::vector<mpz_class> count_paths_profile(const std::vector<IVec>& steps, const Cone& cone,
                                           const IVec& x, const IVec& y, int n_max) {
  if (n_max < 0) throw std::invalid_argument("count_paths: negative horizon");
  Vec xr = x.cast<double>();
  if (!contains(cone, xr)) throw std::invalid_argument("count_paths: start outside the open cone");
  StepMultiset ms = collapse(steps);
  LatticeBox box = reachable_box(cone, ms, x, n_max);
  std::vector<mpz_class> layer(box.size(), 0), next(box.size(), 0);
  std::vector<mpz_class> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  long xi = box.index(x);
  layer[static_cast<std::size_t>(xi)] = 1;
  long yi = box.index(y);
  bool y_in = yi >= 0 && box.inside[static_cast<std::size_t>(yi)];
  out.push_back(x == y ? mpz_class(1) : mpz_class(0));
  for (int n = 1; n <= n_max; ++n) {
    for (auto& c : next) c = 0;
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
      if (layer[idx] == 0) continue;
      IVec from = box.point(idx);
      for (std::size_t si = 0; si < ms.steps.size(); ++si) {
        long j = box.index(from + ms.steps[si]);
        if (j >= 0 && box.inside[static_cast<std::size_t>(j)])
          next[static_cast<std::size_t>(j)] += ms.mult[si] * layer[idx];
      }
    }
    layer.swap(next);
    out.push_back(y_in ? layer[static_cast<std::size_t>(yi)] : mpz_class(0));
  }
  return out;
}

mpz_class count_paths(const std::vector<IVec>& steps, const Cone& cone, const IVec& x,
                      const IVec& y, int n) {
  return count_paths_profile(steps, cone, x, y, n).back();
}

AsymptoticFit asymptotic_predict(const std::vector<IVec>& steps, const Cone& cone, const IVec& x,
                                 const IVec& y, int n_max) {
  TiltResult tilt = cramer_tilt(steps);
  double growth = static_cast<double>(steps.size()) * tilt.R_h0;
  std::vector<mpz_class> counts = count_paths_profile(steps, cone, x, y, n_max);

  // Nonzero horizons form an arithmetic progression for parity-periodic sets.
  std::vector<int> hits;
  for (int n = 1; n <= n_max; ++n)
    if (counts[static_cast<std::size_t>(n)] > 0) hits.push_back(n);
  AsymptoticFit fit{};
  fit.growth = growth;
  fit.converged = false;
  if (hits.size() < 8) return fit;
  int period = 0;
  for (std::size_t i = 1; i < hits.size(); ++i) period = std::gcd(period, hits[i] - hits[i - 1]);
  if (period == 0) period = 1;
  fit.residue_period = period;

  // log(counts * growth^{-n}) against log n on the last half of the range.
  // Logs come from the mpz mantissa/exponent split so huge counts never
  // overflow a double; values are re-centered before exponentiating for the
  // shared fitting routine.
  std::vector<std::pair<double, double>> series;  // (n, log scaled count)
  for (int n : hits) {
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, counts[static_cast<std::size_t>(n)].get_mpz_t());
    double log_scaled = std::log(mant) + static_cast<double>(exp2) * std::log(2.0) -
                        n * std::log(growth);
    series.emplace_back(static_cast<double>(n), log_scaled);
  }
  std::size_t m = series.size();
  std::size_t lo = m / 2;
  std::vector<std::pair<double, double>> window;
  for (std::size_t i = lo; i < m; ++i)
    window.emplace_back(series[i].first, std::exp(series[i].second - series[lo].second));
  SlopeFit sf = loglog_slope(window, 0, window.size() - 1);
  fit.poly_exponent = -sf.slope;
  fit.exponent_ci_low = -sf.ci_high;
  fit.exponent_ci_high = -sf.ci_low;
  fit.c_estimate = std::exp(sf.intercept + series[lo].second);
  fit.converged = (fit.exponent_ci_high - fit.exponent_ci_low) < 0.5;
  return fit;
}

VaropoulosReport varopoulos_upper_check(const std::vector<IVec>& steps, const Cone& cone,
                                        const std::vector<std::pair<IVec, IVec>>& grid,
                                        const Vec& x0, int n_max) {
  VaropoulosReport report;
  report.all_converged = true;
  double max_ratio = 0;
  for (const auto& [gx, gy] : grid) {
    AsymptoticFit fit = asymptotic_predict(steps, cone, gx, gy, n_max);
    VaropoulosEntry e;
    e.x = gx;
    e.y = gy;
    e.c_estimate = fit.converged ? fit.c_estimate : std::nan("");
    e.u_product = u_value(cone, gx.cast<double>() + x0) * u_value(cone, gy.cast<double>() + x0);
    e.ratio = fit.converged ? e.c_estimate / e.u_product : std::nan("");
    if (fit.converged)
      max_ratio = std::max(max_ratio, e.ratio);
    else
      report.all_converged = false;
    report.entries.push_back(std::move(e));
  }
  report.fitted_constant = max_ratio;
  return report;
}

}  // namespace rwc
