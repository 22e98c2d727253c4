#include "rwc/stats.hpp"

#include "rwc/special.hpp"

#include <cmath>

namespace rwc {

double fn_bound(const FNParams& params, FNKind which) {
  if (params.n <= 0 || !(params.x_level > 0) || !(params.y_level > 0) || !(params.variance > 0))
    throw std::invalid_argument("fn_bound: n, x, y, variance must be positive");
  if (params.tail_prob_at_y < 0 || params.tail_prob_at_y > 1)
    throw std::invalid_argument("fn_bound: tail probability outside [0,1]");
  const double n = static_cast<double>(params.n);
  const double x = params.x_level, y = params.y_level;
  switch (which) {
    case FNKind::NF1:
    case FNKind::NF2: {
      double r = x / y;
      double power = r * std::log(n * params.variance / (x * y));
      double base = std::exp(r + power);
      return which == FNKind::NF1 ? base : base + n * params.tail_prob_at_y;
    }
    case FNKind::NF3:
    case FNKind::NF4: {
      const double d = params.dimension;
      if (d < 1) throw std::invalid_argument("fn_bound: dimension must be >= 1");
      double r = x / (d * y);
      double base = 2 * d * std::exp(r + r * std::log(d * n / (x * y)));
      return which == FNKind::NF3 ? base : base + n * params.tail_prob_at_y;
    }
  }
  throw std::invalid_argument("fn_bound: unknown bound kind");
}

namespace {

std::pair<double, double> ls_fit(const std::vector<double>& lx, const std::vector<double>& ly,
                                 std::size_t skip) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (i == skip) continue;
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    cnt += 1;
  }
  double det = cnt * sxx - sx * sx;
  if (std::abs(det) < 1e-14 * (cnt * sxx + sx * sx + 1))
    throw DegenerateWindow("loglog_slope: abscissas are collinear/degenerate");
  double slope = (cnt * sxy - sx * sy) / det;
  double intercept = (sy - slope * sx) / cnt;
  return {slope, intercept};
}

}  // namespace

SlopeFit loglog_slope(const std::vector<std::pair<double, double>>& series,
                      std::size_t window_lo, std::size_t window_hi) {
  if (window_hi >= series.size() || window_lo > window_hi)
    throw DegenerateWindow("loglog_slope: window out of range");
  std::size_t m = window_hi - window_lo + 1;
  if (m < 4) throw DegenerateWindow("loglog_slope: need at least 4 points");
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto [n, v] = series[window_lo + i];
    if (!(n > 0) || !(v > 0))
      throw DegenerateWindow("loglog_slope: nonpositive abscissa or value");
    lx[i] = std::log(n);
    ly[i] = std::log(v);
  }
  auto [slope, intercept] = ls_fit(lx, ly, m);  // skip index m = no skip
  // Leave-one-out jackknife on the slope.
  double mean = 0;
  std::vector<double> jack(m);
  for (std::size_t i = 0; i < m; ++i) {
    jack[i] = ls_fit(lx, ly, i).first;
    mean += jack[i];
  }
  mean /= static_cast<double>(m);
  double var = 0;
  for (double j : jack) var += (j - mean) * (j - mean);
  var *= (static_cast<double>(m) - 1) / static_cast<double>(m);
  double half = 1.96 * std::sqrt(var);
  return SlopeFit{slope, intercept, slope - half, slope + half};
}

GofResult gof_chi2(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("gof_chi2: size mismatch");
  if (observed.size() < 2) throw CellsTooSmall("gof_chi2: need at least 2 cells");
  double stat = 0, total = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i] < 20.0)
      throw CellsTooSmall("gof_chi2: expected count below 20 in a cell");
    double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
    total += expected[i];
  }
  double dof = static_cast<double>(observed.size() - 1);
  double p = gamma_q(dof / 2, stat / 2);
  return GofResult{stat, p, observed.size(), total};
}

}  // namespace rwc
