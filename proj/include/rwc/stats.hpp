#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rwc {

struct DegenerateWindow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CellsTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FNParams {
  long n;
  double x_level;
  double y_level;
  double variance;        // E[xi^2]
  double tail_prob_at_y;  // P(xi > y) resp. P(|X| > y)
  int dimension = 1;
};

enum class FNKind { NF1, NF2, NF3, NF4 };

// Fuk-Nagaev bounds for P(S(n) > x) (NF1/NF2, one-dimensional) and
// P(max_k |S(k)| > dx) (NF3/NF4, d-dimensional coordinate split).
double fn_bound(const FNParams& params, FNKind which);

struct SlopeFit {
  double slope;
  double intercept;
  double ci_low;   // jackknife 95% interval on the slope
  double ci_high;
};

// Least-squares slope of log(value) against log(n) over [window_lo, window_hi]
// (inclusive index range into the series), with leave-one-out jackknife CI.
SlopeFit loglog_slope(const std::vector<std::pair<double, double>>& series,
                      std::size_t window_lo, std::size_t window_hi);

struct GofResult {
  double statistic;
  double p_value;
  std::size_t cells;
  double total_expected;
};

// Pearson chi-square of observed counts against expected counts (same total);
// requires >= 2 cells and expected >= 20 in each.
GofResult gof_chi2(const std::vector<double>& observed, const std::vector<double>& expected);

}  // namespace rwc
