#pragma once

#include "rwc/geometry.hpp"
#include "rwc/rng.hpp"
#include "rwc/spectral.hpp"
#include "rwc/walk.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rwc {

struct MissingNeighbor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AllPathsCensored : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShiftTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnboundedSupport : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class HarmonicMethod { series_mc, limit_dp, value_iteration, closed_form_1d, bounded_jump };

std::string to_string(HarmonicMethod method);

struct HarmonicTable {
  std::vector<IVec> points;
  std::vector<double> values;
  std::vector<double> stderrs;  // 0 for exact DP
  HarmonicMethod method = HarmonicMethod::value_iteration;
  long horizon = 0;
  double radius = 0;
  ExtensionParams params{0, 0};
  std::optional<IVec> shift;  // bounded_jump only

  double value_at(const IVec& x) const;  // throws MissingNeighbor
  bool has(const IVec& x) const;
  std::string to_csv() const;
  static HarmonicTable from_csv(const std::string& text);
};

// One-step harmonicity defect of the extended function v (exact sum).
double corrector_f(const Cone& cone, const StepDistribution& dist, const Vec& x,
                   const ExtensionParams& params);

struct Estimate {
  double value;
  double stderr_;
};

// Monte Carlo estimate of V(x) = v(x) - E v(x + S(tau)) + E sum_{k<tau} f.
Estimate v_series_estimate(const Cone& cone, const StepDistribution& dist, const IVec& x,
                           const ExtensionParams& params, long n_samples, long horizon_cap,
                           Rng& rng);

struct LimitDpResult {
  double value;
  double mass_lost;  // probability of surviving paths that left the box
};

// E[u(x + S(N)); tau_x > N] by forward DP, box of the given radius (radius
// <= 0 picks |x| + 4 max|s| sqrt(N)).
LimitDpResult v_limit_dp(const Cone& cone, const StepDistribution& dist, const IVec& x,
                         long horizon, double radius = -1);

// Same limit with u replaced by u(. + x_star) for bounded-jump walks.
LimitDpResult v_bounded_jump(const Cone& cone, const StepDistribution& dist, const IVec& x,
                             const Vec& x_star, long horizon, double radius = -1);

// d=1 closed form V(x) = x - E[x + S(tau_x)] via a banded linear solve of the
// exit-position equation on [1, L].
double v_one_dim(const StepDistribution& dist, long x, long radius = 2000);

// V_N = E[u(. + S(N)); tau > N] on every lattice point of the box at once
// (backward value iteration); stderr identically 0.
HarmonicTable value_iteration_table(const Cone& cone, const StepDistribution& dist, long horizon,
                                    double radius);

// Whitened variant: seeds with u of the image cone composed with the
// whitening map, so the values carry the normalization used by the limit
// theorems for non-normalized step laws.
HarmonicTable value_iteration_table(const WalkSpec& spec, long horizon, double radius);

// |sum_{s: x+s in K} p_s V(x+s) - V(x)| read from the table.
double harmonicity_residual(const HarmonicTable& table, const StepDistribution& dist,
                            const Cone& cone, const IVec& x);

struct InvarianceReport {
  std::vector<ExtensionParams> params;
  std::vector<Estimate> estimates;
  double max_sigma_distance;  // max pairwise |delta| / combined sigma (0 if exact)
  bool consistent;
};

InvarianceReport invariance_check(const Cone& cone, const StepDistribution& dist, const IVec& x,
                                  const std::vector<ExtensionParams>& params_list, long n_samples,
                                  long horizon_cap, Rng& rng);

}  // namespace rwc
