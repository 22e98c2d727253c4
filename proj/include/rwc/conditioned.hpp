#pragma once

#include "rwc/dp.hpp"
#include "rwc/geometry.hpp"
#include "rwc/harmonic.hpp"
#include "rwc/rng.hpp"
#include "rwc/walk.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rwc {

struct ZeroSurvival : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonpositiveV : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PeriodicWalk : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ZeroBridgeMass : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Layer-checkpointed table of q_k(z) = P(tau_z > k) for k <= horizon over a
// truncated box (walks leaving the box count as killed, so the table is an
// exact survival law of the box-killed walk and a lower bound for the cone).
class SurvivalTable {
public:
  SurvivalTable(const Cone& cone, const StepDistribution& dist, double radius, long horizon,
                long stride = 0);  // stride 0: about sqrt(horizon)

  const LatticeBox& box() const { return box_; }
  long horizon() const { return horizon_; }
  long stride() const { return stride_; }

  // q_k over the whole box (recomputed from the nearest checkpoint).
  std::vector<double> layer(long k) const;
  double q(long k, const IVec& z) const;

  // All layers j*stride <= k < min((j+1)*stride, horizon+1) for block j,
  // indexed [k - j*stride].
  std::vector<std::vector<double>> block(long j) const;
  long blocks() const { return static_cast<long>(checkpoints_.size()); }

  const StepDistribution& dist() const { return dist_; }
  const Cone& cone() const { return cone_; }

private:
  Cone cone_;
  StepDistribution dist_;
  LatticeBox box_;
  long horizon_;
  long stride_;
  std::vector<std::vector<double>> checkpoints_;
};

struct SurvivalBracket {
  double lower;  // box-escaping paths counted as killed
  double upper;  // box-escaping paths counted as alive forever
};

// Exact q_n(x) brackets by backward DP on a box of the given radius
// (radius <= 0: cover the full reachable range, brackets coincide).
SurvivalBracket survival_dp(const Cone& cone, const StepDistribution& dist, const IVec& x, long n,
                            double radius = -1);

// P(x + S(n) = y, tau_x > n); exact when the box covers the reachable range.
double pointmass_dp(const Cone& cone, const StepDistribution& dist, const IVec& x, const IVec& y,
                    long n, double radius = -1);

// Killed-walk occupation layer: box plus P(x + S(n) = y, tau_x > n) for all y.
struct PointmassLayer {
  LatticeBox box;
  std::vector<double> values;
  double total;  // survival probability within the box
};

PointmassLayer pointmass_layer(const Cone& cone, const StepDistribution& dist, const IVec& x,
                               long n, double radius = -1);

// Path with law exactly P(S(1..n) in . | tau_x > n) under the box-killed
// walk: step k from z uses weights p_s q_{n-k-1}(z+s) / q_{n-k}(z).
std::vector<IVec> exact_conditioned_sampler(const SurvivalTable& table, const IVec& x, long n,
                                            Rng& rng);

// Endpoints of n_samples independent conditioned paths, advanced layer by
// layer so each checkpoint block is regenerated once; sample i uses the
// substream (seed, i), so results do not depend on the worker count.
std::vector<IVec> conditioned_endpoints(const SurvivalTable& table, const IVec& x, long n,
                                        long n_samples, std::uint64_t seed, int workers = 0);

// Doob h-transform path; kernel p_s V(z+s)/V(z) for z+s in K, rows
// renormalized; max renormalization defect (= harmonicity residual) reported.
std::vector<IVec> htransform_sampler(const HarmonicTable& table, const StepDistribution& dist,
                                     const Cone& cone, const IVec& x, long n, Rng& rng,
                                     double* max_defect = nullptr);

struct GofReport {
  double statistic;
  double p_value;
  std::size_t cells;
  long n;
  std::uint64_t seed;
  std::vector<std::pair<std::string, double>> extras;
  std::string to_json() const;
};

// Chi-square of scaled endpoints y = M(x+S(n))/sqrt(n) against the limit
// density H0 u(y) exp(-|y|^2/2) on the whitened cone, over equal-probability
// product cells in separable coordinates. gaussian_control tests the same
// samples against the unconditioned Gaussian restricted to the cone (the
// power check: it must fail).
GofReport clt_verify(const WalkSpec& spec, const std::vector<IVec>& endpoints, long n,
                     int radial_cells, int angular_cells, bool gaussian_control = false);

struct SupErrorPoint {
  long n;
  double sup_error;
};

// Uniform LLT check: sup over y of |n^{p/2+d/2} P(x+S(n)=y, tau_x>n) -
// v_cell kappa V(x) H0 u(My/sqrt n) e^{-|My|^2/2n}| per grid point, where
// v_cell is the covolume of the whitened lattice.
std::vector<SupErrorPoint> llt_uniform_verify(const WalkSpec& spec, const HarmonicTable& vhat,
                                              const IVec& x, const std::vector<long>& n_grid);

struct RatioPoint {
  long n;
  double dp_value;
  double predicted;
  double ratio;
};

// Fixed-endpoint LLT: pointmass_dp against the asymptote
// v_cell (2 pi)^d kappa^2 rho H0^2 V(x) V'(y) n^{-p-d/2} with V, V' whitened
// value-iteration tables for the walk and its reflection.
std::vector<RatioPoint> llt_fixed_verify(const WalkSpec& spec, const HarmonicTable& vhat,
                                         const HarmonicTable& vhat_reflected, const IVec& x,
                                         const IVec& y, const std::vector<long>& n_grid);

// Midpoint of the conditioned bridge x -> y over n steps at time [t n]:
// exact two-sided DP midpoint law, jittered samples, chi-square against the
// scaled density u^2(z) exp(-|z|^2/2) in separable coordinates.
GofReport bridge_midpoint_verify(const WalkSpec& spec, const IVec& x, const IVec& y, long n,
                                 double t, int radial_cells, int angular_cells, long n_samples,
                                 std::uint64_t seed, double radius = -1);

}  // namespace rwc
