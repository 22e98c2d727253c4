#pragma once

#include "rwc/geometry.hpp"
#include "rwc/rng.hpp"

#include <optional>
#include <vector>

namespace rwc {

using IVec = Eigen::VectorXi;

struct SingularCovariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonzeroMean : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoInteriorMinimum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-support lattice step law.
struct StepDistribution {
  std::vector<IVec> support;
  std::vector<double> probs;

  int dim() const { return support.empty() ? 0 : static_cast<int>(support[0].size()); }
  void validate() const;
  std::vector<double> cumulative() const;
  StepDistribution reflected() const;  // law of -X
  double max_step_norm() const;
};

struct WalkSpec {
  Cone cone;
  StepDistribution dist;
  Mat whitening;    // M with M X having identity covariance
  Cone image_cone;  // M(K)
};

std::pair<Vec, Mat> moments(const StepDistribution& dist);

// Symmetric positive-definite inverse square root of the covariance.
Mat whiten(const StepDistribution& dist);

WalkSpec make_walk_spec(const Cone& cone, const StepDistribution& dist);

struct AssumptionReport {
  bool normalized;
  bool moment_ok;
  std::optional<bool> strongly_aperiodic;  // nullopt = unknown
  double alpha_required;
};

AssumptionReport check_assumptions(const WalkSpec& spec);

struct TiltResult {
  Vec h0;
  double R_h0;
  StepDistribution tilted;
};

// Minimizes R(h) = N^{-1} sum_i exp(<h, s_i>) over the step multiset.
TiltResult cramer_tilt(const std::vector<IVec>& steps);

// Positions x, x+S(1), ..., x+S(n).
std::vector<IVec> sample_path(const StepDistribution& dist, const IVec& x, int n, Rng& rng);

// One step per line: dx1 ... dxd [prob]; '#' comments; missing probs mean
// uniform weights.
StepDistribution parse_steps(const std::string& path);
StepDistribution parse_steps_text(const std::string& text);

// Per-coordinate spacing of the sublattice generated by step differences
// (used as the continuity-correction cell for lattice histograms).
std::vector<long> coordinate_spacing(const StepDistribution& dist);

// Unweighted step multiset for path counting: integer rows only, repeats
// allowed and meaningful.
std::vector<IVec> parse_step_multiset(const std::string& path);
std::vector<IVec> parse_step_multiset_text(const std::string& text);

}  // namespace rwc
