#pragma once

#include "rwc/geometry.hpp"
#include "rwc/walk.hpp"

#include <gmpxx.h>

#include <vector>

namespace rwc {

// Exact number of n-step paths x -> y using the step multiset, staying in the
// open cone at every time 1..n.
mpz_class count_paths(const std::vector<IVec>& steps, const Cone& cone, const IVec& x,
                      const IVec& y, int n);

// Counts for every horizon 0..n_max at the fixed endpoint (single forward DP).
std::vector<mpz_class> count_paths_profile(const std::vector<IVec>& steps, const Cone& cone,
                                           const IVec& x, const IVec& y, int n_max);

struct AsymptoticFit {
  double growth;         // N * R(h0)
  double poly_exponent;  // fitted decay exponent of counts * growth^{-n}
  double exponent_ci_low;
  double exponent_ci_high;
  double c_estimate;     // stabilized prefactor
  int residue_period;    // arithmetic progression of nonzero counts used
  bool converged;
};

AsymptoticFit asymptotic_predict(const std::vector<IVec>& steps, const Cone& cone, const IVec& x,
                                 const IVec& y, int n_max);

struct VaropoulosEntry {
  IVec x, y;
  double c_estimate;
  double u_product;  // u(x + x0) * u(y + x0)
  double ratio;
};

struct VaropoulosReport {
  std::vector<VaropoulosEntry> entries;
  double fitted_constant;  // max ratio over converged entries
  bool all_converged;
};

// Diagnostic: fitted prefactors against the harmonic-product upper envelope
// u(x + x0) u(y + x0) over a grid of endpoints.
VaropoulosReport varopoulos_upper_check(const std::vector<IVec>& steps, const Cone& cone,
                                        const std::vector<std::pair<IVec, IVec>>& grid,
                                        const Vec& x0, int n_max);

}  // namespace rwc
