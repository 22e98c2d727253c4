#pragma once

#include "rwc/geometry.hpp"
#include "rwc/special.hpp"
#include "rwc/spectral.hpp"

namespace rwc {

struct SeriesDomain : std::domain_error {
  using std::domain_error::domain_error;
};

struct BmConstants {
  std::vector<double> a_j;
  std::vector<double> B_j;
  double kappa;
  double h0_const;
  double rho_const;
};

BmConstants bm_constants(const Cone& cone, int truncation = 64);

// P(tau^bm_x > t) for Brownian motion started at x killed at the cone
// boundary. Closed form for d=1, coordinate product for orthants,
// eigenfunction series for the wedge catalog (valid for |x|^2 <= t).
double bm_survival(const Cone& cone, const Vec& x, double t, const SeriesControl& ctl = {});

// Density of P(tau^bm_x > t, x + B(t) in dz); symmetric in (x, z).
double bm_exit_density(const Cone& cone, const Vec& x, const Vec& z, double t,
                       const SeriesControl& ctl = {});

// Constant in P(tau^bm_x > t) ~ kappa u(x) t^{-p/2}.
double kappa(const Cone& cone);

// H0 = 1 / int_K u(y) exp(-|y|^2/2) dy.
double h0_constant(const Cone& cone);

// rho = (2 pi)^{-d} int_K u^2(w) exp(-|w|^2/2) dw.
double rho_constant(const Cone& cone);

// Prefactor in b_t(x,z) ~ kappa0 u(x) u(z) exp(-|z|^2/2t) t^{-p-d/2}.
double kappa0(const Cone& cone);

}  // namespace rwc
