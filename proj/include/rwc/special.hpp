#pragma once

#include <stdexcept>

namespace rwc {

struct SeriesControl {
  int max_terms = 500;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
};

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kummer confluent hypergeometric 1F1(a,b,z) by direct series.
// For z < -1 the Kummer transform 1F1(a,b,z) = e^z 1F1(b-a,b,-z) is applied
// to avoid cancellation.
double hyp1f1(double a, double b, double z, const SeriesControl& ctl = {});

// Modified Bessel function I_nu(x), nu >= 0, by the ascending series.
double bessel_i(double nu, double x, const SeriesControl& ctl = {});

// Standard normal CDF.
double norm_cdf(double x);

// Regularized lower incomplete gamma P(s, x); Q(s, x) = 1 - P(s, x).
double gamma_p(double s, double x);
double gamma_q(double s, double x);

}  // namespace rwc
