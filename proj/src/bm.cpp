#include "rwc/bm.hpp"

#include <cmath>
#include <numbers>

namespace rwc {

namespace {

double halfline_survival(double x, double t) {
  return 2.0 * norm_cdf(x / std::sqrt(t)) - 1.0;
}

double halfline_density(double x, double z, double t) {
  double s = std::sqrt(t);
  auto phi = [&](double w) { return std::exp(-w * w / (2 * t)) / (s * std::sqrt(2 * std::numbers::pi)); };
  return phi(z - x) - phi(z + x);
}

}  // namespace

BmConstants bm_constants(const Cone& cone, int truncation) {
  SpectralData sd = spectral_data(cone, truncation);
  BmConstants bc;
  for (const auto& m : sd.eigen_list()) {
    bc.a_j.push_back(m.a_j);
    bc.B_j.push_back(m.B_j);
  }
  if (bc.a_j.empty()) bc.a_j.push_back(sd.p());  // d=1: single mode a1 = p
  bc.kappa = sd.kappa();
  bc.h0_const = sd.h0_const();
  bc.rho_const = sd.rho_const();
  return bc;
}

double bm_survival(const Cone& cone, const Vec& x, double t, const SeriesControl& ctl) {
  if (!(t > 0)) throw std::invalid_argument("bm_survival: t must be positive");
  if (!contains(cone, x)) throw std::invalid_argument("bm_survival: x must lie in the open cone");
  if (cone.dim() == 1) return halfline_survival(x(0), t);
  if (cone.kind() == ConeKind::Orthant) {
    double prod = 1.0;
    for (int i = 0; i < x.size(); ++i) prod *= halfline_survival(x(i), t);
    return prod;
  }
  SpectralData sd = spectral_data(cone, ctl.max_terms);
  if (!sd.wedge_like())
    throw UnsupportedCone("bm_survival: series needs the wedge catalog: " + cone.to_string());
  double q = x.squaredNorm() / (2 * t);
  if (x.squaredNorm() > t)
    throw SeriesDomain("bm_survival: series restricted to |x|^2 <= t");
  const int d = cone.dim();
  double sum = 0;
  int small_run = 0;
  for (const auto& m : sd.eigen_list()) {
    if (m.B_j == 0.0) continue;
    double term = m.B_j * std::pow(q, m.a_j / 2) *
                  hyp1f1(m.a_j / 2, m.a_j + d / 2.0, -q, ctl) * sd.m_j(m.j, x);
    sum += term;
    if (std::abs(term) < ctl.abs_tol + ctl.rel_tol * std::abs(sum)) {
      if (++small_run >= 2) return sum;
    } else {
      small_run = 0;
    }
  }
  throw NonConvergence("bm_survival: eigenfunction series did not converge");
}

double bm_exit_density(const Cone& cone, const Vec& x, const Vec& z, double t,
                       const SeriesControl& ctl) {
  if (!(t > 0)) throw std::invalid_argument("bm_exit_density: t must be positive");
  if (!contains(cone, x) || !contains(cone, z))
    throw std::invalid_argument("bm_exit_density: x, z must lie in the open cone");
  if (cone.dim() == 1) return halfline_density(x(0), z(0), t);
  if (cone.kind() == ConeKind::Orthant) {
    double prod = 1.0;
    for (int i = 0; i < x.size(); ++i) prod *= halfline_density(x(i), z(i), t);
    return prod;
  }
  SpectralData sd = spectral_data(cone, ctl.max_terms);
  if (!sd.wedge_like())
    throw UnsupportedCone("bm_exit_density: series needs the wedge catalog: " + cone.to_string());
  const int d = cone.dim();
  double rx = x.norm(), rz = z.norm();
  double w = rx * rz / t;
  if (w > 10.0) throw SeriesDomain("bm_exit_density: series restricted to |x||z|/t <= 10");
  double pref = std::exp(-(rx * rx + rz * rz) / (2 * t)) /
                (t * std::pow(rx, d / 2.0 - 1) * std::pow(rz, d / 2.0 - 1));
  double sum = 0;
  int small_run = 0;
  for (const auto& m : sd.eigen_list()) {
    double nu = m.a_j - 1 + d / 2.0;
    double term = bessel_i(nu, w, ctl) * sd.m_j(m.j, x) * sd.m_j(m.j, z);
    sum += term;
    if (std::abs(term) < ctl.abs_tol + ctl.rel_tol * std::abs(sum)) {
      if (++small_run >= 2) return pref * sum;
    } else {
      small_run = 0;
    }
  }
  throw NonConvergence("bm_exit_density: Bessel series did not converge");
}

double kappa(const Cone& cone) { return spectral_data(cone).kappa(); }

double h0_constant(const Cone& cone) { return spectral_data(cone).h0_const(); }

double rho_constant(const Cone& cone) { return spectral_data(cone).rho_const(); }

double kappa0(const Cone& cone) {
  SpectralData sd = spectral_data(cone);
  double p = sd.p();
  int d = sd.dim();
  return std::pow(2.0, -(p - 1 + d / 2.0)) / std::tgamma(p + d / 2.0);
}

}  // namespace rwc
