#pragma once

#include "rwc/geometry.hpp"

#include <functional>
#include <vector>

namespace rwc {

// Enlargement / exponent-reduction parameters for the extended function v.
struct ExtensionParams {
  double epsilon;
  double a;
};

// Largest admissible epsilon for the cone's analytic extension.
double epsilon_max(const Cone& cone);

ExtensionParams default_extension(const Cone& cone);

struct EigenMode {
  int j;
  double lambda;
  double a_j;
  double int_m;  // integral of m_j over Sigma
  double B_j;
};

// Analytic spectral data of a catalog cone: homogeneity exponent p, the
// principal eigenfunction m1 (L2(Sigma)-normalized, positive), and the
// derived constants kappa, H0, rho.
class SpectralData {
public:
  const Cone& cone() const { return cone_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  double lambda1() const { return lambda1_; }
  double int_m1() const { return int_m1_; }
  double kappa() const { return kappa_; }
  double h0_const() const { return h0_; }
  double rho_const() const { return rho_; }

  bool wedge_like() const { return wedge_like_; }
  double theta0() const { return theta0_; }
  double alpha() const { return alpha_; }

  // mode list for the wedge catalog (modes with zero angular integral are
  // kept so the survival/density series can use m_j pointwise)
  const std::vector<EigenMode>& eigen_list() const { return modes_; }
  double m_j(int j, const Vec& theta) const;

  double m1(const Vec& theta) const;  // theta need not be normalized
  double u(const Vec& x) const;       // |x|^p m1(x/|x|), analytic extension off K
  double v(const Vec& x, const ExtensionParams& params) const;

private:
  friend SpectralData spectral_data(const Cone&, int);
  explicit SpectralData(const Cone& c) : cone_(c), dim_(c.dim()) {}

  Cone cone_;
  int dim_;
  double p_ = 0, lambda1_ = 0, int_m1_ = 0;
  double kappa_ = 0, h0_ = 0, rho_ = 0;
  bool wedge_like_ = false;
  double theta0_ = 0, alpha_ = 0;
  bool polynomial_u_ = false;  // u extends to a global harmonic polynomial
  double weyl_norm_ = 0;       // m1 = weyl_norm * u_raw on Sigma (Weyl families)
  std::vector<EigenMode> modes_;
};

SpectralData spectral_data(const Cone& cone, int truncation = 64);

// Convenience wrappers (construct SpectralData per call; hot loops should
// hold a SpectralData and use its members).
double u_value(const Cone& cone, const Vec& x);
double v_value(const Cone& cone, const Vec& x, const ExtensionParams& params);

// Adaptive quadrature of f over the spherical triangle with the given
// vertices (unit vectors, subtending less than a hemisphere).
double spherical_triangle_quad(const Vec& a, const Vec& b, const Vec& c,
                               const std::function<double(const Vec&)>& f,
                               double abs_tol = 1e-8);

}  // namespace rwc
