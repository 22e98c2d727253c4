#include "rwc/spectral.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace rwc {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_weyl(ConeKind k) {
  return k == ConeKind::WeylA || k == ConeKind::WeylC || k == ConeKind::WeylD;
}

double weyl_exponent(ConeKind k, int d) {
  switch (k) {
    case ConeKind::WeylA: return d * (d - 1) / 2.0;
    case ConeKind::WeylC: return static_cast<double>(d) * d;
    case ConeKind::WeylD: return static_cast<double>(d) * (d - 1);
    default: throw std::logic_error("not a Weyl chamber");
  }
}

// product of positive-root linear forms; harmonic on all of R^d and
// positive inside the chamber
double weyl_u_raw(ConeKind k, const Vec& x) {
  int d = static_cast<int>(x.size());
  double prod = 1.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double diff = x(j) - x(i);
      prod *= (k == ConeKind::WeylA) ? diff : diff * (x(j) + x(i));
    }
  if (k == ConeKind::WeylC)
    for (int i = 0; i < d; ++i) prod *= x(i);
  return prod;
}

// 7-point degree-5 rule on a planar triangle
double tri_rule(const Vec& a, const Vec& b, const Vec& c,
                const std::function<double(const Vec&)>& g) {
  static const double w0 = 9.0 / 40.0;
  static const double wa = (155.0 - std::sqrt(15.0)) / 1200.0;
  static const double wb = (155.0 + std::sqrt(15.0)) / 1200.0;
  static const double t1 = (6.0 - std::sqrt(15.0)) / 21.0;
  static const double t2 = (6.0 + std::sqrt(15.0)) / 21.0;
  struct Node { double l1, l2, l3, w; };
  const Node nodes[7] = {
      {1.0 / 3, 1.0 / 3, 1.0 / 3, w0},
      {t1, t1, 1 - 2 * t1, wa}, {t1, 1 - 2 * t1, t1, wa}, {1 - 2 * t1, t1, t1, wa},
      {t2, t2, 1 - 2 * t2, wb}, {t2, 1 - 2 * t2, t2, wb}, {1 - 2 * t2, t2, t2, wb}};
  Eigen::Vector3d ab = b - a, ac = c - a;
  double area = 0.5 * ab.cross(ac).norm();
  double sum = 0;
  for (const auto& n : nodes) {
    Vec pnt = n.l1 * a + n.l2 * b + n.l3 * c;
    sum += n.w * g(pnt);
  }
  // the 7 weights sum to 1, so the rule is sum * area directly
  return sum * area;
}

double sph_tri_recurse(const Vec& a, const Vec& b, const Vec& c,
                       const std::function<double(const Vec&)>& g,
                       double parent, double tol, int depth) {
  Vec mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
  double s1 = tri_rule(a, mab, mca, g);
  double s2 = tri_rule(mab, b, mbc, g);
  double s3 = tri_rule(mca, mbc, c, g);
  double s4 = tri_rule(mab, mbc, mca, g);
  double child = s1 + s2 + s3 + s4;
  if (depth >= 18 || std::abs(child - parent) < tol) return child;
  return sph_tri_recurse(a, mab, mca, g, s1, tol / 4, depth + 1) +
         sph_tri_recurse(mab, b, mbc, g, s2, tol / 4, depth + 1) +
         sph_tri_recurse(mca, mbc, c, g, s3, tol / 4, depth + 1) +
         sph_tri_recurse(mab, mbc, mca, g, s4, tol / 4, depth + 1);
}

}  // namespace

double spherical_triangle_quad(const Vec& a, const Vec& b, const Vec& c,
                               const std::function<double(const Vec&)>& f,
                               double abs_tol) {
  // Integrate over the planar triangle (a,b,c); radial projection onto the
  // sphere has surface element h/|P|^3 dA with h the plane's offset.
  Eigen::Vector3d n = Eigen::Vector3d(Vec(b - a)).cross(Eigen::Vector3d(Vec(c - a)));
  n.normalize();
  double h = std::abs(n.dot(Eigen::Vector3d(a)));
  if (h < 1e-12) throw std::invalid_argument("spherical triangle plane passes through origin");
  auto g = [&](const Vec& pnt) {
    double r = pnt.norm();
    return f(Vec(pnt / r)) * h / (r * r * r);
  };
  double parent = tri_rule(a, b, c, g);
  return sph_tri_recurse(a, b, c, g, parent, abs_tol, 0);
}

double epsilon_max(const Cone& cone) {
  if (cone.dim() == 1) return 0.99;
  if (is_weyl(cone.kind())) return 0.99;  // global polynomial continuation
  if (auto wf = cone.wedge_form()) {
    double margin = std::min((2 * kPi - wf->second) / 2, kPi / 2);
    return std::sin(margin / 4);
  }
  if (cone.kind() == ConeKind::LinearImage && cone.is_isotropic_image())
    return epsilon_max(cone.base());
  throw UnsupportedCone("epsilon_max: cone outside the analytic catalog: " + cone.to_string());
}

ExtensionParams default_extension(const Cone& cone) {
  return {0.1 * epsilon_max(cone), 0.05};
}

SpectralData spectral_data(const Cone& cone, int truncation) {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");

  double scale;
  if (cone.kind() == ConeKind::LinearImage && cone.is_isotropic_image(&scale)) {
    SpectralData sd = spectral_data(cone.base(), truncation);
    sd.cone_ = cone;
    return sd;
  }

  SpectralData sd(cone);
  const int d = cone.dim();
  const ConeKind k = cone.kind();

  if (d == 1 && (k == ConeKind::HalfLine || k == ConeKind::Orthant || k == ConeKind::WeylC)) {
    // u(x) = x, p = 1; Sigma is a single point carrying unit mass
    sd.p_ = 1.0;
    sd.lambda1_ = 0.0;
    sd.int_m1_ = 1.0;
    sd.polynomial_u_ = true;
  } else if (auto wf = cone.wedge_form()) {
    sd.wedge_like_ = true;
    sd.theta0_ = wf->first;
    sd.alpha_ = wf->second;
    sd.p_ = kPi / sd.alpha_;
    sd.lambda1_ = sd.p_ * sd.p_;
    double amp = std::sqrt(2.0 / sd.alpha_);
    sd.int_m1_ = amp * 2.0 * sd.alpha_ / kPi;
    for (int j = 1; j <= truncation; ++j) {
      EigenMode m;
      m.j = j;
      m.lambda = (j * kPi / sd.alpha_) * (j * kPi / sd.alpha_);
      m.a_j = j * sd.p_;
      m.int_m = (j % 2 == 1) ? amp * 2.0 * sd.alpha_ / (j * kPi) : 0.0;
      m.B_j = std::exp(std::lgamma((m.a_j + d) / 2.0) - std::lgamma(m.a_j + d / 2.0)) * m.int_m;
      sd.modes_.push_back(m);
    }
    if (is_weyl(k)) {
      // scale tying the global polynomial form to the normalized m1
      sd.polynomial_u_ = true;
      double mid = sd.theta0_ + sd.alpha_ / 2;
      Vec e(2);
      e << std::cos(mid), std::sin(mid);
      sd.weyl_norm_ = amp * std::sin(sd.p_ * sd.alpha_ / 2) / weyl_u_raw(k, e);
    }
  } else if (is_weyl(k) && d == 3) {
    sd.p_ = weyl_exponent(k, d);
    sd.lambda1_ = sd.p_ * (sd.p_ + d - 2);
    sd.polynomial_u_ = true;
    auto uraw = [&](const Vec& th) { return weyl_u_raw(k, th); };
    auto uraw2 = [&](const Vec& th) { double v = weyl_u_raw(k, th); return v * v; };
    Vec v1(3), v2(3), v3(3), v4(3);
    double i1 = 0, i2 = 0;
    if (k == ConeKind::WeylA) {
      // Sigma is the lune between the planes x1=x2 and x2=x3; split into two
      // geodesic triangles through the points 90 degrees off the axis
      v1 << 1, 1, 1;  v1 /= std::sqrt(3.0);
      v2 << -1, -1, 2; v2 /= std::sqrt(6.0);
      v3 << -2, 1, 1;  v3 /= std::sqrt(6.0);
      v4 = -v1;
      i1 = spherical_triangle_quad(v1, v2, v3, uraw) +
           spherical_triangle_quad(v2, v3, v4, uraw);
      i2 = spherical_triangle_quad(v1, v2, v3, uraw2) +
           spherical_triangle_quad(v2, v3, v4, uraw2);
    } else {
      v1 << 0, 0, 1;
      if (k == ConeKind::WeylC) {
        v2 << 0, 1, 1;  v2 /= std::sqrt(2.0);
        v3 << 1, 1, 1;  v3 /= std::sqrt(3.0);
      } else {
        v2 << 1, 1, 1;   v2 /= std::sqrt(3.0);
        v3 << -1, 1, 1;  v3 /= std::sqrt(3.0);
      }
      i1 = spherical_triangle_quad(v1, v2, v3, uraw);
      i2 = spherical_triangle_quad(v1, v2, v3, uraw2);
    }
    sd.weyl_norm_ = 1.0 / std::sqrt(i2);
    sd.int_m1_ = sd.weyl_norm_ * i1;
  } else {
    throw UnsupportedCone("spectral_data: no analytic eigendata for " + cone.to_string());
  }

  double p = sd.p_;
  double B1 = std::exp(std::lgamma((p + d) / 2.0) - std::lgamma(p + d / 2.0)) * sd.int_m1_;
  sd.kappa_ = B1 * std::pow(2.0, -p / 2.0);
  double r1 = std::pow(2.0, (p + d) / 2.0 - 1.0) * std::tgamma((p + d) / 2.0);
  double r2 = std::pow(2.0, p + d / 2.0 - 1.0) * std::tgamma(p + d / 2.0);
  sd.h0_ = 1.0 / (sd.int_m1_ * r1);
  sd.rho_ = std::pow(2 * kPi, -d) * r2;
  return sd;
}

double SpectralData::m_j(int j, const Vec& theta) const {
  if (!wedge_like_) throw UnsupportedCone("m_j: eigen list only for the wedge catalog");
  Vec t = theta / theta.norm();
  double raw = std::atan2(t(1), t(0));
  double psi = alpha_ / 2 + std::remainder(raw - theta0_ - alpha_ / 2, 2 * kPi);
  return std::sqrt(2.0 / alpha_) * std::sin(j * p_ * psi);
}

double SpectralData::m1(const Vec& theta) const {
  if (dim_ == 1) return 1.0;
  Vec t = theta / theta.norm();
  if (wedge_like_) return m_j(1, t);
  return weyl_norm_ * weyl_u_raw(cone_.kind(), t);
}

double SpectralData::u(const Vec& x) const {
  if (dim_ == 1) return x(0);
  double r = x.norm();
  if (r == 0) return 0.0;
  if (polynomial_u_ && !wedge_like_)
    return weyl_norm_ * weyl_u_raw(cone_.kind(), x);
  return std::pow(r, p_) * m1(x);
}

double SpectralData::v(const Vec& x, const ExtensionParams& params) const {
  if (!(params.epsilon > 0 && params.epsilon < epsilon_max(cone_)))
    throw std::invalid_argument("extension params: epsilon out of range");
  if (!(params.a > 0 && params.a < std::min(1.0, p_)))
    throw std::invalid_argument("extension params: a out of range");
  if (dim_ == 1) return x(0);
  if (polynomial_u_ && !wedge_like_) return u(x);
  if (wedge_like_ && polynomial_u_) return u(x);  // Weyl d=2: global continuation

  // wedge catalog: u on G, |x|^{p-a} elsewhere
  double r = x.norm();
  if (r == 0) return 0.0;
  double raw = std::atan2(x(1), x(0));
  double psi = alpha_ / 2 + std::remainder(raw - theta0_ - alpha_ / 2, 2 * kPi);
  double delta = std::max({-psi, psi - alpha_, 0.0});
  if (delta == 0.0) return u(x);  // interior or boundary of K
  bool in_g = delta < kPi / 2 && std::sin(delta) < params.epsilon &&
              r * std::sin(delta) <= std::pow(r, 1.0 - params.a);
  if (in_g) return u(x);
  return std::pow(r, p_ - params.a);
}

double u_value(const Cone& cone, const Vec& x) { return spectral_data(cone).u(x); }

double v_value(const Cone& cone, const Vec& x, const ExtensionParams& params) {
  return spectral_data(cone).v(x, params);
}

}  // namespace rwc
