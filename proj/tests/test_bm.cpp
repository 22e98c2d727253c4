#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rwc/bm.hpp"

#include <cmath>
#include <numbers>

using namespace rwc;

namespace {
Vec v1(double a) {
  Vec x(1);
  x << a;
  return x;
}
Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}
constexpr double kPi = std::numbers::pi;
double erf_surv(double x, double t) { return std::erf(x / std::sqrt(2.0 * t)); }
}  // namespace

TEST_CASE("one dimensional survival closed form") {
  Cone k = Cone::half_line();
  for (double x : {0.3, 1.0, 2.5}) {
    for (double t : {0.5, 1.0, 10.0}) {
      CHECK(bm_survival(k, v1(x), t) == doctest::Approx(erf_surv(x, t)).epsilon(1e-13));
    }
  }
  CHECK(bm_survival(k, v1(1.0), 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-12));
}

TEST_CASE("orthant survival is a coordinate product") {
  Cone k = Cone::orthant(2);
  for (double t : {0.8, 2.0, 50.0}) {
    double got = bm_survival(k, v2(1.0, 2.0), t);
    CHECK(got == doctest::Approx(erf_surv(1.0, t) * erf_surv(2.0, t)).epsilon(1e-12));
  }
  // valid even when |x|^2 > t (no series restriction on the product form)
  CHECK(bm_survival(k, v2(3.0, 4.0), 1.0) ==
        doctest::Approx(erf_surv(3.0, 1.0) * erf_surv(4.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("wedge(pi/2) series route matches the product route") {
  // The quadrant computed as a generic wedge must agree with the coordinate
  // product wherever the series converges (|x|^2 <= t).
  Cone wedge = Cone::wedge(kPi / 2);
  for (double t : {9.0, 25.0, 100.0}) {
    Vec x = v2(1.0, 2.0);
    double series = bm_survival(wedge, x, t);
    double product = erf_surv(1.0, t) * erf_surv(2.0, t);
    CHECK(series == doctest::Approx(product).epsilon(1e-10));
  }
}

TEST_CASE("series domain guard") {
  Cone wedge = Cone::wedge(1.0);
  Vec x = v2(3.0 * std::cos(0.5), 3.0 * std::sin(0.5));
  CHECK_THROWS_AS(bm_survival(wedge, x, 1.0), SeriesDomain);  // |x|^2 = 9 > t
  CHECK_NOTHROW(bm_survival(wedge, x, 9.0));
}

TEST_CASE("survival tail constant kappa") {
  // P(tau > t) ~ kappa u(x) t^{-p/2}; check the ratio at large t.
  for (const Cone& k : {Cone::half_line(), Cone::orthant(2), Cone::wedge(2.0)}) {
    Vec x = (k.dim() == 1) ? v1(1.0) : v2(0.7 * std::cos(0.6), 0.7 * std::sin(0.6));
    if (k.kind() == ConeKind::Orthant) x = v2(0.7, 0.9);
    SpectralData sd = spectral_data(k);
    double t = 1e8;
    double ratio = bm_survival(k, x, t) / (sd.u(x) * std::pow(t, -sd.p() / 2.0));
    CHECK(ratio == doctest::Approx(kappa(k)).epsilon(1e-6));
  }
}

TEST_CASE("constant ladder closed forms") {
  CHECK(kappa(Cone::half_line()) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-9));
  CHECK(kappa(Cone::wedge(kPi)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kappa(Cone::orthant(2)) == doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-9));
  CHECK(h0_constant(Cone::half_line()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h0_constant(Cone::orthant(2)) == doctest::Approx(std::sqrt(kPi) / 4.0).epsilon(1e-9));
  CHECK(rho_constant(Cone::half_line()) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * kPi))).epsilon(1e-9));
}

TEST_CASE("kappa0 closed form") {
  // kappa0 = 2^{-(p - 1 + d/2)} / Gamma(p + d/2)
  for (const Cone& k : {Cone::half_line(), Cone::orthant(2), Cone::wedge(1.3)}) {
    SpectralData sd = spectral_data(k);
    double expect =
        std::pow(2.0, -(sd.p() - 1.0 + k.dim() / 2.0)) / std::tgamma(sd.p() + k.dim() / 2.0);
    CHECK(kappa0(k) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("exit density is symmetric and integrates to the survival") {
  Cone k = Cone::wedge(kPi / 2);
  Vec x = v2(0.5, 0.6), z = v2(0.8, 0.3);
  double t = 4.0;
  CHECK(bm_exit_density(k, x, z, t) == doctest::Approx(bm_exit_density(k, z, x, t)).epsilon(1e-11));

  // quadrature of the density over the quadrant recovers the survival
  double h = 0.05, acc = 0;
  for (double a = h / 2; a < 8.0; a += h)
    for (double b = h / 2; b < 8.0; b += h) {
      Vec zz = v2(a, b);
      if (zz.norm() * x.norm() / t > 10.0) continue;
      acc += bm_exit_density(k, x, zz, t) * h * h;
    }
  CHECK(acc == doctest::Approx(bm_survival(k, x, t)).epsilon(2e-3));
}

TEST_CASE("one dimensional exit density closed form") {
  // reflection principle: density = phi_t(z - x) - phi_t(z + x)
  Cone k = Cone::half_line();
  double t = 2.0, x = 1.0, z = 1.5;
  auto phi = [&](double w) { return std::exp(-w * w / (2 * t)) / std::sqrt(2 * kPi * t); };
  CHECK(bm_exit_density(k, v1(x), v1(z), t) ==
        doctest::Approx(phi(z - x) - phi(z + x)).epsilon(1e-12));
}

TEST_CASE("bm_constants spectral coefficients") {
  BmConstants c = bm_constants(Cone::wedge(1.0));
  REQUIRE(c.a_j.size() >= 2);
  // a_j = sqrt(lambda_j + (d/2-1)^2) - d/2 + 1 = j pi / alpha in 2d
  CHECK(c.a_j[0] == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(c.a_j[1] == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(c.kappa == doctest::Approx(kappa(Cone::wedge(1.0))).epsilon(1e-12));
  CHECK(c.B_j[0] > 0);
}
