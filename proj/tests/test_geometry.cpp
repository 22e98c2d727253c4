#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rwc/geometry.hpp"

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
Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}
}  // namespace

TEST_CASE("half line membership and boundary distance") {
  Cone k = Cone::half_line();
  CHECK(contains(k, v1(0.5)));
  CHECK(!contains(k, v1(0.0)));
  CHECK(!contains(k, v1(-1.0)));
  CHECK(dist_to_boundary(k, v1(3.0)) == doctest::Approx(3.0));
  CHECK(dist_to_boundary(k, v1(-2.0)) == doctest::Approx(0.0));
}

TEST_CASE("orthant membership and distance") {
  Cone k = Cone::orthant(2);
  CHECK(contains(k, v2(1.0, 2.0)));
  CHECK(!contains(k, v2(1.0, 0.0)));
  CHECK(!contains(k, v2(-1.0, 2.0)));
  CHECK(dist_to_boundary(k, v2(3.0, 1.0)) == doctest::Approx(1.0));
  CHECK(dist_to_boundary(k, v2(0.5, 4.0)) == doctest::Approx(0.5));
}

TEST_CASE("wedge membership and distance") {
  double a = std::numbers::pi / 3;
  Cone k = Cone::wedge(a);
  CHECK(contains(k, v2(std::cos(a / 2), std::sin(a / 2))));
  CHECK(!contains(k, v2(1.0, 0.0)));          // on the boundary ray
  CHECK(!contains(k, v2(0.0, -1.0)));
  // point at angle a/2, radius 2: distance = 2 sin(a/2)
  Vec x = v2(2 * std::cos(a / 2), 2 * std::sin(a / 2));
  CHECK(dist_to_boundary(k, x) == doctest::Approx(2 * std::sin(a / 2)).epsilon(1e-12));
  // reflex wedge (alpha > pi) contains points outside any half-plane
  Cone wide = Cone::wedge(1.5 * std::numbers::pi);
  CHECK(contains(wide, v2(0.0, 1.0)));
  CHECK(contains(wide, v2(-1.0, 0.5)));
  CHECK(!contains(wide, v2(0.0, -0.5)));  // angle 3pi/2 equals alpha: boundary ray
}

TEST_CASE("wedge(pi) is the upper half plane") {
  Cone k = Cone::wedge(std::numbers::pi);
  CHECK(contains(k, v2(-5.0, 0.1)));
  CHECK(!contains(k, v2(1.0, 0.0)));
  CHECK(dist_to_boundary(k, v2(7.0, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("Weyl chamber membership") {
  Cone a3 = Cone::weyl_a(3);
  CHECK(contains(a3, v3(-1.0, 0.0, 2.0)));
  CHECK(!contains(a3, v3(0.0, 0.0, 1.0)));
  CHECK(!contains(a3, v3(2.0, 1.0, 3.0)));
  // distance to {x1 = x2} from (0,2,5) is 2/sqrt(2)
  CHECK(dist_to_boundary(a3, v3(0.0, 2.0, 5.0)) == doctest::Approx(2.0 / std::sqrt(2.0)));

  Cone c2 = Cone::weyl_c(2);
  CHECK(contains(c2, v2(1.0, 2.0)));
  CHECK(!contains(c2, v2(2.0, 1.0)));
  CHECK(!contains(c2, v2(0.0, 1.0)));

  Cone d2 = Cone::weyl_d(2);
  CHECK(contains(d2, v2(0.0, 1.0)));
  CHECK(contains(d2, v2(-0.5, 1.0)));
  CHECK(!contains(d2, v2(1.0, 1.0)));
  CHECK(!contains(d2, v2(-2.0, 1.0)));
}

TEST_CASE("wedge_form covers the 2d catalog") {
  auto wf = Cone::orthant(2).wedge_form();
  REQUIRE(wf.has_value());
  CHECK(wf->first == doctest::Approx(0.0));
  CHECK(wf->second == doctest::Approx(std::numbers::pi / 2));

  wf = Cone::weyl_a(2).wedge_form();
  REQUIRE(wf.has_value());
  CHECK(wf->first == doctest::Approx(std::numbers::pi / 4));
  CHECK(wf->second == doctest::Approx(std::numbers::pi));

  wf = Cone::weyl_c(2).wedge_form();
  REQUIRE(wf.has_value());
  CHECK(wf->first == doctest::Approx(std::numbers::pi / 4));
  CHECK(wf->second == doctest::Approx(std::numbers::pi / 4));

  wf = Cone::weyl_d(2).wedge_form();
  REQUIRE(wf.has_value());
  CHECK(wf->first == doctest::Approx(std::numbers::pi / 4));
  CHECK(wf->second == doctest::Approx(std::numbers::pi / 2));

  wf = Cone::wedge(1.0).wedge_form();
  REQUIRE(wf.has_value());
  CHECK(wf->first == doctest::Approx(0.0));
  CHECK(wf->second == doctest::Approx(1.0));

  CHECK(!Cone::weyl_a(3).wedge_form().has_value());
}

TEST_CASE("wedge_form consistent with membership") {
  for (const Cone& k : {Cone::weyl_a(2), Cone::weyl_c(2), Cone::weyl_d(2), Cone::orthant(2)}) {
    auto wf = k.wedge_form();
    REQUIRE(wf.has_value());
    for (double th = 0.05; th < 2 * std::numbers::pi; th += 0.1) {
      Vec x = v2(2.0 * std::cos(th), 2.0 * std::sin(th));
      double rel = th - wf->first;
      while (rel < 0) rel += 2 * std::numbers::pi;
      while (rel >= 2 * std::numbers::pi) rel -= 2 * std::numbers::pi;
      bool in_wedge = rel > 1e-9 && rel < wf->second - 1e-9;
      CHECK(contains(k, x) == in_wedge);
    }
  }
}

TEST_CASE("linear image cone") {
  Mat m(2, 2);
  m << 2, 0, 0, 2;  // isotropic scaling
  Cone img = Cone::image(Cone::orthant(2), m);
  double scale = 0;
  CHECK(img.is_isotropic_image(&scale));
  CHECK(scale == doctest::Approx(2.0));
  CHECK(contains(img, v2(1.0, 1.0)));
  CHECK(!contains(img, v2(-1.0, 1.0)));

  Mat shear(2, 2);
  shear << 1, 1, 0, 1;
  Cone sheared = Cone::image(Cone::orthant(2), shear);
  CHECK(!sheared.is_isotropic_image());
  // (x, y) in image iff shear^{-1}(x, y) in orthant: (x - y, y)
  CHECK(contains(sheared, v2(3.0, 1.0)));
  CHECK(!contains(sheared, v2(1.0, 3.0)));

  Mat singular(2, 2);
  singular << 1, 1, 1, 1;
  CHECK_THROWS(Cone::image(Cone::orthant(2), singular));
}

TEST_CASE("parse_cone round trips") {
  CHECK(parse_cone("halfline").kind() == ConeKind::HalfLine);
  Cone o = parse_cone("orthant:d=3");
  CHECK(o.kind() == ConeKind::Orthant);
  CHECK(o.dim() == 3);
  Cone w = parse_cone("wedge:alpha=1.25");
  CHECK(w.kind() == ConeKind::Wedge2D);
  CHECK(w.alpha() == doctest::Approx(1.25));
  CHECK(parse_cone("weylA:d=3").dim() == 3);
  CHECK(parse_cone("weylC:d=2").kind() == ConeKind::WeylC);
  CHECK(parse_cone("weylD:d=3").kind() == ConeKind::WeylD);
  Cone img = parse_cone("image:orthant:d=2;m=1,1,0,1");
  CHECK(img.kind() == ConeKind::LinearImage);
  CHECK(contains(img, v2(3.0, 1.0)));
  CHECK_THROWS(parse_cone("dodecahedron"));
  CHECK_THROWS(parse_cone("wedge:alpha=0"));
  CHECK_THROWS(parse_cone("orthant:d=0"));
}

TEST_CASE("to_string parses back") {
  for (const Cone& k :
       {Cone::half_line(), Cone::orthant(2), Cone::wedge(0.75), Cone::weyl_a(3), Cone::weyl_c(2),
        Cone::weyl_d(3)}) {
    Cone back = parse_cone(k.to_string());
    CHECK(back.kind() == k.kind());
    CHECK(back.dim() == k.dim());
  }
}
