#include <doctest.h>

#include <cmath>
#include <random>

#include "fractri/geometry.hpp"
#include "test_helpers.hpp"

using namespace fractri;
using namespace fractri::testing;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("signed area: unit right triangle and orientation") {
  CHECK(signed_area(Triangle2({0, 0}, {1, 0}, {0, 1})) == doctest::Approx(0.5));
  CHECK(signed_area(Triangle2({0, 0}, {0, 1}, {1, 0})) == doctest::Approx(-0.5));
  CHECK(signed_area(Triangle2({-10, -10}, {10, -10}, {0, 10})) ==
        doctest::Approx(200.0));
}

TEST_CASE("degenerate triangles are rejected at construction") {
  CHECK_THROWS_AS(Triangle2({0, 0}, {1, 1}, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Triangle2({3, 3}, {3, 3}, {3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Triangle2({0, 0}, {1, 0}, {0.5, 1e-14}),
                  std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(Triangle2({nan, 0}, {1, 0}, {0, 1}), std::invalid_argument);
}

TEST_CASE("centroid is the vertex mean") {
  const Point2 g1 = centroid(Triangle2({0, 0}, {1, 0}, {0, 1}));
  CHECK(g1.x == doctest::Approx(1.0 / 3));
  CHECK(g1.y == doctest::Approx(1.0 / 3));
  const Point2 g2 = centroid(Triangle2({-10, -10}, {10, -10}, {0, 10}));
  CHECK(g2.x == doctest::Approx(0.0));
  CHECK(g2.y == doctest::Approx(-10.0 / 3));
}

TEST_CASE("barycentric: vertices, centroid, edge midpoint") {
  const Triangle2 t({0, 0}, {2, 0}, {0, 2});
  auto wa = barycentric(t, {0, 0});
  CHECK(wa[0] == doctest::Approx(1.0));
  CHECK(wa[1] == doctest::Approx(0.0));
  CHECK(wa[2] == doctest::Approx(0.0));
  auto wg = barycentric(t, centroid(t));
  for (double w : wg) CHECK(w == doctest::Approx(1.0 / 3));
  auto wm = barycentric(t, {1, 0});
  CHECK(wm[0] == doctest::Approx(0.5));
  CHECK(wm[1] == doctest::Approx(0.5));
  CHECK(wm[2] == doctest::Approx(0.0));
}

TEST_CASE("barycentric weights sum to 1 and reproduce the point") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 200; ++k) {
    const Triangle2 t = random_triangle(rng);
    const Point2 p{uniform(rng, -20, 20), uniform(rng, -20, 20)};
    const auto w = barycentric(t, p);
    CHECK(std::fabs(w[0] + w[1] + w[2] - 1.0) < 1e-12);
    const double x = w[0] * t.a().x + w[1] * t.b().x + w[2] * t.c().x;
    const double y = w[0] * t.a().y + w[1] * t.b().y + w[2] * t.c().y;
    CHECK(std::fabs(x - p.x) < 1e-9 * t.scale());
    CHECK(std::fabs(y - p.y) < 1e-9 * t.scale());
  }
}

TEST_CASE("contains honors the distance tolerance") {
  const Triangle2 t({0, 0}, {1, 0}, {0, 1});
  CHECK(contains(t, {0.25, 0.25}, 0.0));
  CHECK(contains(t, {0.5, 0.0}, 0.0));          // boundary
  CHECK(contains(t, {0.5, -1e-10}, 1e-9));      // just outside, inside tol
  CHECK_FALSE(contains(t, {0.5, -1e-6}, 1e-9)); // outside beyond tol
  CHECK_FALSE(contains(t, {2, 2}, 1e-9));
}

TEST_CASE("plane through: frozen examples") {
  const Plane zero = plane_through({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  CHECK(zero(0.3, 0.4) == doctest::Approx(0.0));
  const Plane one = plane_through({0, 0, 1}, {1, 0, 1}, {0, 1, 1});
  CHECK(one(0.3, 0.4) == doctest::Approx(1.0));
  const Plane p = plane_through({0, 0, 0}, {1, 0, 2}, {0, 1, 3});
  CHECK(p.p == doctest::Approx(2.0));
  CHECK(p.q == doctest::Approx(3.0));
  CHECK(p.r == doctest::Approx(0.0));
}

TEST_CASE("plane through: interpolation residual stays under 1e-9 relative") {
  std::mt19937_64 rng(102);
  for (int k = 0; k < 200; ++k) {
    const Triangle2 t = random_triangle(rng);
    const DataPoint3 p1{t.a().x, t.a().y, uniform(rng, -50, 50)};
    const DataPoint3 p2{t.b().x, t.b().y, uniform(rng, -50, 50)};
    const DataPoint3 p3{t.c().x, t.c().y, uniform(rng, -50, 50)};
    const Plane pl = plane_through(p1, p2, p3);
    const double zs = std::max(
        {std::fabs(p1.z), std::fabs(p2.z), std::fabs(p3.z), 1.0});
    for (const auto& p : {p1, p2, p3})
      CHECK(std::fabs(pl(p.x, p.y) - p.z) < 1e-9 * zs);
  }
}

TEST_CASE("plane through: collinear projections rejected") {
  CHECK_THROWS_AS(plane_through({0, 0, 1}, {1, 1, 2}, {2, 2, 3}),
                  std::invalid_argument);
}

TEST_CASE("barycentric grid covers the triangle") {
  const Triangle2 t({-10, -10}, {10, -10}, {0, 10});
  const auto pts = barycentric_grid(t, 4);
  CHECK(pts.size() == 15);  // (4+1)(4+2)/2
  for (const Point2& p : pts) CHECK(contains(t, p, 1e-9 * t.scale()));
  CHECK_THROWS_AS(barycentric_grid(t, 0), std::invalid_argument);
}

TEST_SUITE_END();
