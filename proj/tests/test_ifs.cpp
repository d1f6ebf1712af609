#include <doctest.h>

#include <cmath>
#include <random>

#include "fractri/bfif.hpp"
#include "fractri/corpus.hpp"
#include "fractri/ifs.hpp"
#include "test_helpers.hpp"

using namespace fractri;
using namespace fractri::testing;

namespace {

const std::array<DataPoint3, 3> kBaseData = {{{-10, -10, 4},
                                              {10, -10, 100},
                                              {0, 10, 26}}};  // matyas corners

BfifModel matyas_model(int d, ScalingMode mode = ScalingMode::Centroid) {
  const TestFunction tf = builtin("matyas");
  ScalingPolicy pol;
  pol.mode = mode;
  return build_model(tf.triangle, d, tf.fn, pol);
}

}  // namespace

TEST_SUITE_BEGIN("ifs");

TEST_CASE("identity self-map with alpha7 = 0 reproduces the base plane") {
  const auto m = solve_coefficients(kBaseData, kBaseData, 0.0);
  CHECK(m.alpha1 == doctest::Approx(1.0));
  CHECK(m.alpha4 == doctest::Approx(1.0));
  CHECK(m.alpha2 == doctest::Approx(0.0));
  CHECK(m.alpha3 == doctest::Approx(0.0));
  CHECK(m.beta1 == doctest::Approx(0.0));
  CHECK(m.beta2 == doctest::Approx(0.0));
  CHECK(m.delta == doctest::Approx(1.0));
  const Plane b = plane_through(kBaseData[0], kBaseData[1], kBaseData[2]);
  CHECK(m.alpha5 == doctest::Approx(b.p));
  CHECK(m.alpha6 == doctest::Approx(b.q));
  CHECK(m.beta3 == doctest::Approx(b.r));
}

TEST_CASE("identity self-map with alpha7 = 0.5 keeps the base plane fixed") {
  const auto m = solve_coefficients(kBaseData, kBaseData, 0.5);
  const Plane b = plane_through(kBaseData[0], kBaseData[1], kBaseData[2]);
  std::mt19937_64 rng(301);
  for (int k = 0; k < 20; ++k) {
    const Point2 p{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    CHECK(m.apply_F(p, b(p)) == doctest::Approx(b(p)).epsilon(1e-9));
  }
}

TEST_CASE("alpha7 magnitude at or above 1 is rejected") {
  CHECK_THROWS_AS(solve_coefficients(kBaseData, kBaseData, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_coefficients(kBaseData, kBaseData, -1.2),
                  std::invalid_argument);
}

TEST_CASE("degenerate base triangle is rejected") {
  const std::array<DataPoint3, 3> degenerate = {{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}};
  CHECK_THROWS_AS(solve_coefficients(degenerate, kBaseData, 0.0),
                  std::invalid_argument);
}

TEST_CASE("endpoint conditions and area ratios hold on a built model") {
  const auto model = matyas_model(4);
  const double base_area = std::fabs(signed_area(model.partition.base));
  const double xy_scale = model.partition.base.scale();
  for (int n = 0; n < model.subtriangle_count(); ++n) {
    const auto& map = model.maps[n];
    const auto sd = model.sub_data(n);
    for (int j = 0; j < 3; ++j) {
      const Point2 img = map.apply_L(model.base_data[j].xy());
      CHECK(std::fabs(img.x - sd[j].x) < 1e-9 * xy_scale);
      CHECK(std::fabs(img.y - sd[j].y) < 1e-9 * xy_scale);
      const double fz =
          map.apply_F(model.base_data[j].xy(), model.base_data[j].z);
      CHECK(std::fabs(fz - sd[j].z) < 1e-9 * 100.0);
    }
    // shoelace oracle for the area ratio
    const double ratio =
        std::fabs(signed_area(model.partition.subtriangle(n))) / base_area;
    CHECK(rel_diff(map.delta, ratio) < 1e-9);
  }
}

TEST_CASE("area ratios sum to one") {
  for (int d : {4, 7}) {
    const auto model = matyas_model(d);
    double sum = 0.0;
    for (const auto& m : model.maps) sum += m.delta;
    CHECK(rel_diff(sum, 1.0) < 1e-9);
  }
}

TEST_CASE("centroid commutes with the affine maps") {
  const auto model = matyas_model(4);
  const Point2 g = centroid(model.partition.base);
  for (int n = 0; n < model.subtriangle_count(); ++n) {
    const Point2 lhs = centroid(model.partition.subtriangle(n));
    const Point2 rhs = model.maps[n].apply_L(g);
    CHECK(std::fabs(lhs.x - rhs.x) < 1e-9 * model.partition.base.scale());
    CHECK(std::fabs(lhs.y - rhs.y) < 1e-9 * model.partition.base.scale());
  }
}

TEST_CASE("Q composed with the inverse map equals h - alpha7 * (b o L^-1)") {
  std::mt19937_64 rng(302);
  const auto model = matyas_model(4);
  for (int n = 0; n < model.subtriangle_count(); ++n) {
    const auto& map = model.maps[n];
    const Plane h = model.sub_plane(n);
    const Triangle2 sub = model.partition.subtriangle(n);
    for (int k = 0; k < 10; ++k) {
      const Point2 p = random_point_in(sub, rng);
      const Point2 pre = map.apply_L_inverse(p);
      const double lhs = map.apply_Q(pre);
      const double rhs = h(p) - map.alpha7 * model.base_plane(pre);
      CHECK(std::fabs(lhs - rhs) < 1e-9 * 100.0);
    }
  }
}

TEST_CASE("centroid scaling: affine data collapse to zero") {
  // data from the plane z = 2x + 3y + 1 make both centroid deviations vanish
  CHECK(scaling_centroid(6.0, 1.0, 3.0, 14.0, 6.0, 1.0, 3.0, 14.0) ==
        doctest::Approx(0.0));
  SUBCASE("self-map ratio of one clamps to 0.9") {
    CHECK(scaling_centroid(5.0, 1.0, 2.0, 3.0, 5.0, 1.0, 2.0, 3.0) ==
          doctest::Approx(0.9));
  }
  SUBCASE("degenerate denominator returns zero") {
    CHECK(scaling_centroid(7.0, 1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0) ==
          doctest::Approx(0.0));
    CHECK(scaling_centroid(0, 0, 0, 0, 0, 0, 0, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("centroid scaling matches direct evaluation on a built model") {
  const TestFunction tf = builtin("matyas");
  const auto model = matyas_model(4);
  const double z_base_centroid = tf.fn(centroid(model.partition.base));
  for (int n : {0, 5, 13, 24, 26}) {
    const auto sd = model.sub_data(n);
    const double z_sub_centroid =
        tf.fn(centroid(model.partition.subtriangle(n)));
    const double expect = scaling_centroid(
        z_sub_centroid, sd[0].z, sd[1].z, sd[2].z, z_base_centroid,
        model.base_data[0].z, model.base_data[1].z, model.base_data[2].z);
    CHECK(model.maps[n].alpha7 == doctest::Approx(expect));
  }
}

TEST_CASE("stored scaling factors respect the clamp bound") {
  for (int d : {4, 7}) {
    const auto model = matyas_model(d);
    for (const auto& m : model.maps) CHECK(std::fabs(m.alpha7) <= 0.9);
  }
}

TEST_CASE("least-squares scaling: plane samples give zero") {
  const auto map = solve_coefficients(kBaseData, kBaseData, 0.0);
  const Plane h{2.0, 3.0, 1.0};
  const Plane b{1.0, -1.0, 0.5};
  std::vector<DataPoint3> samples;
  std::mt19937_64 rng(303);
  for (int k = 0; k < 15; ++k) {
    const Point2 p{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    samples.push_back({p.x, p.y, h(p)});
  }
  CHECK(scaling_least_squares(samples, h, b, map) == doctest::Approx(0.0));
}

TEST_CASE("least-squares scaling: unit-ratio sample clamps to 0.9") {
  const auto map = solve_coefficients(kBaseData, kBaseData, 0.0);
  const Plane h{1.0, 0.0, 0.0};
  const Plane b{0.0, 0.0, 0.0};
  const Point2 p{2.0, 1.0};
  const double u = h(p) - b(p);  // L is the identity here
  std::vector<DataPoint3> samples{{p.x, p.y, h(p) + u}};
  CHECK(scaling_least_squares(samples, h, b, map) == doctest::Approx(0.9));
}

TEST_CASE("least-squares and centroid scalings stay close on smooth data") {
  const auto cen = matyas_model(4, ScalingMode::Centroid);
  const auto lsq = matyas_model(4, ScalingMode::LeastSquares);
  double worst = 0.0;
  for (int n = 0; n < cen.subtriangle_count(); ++n)
    worst = std::max(worst,
                     std::fabs(cen.maps[n].alpha7 - lsq.maps[n].alpha7));
  CHECK(worst < 0.5);
}

TEST_CASE("scaling bound: zero for plane data, homogeneous in the residual") {
  const auto map = solve_coefficients(kBaseData, kBaseData, 0.0);
  const Plane h{2.0, -1.0, 3.0};
  const Plane b{0.5, 0.5, 0.0};
  std::mt19937_64 rng(304);
  std::vector<DataPoint3> plane_samples, bumped, bumped2;
  for (int k = 0; k < 12; ++k) {
    const Point2 p{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    const double r = uniform(rng, -2, 2);
    plane_samples.push_back({p.x, p.y, h(p)});
    bumped.push_back({p.x, p.y, h(p) + r});
    bumped2.push_back({p.x, p.y, h(p) + 2 * r});
  }
  CHECK(scaling_bound(plane_samples, h, b, map) == doctest::Approx(0.0));
  CHECK(scaling_bound(bumped2, h, b, map) ==
        doctest::Approx(2.0 * scaling_bound(bumped, h, b, map)));
}

TEST_CASE("unclamped least-squares value never exceeds its bound") {
  std::mt19937_64 rng(305);
  const auto map = solve_coefficients(kBaseData, kBaseData, 0.0);
  for (int rep = 0; rep < 50; ++rep) {
    const Plane h{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    const Plane b{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    std::vector<DataPoint3> samples;
    for (int k = 0; k < 10; ++k) {
      const Point2 p{uniform(rng, -10, 10), uniform(rng, -10, 10)};
      samples.push_back({p.x, p.y, h(p) + uniform(rng, -3, 3)});
    }
    const double unclamped =
        scaling_least_squares(samples, h, b, map, 1e100);
    const double bound = scaling_bound(samples, h, b, map);
    CHECK(std::fabs(unclamped) <= bound + 1e-12);
  }
}

TEST_CASE("hyperbolicity: identity map fails the certificate honestly") {
  const auto identity = solve_coefficients(kBaseData, kBaseData, 0.0);
  const auto report = hyperbolicity({identity});
  CHECK(report.theta <= 0.0);
  CHECK_FALSE(report.hyperbolic);
}

TEST_CASE("hyperbolicity: matyas model is certified contractive at d=7") {
  const auto model = matyas_model(7);
  CHECK(model.diagnostics.theta > 0.0);
  CHECK(model.diagnostics.contraction < 1.0);
  CHECK(model.diagnostics.hyperbolic);
  double amax = 0.0;
  for (const auto& m : model.maps) amax = std::max(amax, std::fabs(m.alpha7));
  CHECK(model.diagnostics.contraction == doctest::Approx(std::max(0.5, amax)));
}

TEST_CASE("hyperbolicity: d=4 sits exactly on the certificate boundary") {
  // One d=4 map has |alpha1| + |alpha3| = 0.5 exactly, so no positive theta
  // exists and the certificate is reported as failing there.
  const auto model = matyas_model(4);
  CHECK(model.diagnostics.theta == doctest::Approx(0.0));
  CHECK_FALSE(model.diagnostics.hyperbolic);
  CHECK(model.diagnostics.contraction < 1.0);
}

TEST_CASE("hyperbolicity: zero alpha5/alpha6 branch reports unconstrained") {
  AffineMapCoefficients flat;  // constant-zero surface over a shrunken domain
  flat.alpha1 = flat.alpha4 = 0.25;
  flat.alpha7 = 0.3;
  flat.delta = 0.0625;
  const auto report = hyperbolicity({flat});
  CHECK(std::isinf(report.theta));
  CHECK(report.theta > 0.0);
  CHECK(report.hyperbolic);
}

TEST_CASE("color permutation invariance of delta, alpha7, and the surface") {
  // permute colors (1,2,3) -> (2,3,1) consistently across the partition
  const TestFunction tf = builtin("matyas");
  auto part = partition_triangle(tf.triangle, 4);
  auto permuted = part;
  const int perm[3] = {2, 3, 1};
  for (auto& c : permuted.colors) c = perm[c - 1];
  for (size_t n = 0; n < permuted.tris.size(); ++n) {
    std::array<int, 3> reordered{};
    for (int v : permuted.tris[n]) reordered[permuted.colors[v] - 1] = v;
    permuted.tris[n] = reordered;
  }
  REQUIRE(verify_coloring(permuted, permuted.colors));

  ScalingPolicy pol;
  const auto m1 = build_model(part, tf.fn, pol);
  const auto m2 = build_model(permuted, tf.fn, pol);
  std::mt19937_64 rng(306);
  for (int n = 0; n < m1.subtriangle_count(); ++n) {
    CHECK(rel_diff(m1.maps[n].delta, m2.maps[n].delta) < 1e-12);
    CHECK(m1.maps[n].alpha7 == doctest::Approx(m2.maps[n].alpha7));
    const Triangle2 sub = m1.partition.subtriangle(n);
    for (int k = 0; k < 5; ++k) {
      const Point2 p = random_point_in(sub, rng);
      const double q1 = m1.maps[n].apply_Q(m1.maps[n].apply_L_inverse(p));
      const double q2 = m2.maps[n].apply_Q(m2.maps[n].apply_L_inverse(p));
      CHECK(std::fabs(q1 - q2) < 1e-8 * 100.0);
    }
  }
}

TEST_SUITE_END();
