// The OpenMP kernels must be bit-identical to their serial references:
// per-slot writes plus fixed pairwise reductions make the results
// independent of the thread count.
#include <doctest.h>

#include <random>

#include "fractri/corpus.hpp"
#include "fractri/parallel.hpp"
#include "fractri/quadrature.hpp"
#include "test_helpers.hpp"

using namespace fractri;
using namespace fractri::testing;

namespace {

BfifModel reference_model(int d = 7) {
  const TestFunction tf = builtin("matyas");
  ScalingPolicy pol;
  return build_model(tf.triangle, d, tf.fn, pol);
}

}  // namespace

TEST_SUITE_BEGIN("parallel");

TEST_CASE("thread budget is positive") { CHECK(max_threads() >= 1); }

TEST_CASE("map solving: parallel equals serial bitwise") {
  const auto model = reference_model(13);
  std::vector<double> alpha7s(model.subtriangle_count());
  for (int n = 0; n < model.subtriangle_count(); ++n)
    alpha7s[n] = model.maps[n].alpha7;
  const auto par = solve_all_maps(model.partition, model.base_data,
                                  model.vertex_z, alpha7s);
  const auto ser = solve_all_maps_serial(model.partition, model.base_data,
                                         model.vertex_z, alpha7s);
  REQUIRE(par.size() == ser.size());
  for (size_t n = 0; n < par.size(); ++n) {
    CHECK(par[n].alpha1 == ser[n].alpha1);
    CHECK(par[n].alpha2 == ser[n].alpha2);
    CHECK(par[n].alpha3 == ser[n].alpha3);
    CHECK(par[n].alpha4 == ser[n].alpha4);
    CHECK(par[n].alpha5 == ser[n].alpha5);
    CHECK(par[n].alpha6 == ser[n].alpha6);
    CHECK(par[n].beta1 == ser[n].beta1);
    CHECK(par[n].beta2 == ser[n].beta2);
    CHECK(par[n].beta3 == ser[n].beta3);
    CHECK(par[n].delta == ser[n].delta);
  }
}

TEST_CASE("closed-form integration: parallel equals serial bitwise") {
  std::mt19937_64 rng(801);
  const auto model = reference_model(7);
  const auto par = integrate(model);
  const auto ser = integrate_serial(model);
  CHECK(par.A == ser.A);
  CHECK(par.B == ser.B);
  CHECK(par.M == ser.M);
  CHECK(par.A_signed == ser.A_signed);

  const auto part = partition_triangle(random_triangle(rng), 4);
  std::vector<double> z(part.vertex_count());
  for (auto& v : z) v = uniform(rng, -3, 3);
  ScalingPolicy pol;
  pol.mode = ScalingMode::Fixed;
  pol.fixed_value = 0.42;
  const auto data_model = build_model_from_data(part, z, std::nullopt, pol);
  CHECK(integrate(data_model).M == integrate_serial(data_model).M);
}

TEST_CASE("cubature oracle: parallel equals serial bitwise") {
  const TestFunction camel = builtin("three-hump-camel");
  CHECK(reference_integral(camel.fn, camel.triangle, 32) ==
        reference_integral_serial(camel.fn, camel.triangle, 32));
}

TEST_CASE("monte carlo: parallel equals serial bitwise") {
  const auto model = reference_model(4);
  const auto par = monte_carlo_bfif_integral(model, 100000, 5);
  const auto ser = monte_carlo_bfif_integral_serial(model, 100000, 5);
  CHECK(par.estimate == ser.estimate);
  CHECK(par.std_error == ser.std_error);
}

TEST_CASE("batch evaluation: parallel equals serial bitwise") {
  std::mt19937_64 rng(802);
  const auto model = reference_model(4);
  std::vector<Point2> pts;
  for (int k = 0; k < 500; ++k)
    pts.push_back(random_point_in(model.partition.base, rng));
  CHECK(evaluate_batch(model, pts) == evaluate_batch_serial(model, pts));
}

TEST_SUITE_END();
