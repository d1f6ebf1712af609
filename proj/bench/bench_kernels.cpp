// Serial vs OpenMP kernel comparison. Run:
//   ./bench/bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "fractri/bfif.hpp"
#include "fractri/corpus.hpp"
#include "fractri/parallel.hpp"
#include "fractri/quadrature.hpp"

namespace {

using namespace fractri;

const BfifModel& model_for(int d) {
  static std::map<int, BfifModel> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    const TestFunction tf = builtin("matyas");
    ScalingPolicy pol;
    it = cache.emplace(d, build_model(tf.triangle, d, tf.fn, pol)).first;
  }
  return it->second;
}

void bm_solve_maps_serial(benchmark::State& state) {
  const auto& m = model_for(static_cast<int>(state.range(0)));
  std::vector<double> alpha7s(m.subtriangle_count(), 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_all_maps_serial(m.partition, m.base_data,
                                                   m.vertex_z, alpha7s));
}

void bm_solve_maps_parallel(benchmark::State& state) {
  const auto& m = model_for(static_cast<int>(state.range(0)));
  std::vector<double> alpha7s(m.subtriangle_count(), 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_all_maps(m.partition, m.base_data, m.vertex_z, alpha7s));
}

void bm_integrate_serial(benchmark::State& state) {
  const auto& m = model_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_serial(m));
}

void bm_integrate_parallel(benchmark::State& state) {
  const auto& m = model_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(m));
}

void bm_cubature_serial(benchmark::State& state) {
  const TestFunction tf = builtin("three-hump-camel");
  for (auto _ : state)
    benchmark::DoNotOptimize(reference_integral_serial(
        tf.fn, tf.triangle, static_cast<int>(state.range(0))));
}

void bm_cubature_parallel(benchmark::State& state) {
  const TestFunction tf = builtin("three-hump-camel");
  for (auto _ : state)
    benchmark::DoNotOptimize(reference_integral(
        tf.fn, tf.triangle, static_cast<int>(state.range(0))));
}

void bm_monte_carlo_serial(benchmark::State& state) {
  const auto& m = model_for(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        monte_carlo_bfif_integral_serial(m, state.range(0), 7));
}

void bm_monte_carlo_parallel(benchmark::State& state) {
  const auto& m = model_for(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo_bfif_integral(m, state.range(0), 7));
}

void bm_evaluate_batch_serial(benchmark::State& state) {
  const auto& m = model_for(7);
  std::mt19937_64 rng(1);
  std::vector<Point2> pts;
  for (int k = 0; k < state.range(0); ++k) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    const double v = double(rng() >> 11) * 0x1.0p-53 * (1.0 - u);
    const auto& b = m.partition.base;
    pts.push_back({b.a().x + u * (b.b().x - b.a().x) + v * (b.c().x - b.a().x),
                   b.a().y + u * (b.b().y - b.a().y) + v * (b.c().y - b.a().y)});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_batch_serial(m, pts));
}

void bm_evaluate_batch_parallel(benchmark::State& state) {
  const auto& m = model_for(7);
  std::mt19937_64 rng(1);
  std::vector<Point2> pts;
  for (int k = 0; k < state.range(0); ++k) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    const double v = double(rng() >> 11) * 0x1.0p-53 * (1.0 - u);
    const auto& b = m.partition.base;
    pts.push_back({b.a().x + u * (b.b().x - b.a().x) + v * (b.c().x - b.a().x),
                   b.a().y + u * (b.b().y - b.a().y) + v * (b.c().y - b.a().y)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(m, pts));
}

}  // namespace

BENCHMARK(bm_solve_maps_serial)->Arg(13)->Arg(73)->Arg(154);
BENCHMARK(bm_solve_maps_parallel)->Arg(13)->Arg(73)->Arg(154);
BENCHMARK(bm_integrate_serial)->Arg(73)->Arg(154);
BENCHMARK(bm_integrate_parallel)->Arg(73)->Arg(154);
BENCHMARK(bm_cubature_serial)->Arg(64)->Arg(256);
BENCHMARK(bm_cubature_parallel)->Arg(64)->Arg(256);
BENCHMARK(bm_monte_carlo_serial)->Arg(100000);
BENCHMARK(bm_monte_carlo_parallel)->Arg(100000);
BENCHMARK(bm_evaluate_batch_serial)->Arg(20000);
BENCHMARK(bm_evaluate_batch_parallel)->Arg(20000);

BENCHMARK_MAIN();
