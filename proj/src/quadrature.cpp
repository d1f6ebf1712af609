#include "fractri/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>

#include "fractri/parallel.hpp"
#include "fractri/partition.hpp"

namespace fractri {

double pairwise_sum(std::span<const double> terms) {
  const size_t n = terms.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

namespace {

struct IntegralTerms {
  std::vector<double> a_terms;
  std::vector<double> a_signed_terms;
  std::vector<double> b_terms;
};

IntegralTerms closed_form_terms(const BfifModel& m, bool parallel) {
  const int n_tris = m.subtriangle_count();
  IntegralTerms t;
  t.a_terms.resize(n_tris);
  t.a_signed_terms.resize(n_tris);
  t.b_terms.resize(n_tris);
  const double base_area = std::fabs(signed_area(m.partition.base));
  const Point2 g = centroid(m.partition.base);
#pragma omp parallel for schedule(static) num_threads(max_threads()) \
    if (parallel)
  for (int n = 0; n < n_tris; ++n) {
    const auto& map = m.maps[n];
    const double det = map.alpha1 * map.alpha4 - map.alpha2 * map.alpha3;
    t.a_terms[n] = map.alpha7 * map.delta;
    t.a_signed_terms[n] = map.alpha7 * det;
    t.b_terms[n] = map.delta * base_area * map.apply_Q(g);
  }
  return t;
}

IntegralReport report_from_terms(const BfifModel& m, const IntegralTerms& t) {
  IntegralReport r;
  r.A = pairwise_sum(t.a_terms);
  r.B = pairwise_sum(t.b_terms);
  if (std::fabs(1.0 - r.A) < 1e-12)
    throw std::domain_error(
        "integrate: singular model, sum(alpha7*delta) too close to 1");
  r.M = r.B / (1.0 - r.A);
  r.A_signed = pairwise_sum(t.a_signed_terms);
  if (std::fabs(1.0 - r.A_signed) >= 1e-12)
    r.M_signed = r.B / (1.0 - r.A_signed);
  r.d = m.partition.d;
  r.subtriangles = m.subtriangle_count();
  return r;
}

}  // namespace

IntegralReport integrate(const BfifModel& m) {
  return report_from_terms(m, closed_form_terms(m, true));
}

IntegralReport integrate_serial(const BfifModel& m) {
  return report_from_terms(m, closed_form_terms(m, false));
}

double integrate_alternative(const BfifModel& m) {
  const int n_tris = m.subtriangle_count();
  const double base_mean =
      (m.base_data[0].z + m.base_data[1].z + m.base_data[2].z) / 3.0;
  std::vector<double> a_terms(n_tris), b_terms(n_tris);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int n = 0; n < n_tris; ++n) {
    const auto& t = m.partition.tris[n];
    const double sub_area = std::fabs(signed_area(m.partition.subtriangle(n)));
    const double sub_mean = (m.vertex_z[t[0]] + m.vertex_z[t[1]] +
                             m.vertex_z[t[2]]) / 3.0;
    a_terms[n] = m.maps[n].alpha7 * m.maps[n].delta;
    b_terms[n] = sub_area * (sub_mean - m.maps[n].alpha7 * base_mean);
  }
  const double a = pairwise_sum(a_terms);
  const double b = pairwise_sum(b_terms);
  if (std::fabs(1.0 - a) < 1e-12)
    throw std::domain_error(
        "integrate_alternative: singular model, sum(alpha7*delta) too close to 1");
  return b / (1.0 - a);
}

namespace {

// Radon's degree-5 rule: centroid plus two symmetric orbits.
struct CubaturePoint {
  double wa, wb, wc, weight;
};

const std::array<CubaturePoint, 7>& degree5_rule() {
  static const std::array<CubaturePoint, 7> rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (9.0 + 2.0 * s15) / 21.0, b1 = (6.0 - s15) / 21.0;
    const double a2 = (9.0 - 2.0 * s15) / 21.0, b2 = (6.0 + s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    return std::array<CubaturePoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40},
                                         {a1, b1, b1, w1},
                                         {b1, a1, b1, w1},
                                         {b1, b1, a1, w1},
                                         {a2, b2, b2, w2},
                                         {b2, a2, b2, w2},
                                         {b2, b2, a2, w2}}};
  }();
  return rule;
}

double cell_integral(const SurfaceFn& f, Point2 pa, Point2 pb, Point2 pc,
                     double cell_area) {
  double s = 0.0;
  for (const auto& cp : degree5_rule()) {
    const Point2 q{cp.wa * pa.x + cp.wb * pb.x + cp.wc * pc.x,
                   cp.wa * pa.y + cp.wb * pb.y + cp.wc * pc.y};
    s += cp.weight * f(q);
  }
  return s * cell_area;
}

template <bool Parallel>
double reference_integral_impl(const SurfaceFn& f, const Triangle2& tri,
                               int refinement) {
  if (refinement < 1)
    throw std::invalid_argument("reference_integral: refinement must be >= 1");
  const int r = refinement;
  const Point2 a = tri.a(), b = tri.b(), c = tri.c();
  const double cell_area = std::fabs(signed_area(tri)) / (double(r) * r);
  auto grid_pt = [&](int i, int j) -> Point2 {
    const double u = double(i) / r, v = double(j) / r;
    return {a.x + u * (b.x - a.x) + v * (c.x - a.x),
            a.y + u * (b.y - a.y) + v * (c.y - a.y)};
  };

  // Cells enumerated row-major: each (i, j) owns an upright triangle and,
  // off the hypotenuse row, an inverted one.
  std::vector<double> terms(static_cast<size_t>(r) * r);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (Parallel)
  for (int j = 0; j < r; ++j) {
    try {
      size_t idx = 0;
      for (int jj = 0; jj < j; ++jj) idx += static_cast<size_t>(2 * (r - jj) - 1);
      for (int i = 0; i + j < r; ++i) {
        terms[idx++] =
            cell_integral(f, grid_pt(i, j), grid_pt(i + 1, j), grid_pt(i, j + 1),
                          cell_area);
        if (i + j < r - 1)
          terms[idx++] = cell_integral(f, grid_pt(i + 1, j), grid_pt(i + 1, j + 1),
                                       grid_pt(i, j + 1), cell_area);
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return pairwise_sum(terms);
}

}  // namespace

double reference_integral(const SurfaceFn& f, const Triangle2& tri,
                          int refinement) {
  return reference_integral_impl<true>(f, tri, refinement);
}

double reference_integral_serial(const SurfaceFn& f, const Triangle2& tri,
                                 int refinement) {
  return reference_integral_impl<false>(f, tri, refinement);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

struct ChunkMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

constexpr std::int64_t kMcChunk = 1 << 16;

ChunkMoments mc_chunk(const BfifModel& m, std::int64_t quota,
                      std::uint64_t chunk_seed) {
  std::mt19937_64 rng(chunk_seed);
  const Triangle2& base = m.partition.base;
  const double xlo = std::min({base.a().x, base.b().x, base.c().x});
  const double xhi = std::max({base.a().x, base.b().x, base.c().x});
  const double ylo = std::min({base.a().y, base.b().y, base.c().y});
  const double yhi = std::max({base.a().y, base.b().y, base.c().y});
  ChunkMoments acc;
  for (std::int64_t i = 0; i < quota; ++i) {
    Point2 p;
    do {
      p = {xlo + (xhi - xlo) * uniform01(rng), ylo + (yhi - ylo) * uniform01(rng)};
    } while (!contains(base, p, 0.0));
    const double v = evaluate(m, p, 1e-8, 400);
    acc.sum += v;
    acc.sum_sq += v * v;
  }
  return acc;
}

template <bool Parallel>
MonteCarloResult mc_impl(const BfifModel& m, std::int64_t n_samples,
                         std::uint64_t seed) {
  if (n_samples < 10000)
    throw std::invalid_argument(
        "monte_carlo_bfif_integral: need at least 1e4 samples");
  const std::int64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<ChunkMoments> chunks(static_cast<size_t>(n_chunks));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(max_threads()) if (Parallel)
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    try {
      const std::int64_t quota =
          std::min(kMcChunk, n_samples - c * kMcChunk);
      chunks[c] = mc_chunk(m, quota, splitmix64(seed ^ (0xC0FFEEULL + c)));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& ch : chunks) {
    sum += ch.sum;
    sum_sq += ch.sum_sq;
  }
  const double n = double(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
  const double area = std::fabs(signed_area(m.partition.base));
  MonteCarloResult r;
  r.estimate = area * mean;
  r.std_error = area * std::sqrt(var / n);
  r.samples = n_samples;
  return r;
}

}  // namespace

MonteCarloResult monte_carlo_bfif_integral(const BfifModel& m,
                                           std::int64_t n_samples,
                                           std::uint64_t seed) {
  return mc_impl<true>(m, n_samples, seed);
}

MonteCarloResult monte_carlo_bfif_integral_serial(const BfifModel& m,
                                                  std::int64_t n_samples,
                                                  std::uint64_t seed) {
  return mc_impl<false>(m, n_samples, seed);
}

ErrorBoundReport error_bound(const BfifModel& m, const SurfaceFn& f, int probe,
                             std::uint64_t seed) {
  if (probe < 1) throw std::invalid_argument("error_bound: probe must be >= 1");
  const ColoredPartition& part = m.partition;
  ErrorBoundReport r;

  for (int n = 0; n < part.triangle_count(); ++n)
    r.delta = std::max(r.delta, longest_edge(part.subtriangle(n)));

  double max_x = 0.0, max_y = 0.0;
  for (const Point2& v : part.vertices) {
    max_x = std::max(max_x, std::fabs(v.x));
    max_y = std::max(max_y, std::fabs(v.y));
  }
  r.k_prime = 12.0 * max_x * max_y;

  const Triangle2& base = part.base;
  const double xlo = std::min({base.a().x, base.b().x, base.c().x});
  const double xhi = std::max({base.a().x, base.b().x, base.c().x});
  const double ylo = std::min({base.a().y, base.b().y, base.c().y});
  const double yhi = std::max({base.a().y, base.b().y, base.c().y});
  std::mt19937_64 rng(splitmix64(seed));
  auto draw_inside = [&]() {
    Point2 p;
    do {
      p = {xlo + (xhi - xlo) * uniform01(rng), ylo + (yhi - ylo) * uniform01(rng)};
    } while (!contains(base, p, 0.0));
    return p;
  };

  // Modulus of continuity over pairs at distance <= delta.
  constexpr double two_pi = 6.283185307179586;
  for (int k = 0; k < probe; ++k) {
    const Point2 p = draw_inside();
    const double ang = two_pi * uniform01(rng);
    const double rad = r.delta * uniform01(rng);
    const Point2 q{p.x + rad * std::cos(ang), p.y + rad * std::sin(ang)};
    if (!contains(base, q, 0.0)) continue;
    r.w_f = std::max(r.w_f, std::fabs(f(p) - f(q)));
  }

  std::vector<Plane> planes(part.triangle_count());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int n = 0; n < part.triangle_count(); ++n) planes[n] = m.sub_plane(n);
  for (int k = 0; k < probe; ++k) {
    const Point2 p = draw_inside();
    const int n = locate(part, p);
    r.h_minus_b_sup =
        std::max(r.h_minus_b_sup, std::fabs(planes[n](p) - m.base_plane(p)));
  }

  r.alpha_sup = m.max_scaling();

  const int depth = std::max(1, m.policy.sample_depth);
  const double sample_count = double(depth + 1) * (depth + 2) / 2.0;
  double kh_min = std::numeric_limits<double>::infinity();
  for (int n = 0; n < part.triangle_count(); ++n) {
    double u2 = 0.0;
    for (Point2 q : barycentric_grid(part.subtriangle(n), depth)) {
      const Point2 pre = m.maps[n].apply_L_inverse(q);
      const double u = planes[n](q) - m.base_plane(pre);
      u2 += u * u;
    }
    kh_min = std::min(kh_min, std::sqrt(u2));
  }
  r.k_h = kh_min;
  r.k_h_prime = kh_min > 0.0
                    ? sample_count * r.k_prime / kh_min
                    : std::numeric_limits<double>::infinity();

  r.sup_bound = r.w_f * r.k_prime +
                r.h_minus_b_sup * r.alpha_sup / (1.0 - r.alpha_sup);
  r.integral_bound = std::fabs(signed_area(base)) * r.sup_bound;
  return r;
}

}  // namespace fractri
