#ifndef FRACTRI_QUADRATURE_HPP
#define FRACTRI_QUADRATURE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fractri/bfif.hpp"
#include "fractri/geometry.hpp"

namespace fractri {

// Deterministic reduction used by every quadrature sum: terms are produced
// into index-ordered slots (possibly in parallel) and combined pairwise, so
// results do not depend on the thread count.
double pairwise_sum(std::span<const double> terms);

struct IntegralReport {
  double A = 0.0;  // sum of alpha7 * delta, delta = |det L|
  double B = 0.0;  // sum of the transported affine integrals
  double M = 0.0;  // B / (1 - A); the integral of the model surface
  // Variant assembly keeping the orientation sign of det(L) in A. About
  // half the maps are orientation-reversing, so this differs from M; it is
  // the convention behind the reference convergence tables.
  double A_signed = 0.0;
  std::optional<double> M_signed;   // absent when 1 - A_signed is singular
  std::optional<double> reference;  // I, when available
  std::optional<double> error;      // M - I
  int d = 0;
  std::int64_t subtriangles = 0;
};

// Closed-form double integral of the model. Each B term is exact: the
// integrand is affine, so the centroid rule over the base triangle is used
// verbatim. Throws std::domain_error when |1 - A| < 1e-12.
IntegralReport integrate(const BfifModel& m);
IntegralReport integrate_serial(const BfifModel& m);

// Same value through the data route: B as a sum of subtriangle areas times
// vertex-mean terms. Agrees with integrate() to 1e-9 relative on any model.
double integrate_alternative(const BfifModel& m);

// Composite degree-5 (7-point) cubature over a uniform refinement^2
// subdivision of the triangle; the independent oracle for reference values.
double reference_integral(const SurfaceFn& f, const Triangle2& tri,
                          int refinement);
double reference_integral_serial(const SurfaceFn& f, const Triangle2& tri,
                                 int refinement);

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Uniform rejection sampling of the model surface; chunked fixed-seed
// streams make the result independent of the thread count.
MonteCarloResult monte_carlo_bfif_integral(const BfifModel& m,
                                           std::int64_t n_samples,
                                           std::uint64_t seed);
MonteCarloResult monte_carlo_bfif_integral_serial(const BfifModel& m,
                                                  std::int64_t n_samples,
                                                  std::uint64_t seed);

struct ErrorBoundReport {
  double delta = 0.0;           // max subtriangle diameter
  double w_f = 0.0;             // sampled modulus of continuity at delta
  double k_prime = 0.0;         // 12 * max|x| * max|y| over partition vertices
  double h_minus_b_sup = 0.0;   // sampled sup of |h - b|
  double alpha_sup = 0.0;       // max |alpha7|
  double k_h = 0.0;             // min over subtriangles of the sample norm
  double k_h_prime = 0.0;       // S * k' / k_h
  double sup_bound = 0.0;       // w_f*k' + |h-b|*a/(1-a)
  double integral_bound = 0.0;  // area * sup_bound
};

// Sampled evaluation of the convergence bound; estimates, not rigorous
// enclosures.
ErrorBoundReport error_bound(const BfifModel& m, const SurfaceFn& f,
                             int probe, std::uint64_t seed = 7);

}  // namespace fractri

#endif
