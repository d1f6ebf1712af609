#ifndef FRACTRI_BFIF_HPP
#define FRACTRI_BFIF_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fractri/geometry.hpp"
#include "fractri/ifs.hpp"
#include "fractri/partition.hpp"

namespace fractri {

using SurfaceFn = std::function<double(Point2)>;

// Centroid samples needed by the centroid scaling mode when no callable
// source is available: one z per subtriangle centroid plus the base's.
struct CentroidData {
  std::vector<double> sub_centroid_z;
  double base_centroid_z = 0.0;
};

// Interpolation model: the partition, the data it interpolates, and the N
// solved maps whose attractor is the graph of the interpolant.
struct BfifModel {
  ColoredPartition partition;
  std::array<DataPoint3, 3> base_data{};  // color-ordered corners of the base
  std::vector<double> vertex_z;           // one value per partition vertex
  std::vector<AffineMapCoefficients> maps;
  ScalingPolicy policy;
  HyperbolicityReport diagnostics;
  Plane base_plane;    // through the base corners' data
  double z_bound = 0;  // sup-norm bound on the interpolant, drives tail cuts

  explicit BfifModel(ColoredPartition part) : partition(std::move(part)) {}

  int subtriangle_count() const { return partition.triangle_count(); }
  double max_scaling() const;
  std::array<DataPoint3, 3> sub_data(int n) const;
  Plane sub_plane(int n) const;
};

BfifModel build_model(const ColoredPartition& part, const SurfaceFn& f,
                      const ScalingPolicy& policy);
BfifModel build_model(const Triangle2& base, int d, const SurfaceFn& f,
                      const ScalingPolicy& policy);
BfifModel build_model_from_data(const ColoredPartition& part,
                                std::vector<double> vertex_z,
                                const std::optional<CentroidData>& centroids,
                                const ScalingPolicy& policy);

// One application of the interpolation operator to an arbitrary surface g.
double apply_T(const BfifModel& m, const SurfaceFn& g, Point2 p);
// Same, but dispatching through a chosen subtriangle (p must lie in it);
// lets tests probe both sides of a shared edge.
double apply_T_in(const BfifModel& m, int n, const SurfaceFn& g, Point2 p);

struct EvalResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int steps = 0;
  bool converged = false;
};

// Fixed-point value at p by expanding the self-referencing relation along
// the inverse-map orbit; the geometric tail is cut once it drops under tol.
EvalResult evaluate_detailed(const BfifModel& m, Point2 p, double tol = 1e-8,
                             int max_iter = 200);
double evaluate(const BfifModel& m, Point2 p, double tol = 1e-8,
                int max_iter = 200);
// First dispatch forced through subtriangle n (two-sided edge checks).
double evaluate_in(const BfifModel& m, int n, Point2 p, double tol = 1e-8,
                   int max_iter = 200);

std::vector<double> evaluate_batch(const BfifModel& m,
                                   const std::vector<Point2>& pts,
                                   double tol = 1e-8, int max_iter = 200);
std::vector<double> evaluate_batch_serial(const BfifModel& m,
                                          const std::vector<Point2>& pts,
                                          double tol = 1e-8,
                                          int max_iter = 200);

enum class RenderMethod { Chaos, Deterministic };

struct PointCloud {
  std::vector<std::array<double, 3>> points;
};

// Attractor sampling. Chaos: random iteration with map probabilities
// proportional to the area ratios, 100-step burn-in, fixed seed.
// Deterministic: repeated application of the full map family to the vertex
// graph sample, strided down to the requested size.
PointCloud render_attractor(const BfifModel& m, std::int64_t n_points,
                            RenderMethod method, std::uint64_t seed);

// Max residual of f(p) = h(p) + alpha7*(f - b)(L^{-1}(p)) over the samples.
double check_plane_relation(const BfifModel& m,
                            const std::vector<Point2>& samples,
                            double tol = 1e-8, int max_iter = 200);

}  // namespace fractri

#endif
