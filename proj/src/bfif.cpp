#include "fractri/bfif.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>

#include "fractri/parallel.hpp"

namespace fractri {

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

std::array<int, 3> base_corner_indices(const ColoredPartition& part) {
  return {part.vertex_index(1, 1), part.vertex_index(part.d + 1, 1),
          part.apex_index()};
}

std::array<DataPoint3, 3> color_ordered_base_data(
    const ColoredPartition& part, const std::vector<double>& vertex_z) {
  std::array<DataPoint3, 3> base{};
  bool seen[4] = {false, false, false, false};
  for (int v : base_corner_indices(part)) {
    const int c = part.colors[v];
    seen[c] = true;
    base[c - 1] = {part.vertices[v].x, part.vertices[v].y, vertex_z[v]};
  }
  if (!(seen[1] && seen[2] && seen[3]))
    throw std::logic_error("build_model: base corners do not carry all 3 colors");
  return base;
}

double q_sup_bound(const std::vector<AffineMapCoefficients>& maps,
                   const Triangle2& base) {
  double max_q = 0.0;
  for (const auto& m : maps)
    for (int j = 0; j < 3; ++j)
      max_q = std::max(max_q, std::fabs(m.apply_Q(base.vertex(j))));
  return max_q;
}

// Nudge an off-domain iterate back onto the base triangle; rounding can
// push inverse-map orbits a few ulps outside.
Point2 project_into(const Triangle2& base, Point2 p) {
  auto w = barycentric(base, p);
  for (double& v : w) v = std::max(v, 0.0);
  const double s = w[0] + w[1] + w[2];
  return {(w[0] * base.a().x + w[1] * base.b().x + w[2] * base.c().x) / s,
          (w[0] * base.a().y + w[1] * base.b().y + w[2] * base.c().y) / s};
}

}  // namespace

double BfifModel::max_scaling() const {
  double a = 0.0;
  for (const auto& m : maps) a = std::max(a, std::fabs(m.alpha7));
  return a;
}

std::array<DataPoint3, 3> BfifModel::sub_data(int n) const {
  std::array<DataPoint3, 3> sd{};
  for (int k = 0; k < 3; ++k) {
    const int v = partition.tris[n][k];
    sd[k] = {partition.vertices[v].x, partition.vertices[v].y, vertex_z[v]};
  }
  return sd;
}

Plane BfifModel::sub_plane(int n) const {
  const auto sd = sub_data(n);
  return plane_through(sd[0], sd[1], sd[2]);
}

namespace {

BfifModel assemble(const ColoredPartition& part, std::vector<double> vertex_z,
                   const std::vector<double>& alpha7s,
                   const ScalingPolicy& policy) {
  BfifModel model(part);
  model.vertex_z = std::move(vertex_z);
  model.policy = policy;
  model.base_data = color_ordered_base_data(model.partition, model.vertex_z);
  model.maps = solve_all_maps(model.partition, model.base_data, model.vertex_z,
                              alpha7s);
  model.diagnostics = hyperbolicity(model.maps);
  model.base_plane =
      plane_through(model.base_data[0], model.base_data[1], model.base_data[2]);
  const double amax = model.max_scaling();
  model.z_bound = q_sup_bound(model.maps, model.partition.base) / (1.0 - amax);
  return model;
}

std::vector<double> centroid_alpha7s(const ColoredPartition& part,
                                     const std::vector<double>& vertex_z,
                                     const std::vector<double>& sub_centroid_z,
                                     double base_centroid_z,
                                     const ScalingPolicy& policy) {
  const auto base = color_ordered_base_data(part, vertex_z);
  const int n_tris = part.triangle_count();
  std::vector<double> alpha7s(n_tris);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int n = 0; n < n_tris; ++n) {
    const auto& t = part.tris[n];
    alpha7s[n] = scaling_centroid(
        sub_centroid_z[n], vertex_z[t[0]], vertex_z[t[1]], vertex_z[t[2]],
        base_centroid_z, base[0].z, base[1].z, base[2].z, policy.clamp_bound);
  }
  return alpha7s;
}

}  // namespace

BfifModel build_model(const ColoredPartition& part, const SurfaceFn& f,
                      const ScalingPolicy& policy) {
  const int n_verts = part.vertex_count();
  const int n_tris = part.triangle_count();
  std::vector<double> vertex_z(n_verts);
  for (int v = 0; v < n_verts; ++v) vertex_z[v] = f(part.vertices[v]);

  std::vector<double> alpha7s(n_tris, 0.0);
  switch (policy.mode) {
    case ScalingMode::Fixed:
      if (std::fabs(policy.fixed_value) > policy.clamp_bound)
        throw std::invalid_argument(
            "build_model: |fixed scaling value| exceeds the clamp bound");
      std::fill(alpha7s.begin(), alpha7s.end(), policy.fixed_value);
      break;
    case ScalingMode::Centroid: {
      std::vector<double> sub_centroid_z(n_tris);
      for (int n = 0; n < n_tris; ++n)
        sub_centroid_z[n] = f(centroid(part.subtriangle(n)));
      const double base_centroid_z = f(centroid(part.base));
      alpha7s = centroid_alpha7s(part, vertex_z, sub_centroid_z,
                                 base_centroid_z, policy);
      break;
    }
    case ScalingMode::LeastSquares: {
      // L does not depend on alpha7, so a zero-alpha pre-solve provides the
      // inverse maps the sampled fit needs.
      const auto base = color_ordered_base_data(part, vertex_z);
      const auto pre = solve_all_maps(part, base, vertex_z,
                                      std::vector<double>(n_tris, 0.0));
      const Plane base_plane = plane_through(base[0], base[1], base[2]);
      std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(max_threads())
      for (int n = 0; n < n_tris; ++n) {
        try {
          const Triangle2 sub = part.subtriangle(n);
          const auto sd_pts = barycentric_grid(sub, policy.sample_depth);
          std::vector<DataPoint3> samples;
          samples.reserve(sd_pts.size());
          for (Point2 q : sd_pts) samples.push_back({q.x, q.y, f(q)});
          const auto sd = [&] {
            std::array<DataPoint3, 3> a{};
            for (int k = 0; k < 3; ++k) {
              const int v = part.tris[n][k];
              a[k] = {part.vertices[v].x, part.vertices[v].y, vertex_z[v]};
            }
            return a;
          }();
          const Plane h = plane_through(sd[0], sd[1], sd[2]);
          alpha7s[n] = scaling_least_squares(samples, h, base_plane, pre[n],
                                             policy.clamp_bound);
        } catch (...) {
#pragma omp critical
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
      break;
    }
  }
  return assemble(part, std::move(vertex_z), alpha7s, policy);
}

BfifModel build_model(const Triangle2& base, int d, const SurfaceFn& f,
                      const ScalingPolicy& policy) {
  return build_model(partition_triangle(base, d), f, policy);
}

BfifModel build_model_from_data(const ColoredPartition& part,
                                std::vector<double> vertex_z,
                                const std::optional<CentroidData>& centroids,
                                const ScalingPolicy& policy) {
  const int n_verts = part.vertex_count();
  const int n_tris = part.triangle_count();
  if (static_cast<int>(vertex_z.size()) != n_verts)
    throw std::invalid_argument("build_model_from_data: need one z per vertex");

  std::vector<double> alpha7s(n_tris, 0.0);
  switch (policy.mode) {
    case ScalingMode::Fixed:
      if (std::fabs(policy.fixed_value) > policy.clamp_bound)
        throw std::invalid_argument(
            "build_model_from_data: |fixed scaling value| exceeds the clamp bound");
      std::fill(alpha7s.begin(), alpha7s.end(), policy.fixed_value);
      break;
    case ScalingMode::Centroid: {
      if (!centroids)
        throw std::invalid_argument(
            "build_model_from_data: centroid scaling needs centroid samples");
      if (static_cast<int>(centroids->sub_centroid_z.size()) != n_tris)
        throw std::invalid_argument(
            "build_model_from_data: need one centroid z per subtriangle");
      alpha7s = centroid_alpha7s(part, vertex_z, centroids->sub_centroid_z,
                                 centroids->base_centroid_z, policy);
      break;
    }
    case ScalingMode::LeastSquares:
      throw std::invalid_argument(
          "build_model_from_data: least-squares scaling needs a callable source");
  }
  return assemble(part, std::move(vertex_z), alpha7s, policy);
}

double apply_T_in(const BfifModel& m, int n, const SurfaceFn& g, Point2 p) {
  const auto& map = m.maps.at(static_cast<size_t>(n));
  const Point2 q = map.apply_L_inverse(p);
  return map.apply_F(q, g(q));
}

double apply_T(const BfifModel& m, const SurfaceFn& g, Point2 p) {
  int n;
  try {
    n = locate(m.partition, p);
  } catch (const std::domain_error&) {
    // Inverse-map orbits can drift a few ulps past the boundary, and the
    // expansion factor of L^-1 can stretch that beyond the locate slack.
    if (!contains(m.partition.base, p, 1e-6 * m.partition.base.scale())) throw;
    p = project_into(m.partition.base, p);
    n = locate(m.partition, p);
  }
  return apply_T_in(m, n, g, p);
}

namespace {

EvalResult evaluate_impl(const BfifModel& m, Point2 p, double tol,
                         int max_iter, int forced_first) {
  if (tol <= 0.0) throw std::invalid_argument("evaluate: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("evaluate: max_iter must be >= 1");

  EvalResult r;
  double coeff = 1.0;
  Point2 cur = p;
  for (int step = 0; step < max_iter; ++step) {
    int n;
    if (step == 0 && forced_first >= 0) {
      n = forced_first;
    } else {
      try {
        n = locate(m.partition, cur);
      } catch (const std::domain_error&) {
        if (step == 0) throw;  // caller really is outside the domain
        cur = project_into(m.partition.base, cur);
        n = locate(m.partition, cur);
      }
    }
    const auto& map = m.maps[n];
    const Point2 q = map.apply_L_inverse(cur);
    r.value += coeff * map.apply_Q(q);
    coeff *= map.alpha7;
    cur = q;
    r.steps = step + 1;
    r.tail_bound = std::fabs(coeff) * m.z_bound;
    if (r.tail_bound < tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace

EvalResult evaluate_detailed(const BfifModel& m, Point2 p, double tol,
                             int max_iter) {
  return evaluate_impl(m, p, tol, max_iter, -1);
}

double evaluate(const BfifModel& m, Point2 p, double tol, int max_iter) {
  return evaluate_impl(m, p, tol, max_iter, -1).value;
}

double evaluate_in(const BfifModel& m, int n, Point2 p, double tol,
                   int max_iter) {
  return evaluate_impl(m, p, tol, max_iter, n).value;
}

std::vector<double> evaluate_batch_serial(const BfifModel& m,
                                          const std::vector<Point2>& pts,
                                          double tol, int max_iter) {
  std::vector<double> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    out[i] = evaluate(m, pts[i], tol, max_iter);
  return out;
}

std::vector<double> evaluate_batch(const BfifModel& m,
                                   const std::vector<Point2>& pts,
                                   double tol, int max_iter) {
  std::vector<double> out(pts.size());
  std::exception_ptr failure;
  const std::int64_t count = static_cast<std::int64_t>(pts.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[i] = evaluate(m, pts[i], tol, max_iter);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

PointCloud render_chaos(const BfifModel& m, std::int64_t n_points,
                        std::uint64_t seed) {
  const int n_maps = m.subtriangle_count();
  std::vector<double> cum(n_maps);
  double total = 0.0;
  for (int n = 0; n < n_maps; ++n) {
    total += m.maps[n].delta;
    cum[n] = total;
  }
  for (double& c : cum) c /= total;

  std::mt19937_64 rng(seed);
  Point2 xy = centroid(m.partition.base);
  double z = (m.base_data[0].z + m.base_data[1].z + m.base_data[2].z) / 3.0;

  PointCloud cloud;
  cloud.points.reserve(static_cast<size_t>(n_points));
  const int burn_in = 100;
  for (std::int64_t i = 0; i < burn_in + n_points; ++i) {
    const double u = uniform01(rng);
    const int n = static_cast<int>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    const auto& map = m.maps[std::min(n, n_maps - 1)];
    const double z_new = map.apply_F(xy, z);
    xy = map.apply_L(xy);
    z = z_new;
    if (i >= burn_in) cloud.points.push_back({xy.x, xy.y, z});
  }
  return cloud;
}

PointCloud render_deterministic(const BfifModel& m, std::int64_t n_points) {
  using Sample = std::array<double, 3>;
  std::vector<Sample> set;
  set.reserve(m.partition.vertices.size());
  for (size_t v = 0; v < m.partition.vertices.size(); ++v)
    set.push_back({m.partition.vertices[v].x, m.partition.vertices[v].y,
                   m.vertex_z[v]});

  double lo[3] = {set[0][0], set[0][1], set[0][2]};
  double hi[3] = {set[0][0], set[0][1], set[0][2]};
  for (const auto& s : set)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], s[k]);
      hi[k] = std::max(hi[k], s[k]);
    }
  const double diam = std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) +
                                (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                (hi[2] - lo[2]) * (hi[2] - lo[2]));
  const double contraction = m.diagnostics.contraction;
  const double resolution = diam / std::sqrt(double(std::max<std::int64_t>(n_points, 2)));
  int rounds = static_cast<int>(
      std::ceil(std::log(resolution / std::max(diam, 1e-300)) /
                std::log(contraction)));
  rounds = std::clamp(rounds, 1, 64);

  const size_t cap = static_cast<size_t>(
      std::max<std::int64_t>(n_points, 4 * m.subtriangle_count()));
  for (int round = 0; round < rounds; ++round) {
    std::vector<Sample> next;
    next.reserve(std::min(cap * 2, set.size() * m.maps.size()));
    const size_t total = set.size() * m.maps.size();
    const size_t stride = std::max<size_t>(1, total / cap);
    size_t idx = 0;
    for (const auto& map : m.maps)
      for (const auto& s : set) {
        if (idx++ % stride != 0) continue;
        const Point2 xy = map.apply_L({s[0], s[1]});
        next.push_back({xy.x, xy.y, map.apply_F({s[0], s[1]}, s[2])});
      }
    set = std::move(next);
  }

  PointCloud cloud;
  if (static_cast<std::int64_t>(set.size()) <= n_points) {
    cloud.points = std::move(set);
  } else {
    cloud.points.reserve(static_cast<size_t>(n_points));
    const double step = double(set.size()) / double(n_points);
    for (std::int64_t i = 0; i < n_points; ++i)
      cloud.points.push_back(set[static_cast<size_t>(i * step)]);
  }
  return cloud;
}

}  // namespace

PointCloud render_attractor(const BfifModel& m, std::int64_t n_points,
                            RenderMethod method, std::uint64_t seed) {
  if (n_points <= 0)
    throw std::invalid_argument("render_attractor: n_points must be > 0");
  return method == RenderMethod::Chaos ? render_chaos(m, n_points, seed)
                                       : render_deterministic(m, n_points);
}

double check_plane_relation(const BfifModel& m,
                            const std::vector<Point2>& samples, double tol,
                            int max_iter) {
  double worst = 0.0;
  for (Point2 p : samples) {
    const int n = locate(m.partition, p);
    const Plane h = m.sub_plane(n);
    const Point2 q = m.maps[n].apply_L_inverse(p);
    const double lhs = evaluate(m, p, tol, max_iter);
    const double rhs =
        h(p) + m.maps[n].alpha7 * (evaluate(m, q, tol, max_iter) - m.base_plane(q));
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

}  // namespace fractri
