#include "fractri/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <initializer_list>
#include <limits>
#include <stdexcept>

#include "fractri/parallel.hpp"

namespace fractri {

namespace {

double clamp_to(double v, double bound) {
  return std::clamp(v, -bound, bound);
}

double max_abs(std::initializer_list<double> vals) {
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

Point2 AffineMapCoefficients::apply_L_inverse(Point2 p) const {
  const double det = alpha1 * alpha4 - alpha2 * alpha3;
  const double dx = p.x - beta1;
  const double dy = p.y - beta2;
  return {(alpha4 * dx - alpha2 * dy) / det,
          (-alpha3 * dx + alpha1 * dy) / det};
}

AffineMapCoefficients solve_coefficients(
    const std::array<DataPoint3, 3>& base_data,
    const std::array<DataPoint3, 3>& sub_data, double alpha7) {
  if (std::fabs(alpha7) >= 1.0)
    throw std::invalid_argument("solve_coefficients: |alpha7| must be < 1");

  const double x1 = base_data[0].x, y1 = base_data[0].y, z1 = base_data[0].z;
  const double x2 = base_data[1].x, y2 = base_data[1].y, z2 = base_data[1].z;
  const double x3 = base_data[2].x, y3 = base_data[2].y, z3 = base_data[2].z;
  const double xn1 = sub_data[0].x, yn1 = sub_data[0].y, zn1 = sub_data[0].z;
  const double xn2 = sub_data[1].x, yn2 = sub_data[1].y, zn2 = sub_data[1].z;
  const double xn3 = sub_data[2].x, yn3 = sub_data[2].y, zn3 = sub_data[2].z;

  const double den = (x1 - x2) * (y1 - y3) - (x1 - x3) * (y1 - y2);
  const double xy_scale = max_abs({x1, x2, x3, y1, y2, y3});
  if (std::fabs(den) <= 2e-12 * xy_scale * xy_scale)
    throw std::invalid_argument("solve_coefficients: degenerate base triangle");

  AffineMapCoefficients m;
  m.alpha7 = alpha7;
  m.alpha1 = ((xn1 - xn2) * (y1 - y3) - (xn1 - xn3) * (y1 - y2)) / den;
  m.alpha2 = ((xn1 - xn3) * (x1 - x2) - (xn1 - xn2) * (x1 - x3)) / den;
  m.alpha3 = ((yn1 - yn2) * (y1 - y3) - (yn1 - yn3) * (y1 - y2)) / den;
  m.alpha4 = ((yn1 - yn3) * (x1 - x2) - (yn1 - yn2) * (x1 - x3)) / den;
  m.beta1 = ((xn1 * x2 - x1 * xn2) * y3 + (xn3 * x1 - x3 * xn1) * y2 +
             (xn2 * x3 - x2 * xn3) * y1) /
            den;
  m.beta2 = ((x2 * y3 - x3 * y2) * yn1 + (x3 * y1 - x1 * y3) * yn2 +
             (x1 * y2 - x2 * y1) * yn3) /
            den;

  const double w1 = zn1 - alpha7 * z1;
  const double w2 = zn2 - alpha7 * z2;
  const double w3 = zn3 - alpha7 * z3;
  m.alpha5 = (w1 * (y2 - y3) + w2 * (y3 - y1) + w3 * (y1 - y2)) / den;
  m.alpha6 = -(w1 * (x2 - x3) + w2 * (x3 - x1) + w3 * (x1 - x2)) / den;
  m.beta3 = (w1 * (x2 * y3 - x3 * y2) + w2 * (x3 * y1 - x1 * y3) +
             w3 * (x1 * y2 - x2 * y1)) /
            den;

  m.delta = std::fabs(m.alpha1 * m.alpha4 - m.alpha2 * m.alpha3);

  // Endpoint-condition residuals; anything above the gate means the closed
  // forms were fed inconsistent data.
  const double sub_scale =
      std::max(max_abs({xn1, xn2, xn3, yn1, yn2, yn3}), xy_scale);
  const double z_scale = std::max(max_abs({z1, z2, z3, zn1, zn2, zn3}), 1.0);
  for (int j = 0; j < 3; ++j) {
    const Point2 image = m.apply_L(base_data[j].xy());
    const double rx = std::fabs(image.x - sub_data[j].x);
    const double ry = std::fabs(image.y - sub_data[j].y);
    const double rz =
        std::fabs(m.apply_F(base_data[j].xy(), base_data[j].z) - sub_data[j].z);
    if (rx > 1e-9 * sub_scale || ry > 1e-9 * sub_scale || rz > 1e-9 * z_scale)
      throw std::logic_error("solve_coefficients: endpoint residual check failed");
  }
  return m;
}

double scaling_centroid(double z_sub_centroid, double zn1, double zn2,
                        double zn3, double z_base_centroid, double z1,
                        double z2, double z3, double clamp_bound) {
  const double num = z_sub_centroid - (zn1 + zn2 + zn3) / 3.0;
  const double den = z_base_centroid - (z1 + z2 + z3) / 3.0;
  const double z_scale = max_abs(
      {z_sub_centroid, zn1, zn2, zn3, z_base_centroid, z1, z2, z3});
  if (z_scale == 0.0 || std::fabs(den) < 1e-12 * z_scale) return 0.0;
  return clamp_to(num / den, clamp_bound);
}

double scaling_least_squares(const std::vector<DataPoint3>& samples,
                             const Plane& sub_plane, const Plane& base_plane,
                             const AffineMapCoefficients& map,
                             double clamp_bound) {
  double num = 0.0, den = 0.0, z_scale = 0.0;
  for (const DataPoint3& s : samples) {
    const Point2 pre = map.apply_L_inverse(s.xy());
    const double u = sub_plane(s.xy()) - base_plane(pre);
    num += (s.z - sub_plane(s.xy())) * u;
    den += u * u;
    z_scale = std::max(z_scale, std::fabs(s.z));
  }
  if (den <= 1e-24 * std::max(z_scale * z_scale, 1.0)) return 0.0;
  return clamp_to(num / den, clamp_bound);
}

double scaling_bound(const std::vector<DataPoint3>& samples,
                     const Plane& sub_plane, const Plane& base_plane,
                     const AffineMapCoefficients& map) {
  double num2 = 0.0, den2 = 0.0;
  for (const DataPoint3& s : samples) {
    const Point2 pre = map.apply_L_inverse(s.xy());
    const double u = sub_plane(s.xy()) - base_plane(pre);
    const double r = s.z - sub_plane(s.xy());
    num2 += r * r;
    den2 += u * u;
  }
  if (den2 == 0.0) {
    if (num2 == 0.0) return 0.0;  // plane data: no deviation to bound
    throw std::domain_error("scaling_bound: k_h = 0 (h == b on all samples)");
  }
  return std::sqrt(num2) / std::sqrt(den2);
}

HyperbolicityReport hyperbolicity(const std::vector<AffineMapCoefficients>& maps) {
  if (maps.empty())
    throw std::invalid_argument("hyperbolicity: empty map list");
  const double inf = std::numeric_limits<double>::infinity();
  double num1 = inf, num2 = inf, den1 = 0.0, den2 = 0.0, amax = 0.0;
  for (const auto& m : maps) {
    num1 = std::min(num1, 0.5 - (std::fabs(m.alpha3) + std::fabs(m.alpha1)));
    num2 = std::min(num2, 0.5 - (std::fabs(m.alpha2) + std::fabs(m.alpha4)));
    den1 = std::max(den1, std::fabs(m.alpha5));
    den2 = std::max(den2, std::fabs(m.alpha6));
    amax = std::max(amax, std::fabs(m.alpha7));
  }
  // A zero denominator leaves that branch unconstrained when the matching
  // row sums already fit under 0.5; when they do not, no theta can fix it.
  const double b1 = den1 > 0.0 ? num1 / den1 : (num1 >= 0.0 ? inf : -inf);
  const double b2 = den2 > 0.0 ? num2 / den2 : (num2 >= 0.0 ? inf : -inf);
  HyperbolicityReport r;
  r.theta = std::min(b1, b2);
  r.contraction = std::max(0.5, amax);
  r.hyperbolic = r.theta > 0.0 && r.contraction < 1.0;
  return r;
}

namespace {

std::array<DataPoint3, 3> sub_data_of(const ColoredPartition& part,
                                      const std::vector<double>& vertex_z,
                                      int n) {
  std::array<DataPoint3, 3> sd;
  for (int k = 0; k < 3; ++k) {
    const int v = part.tris[n][k];
    sd[k] = {part.vertices[v].x, part.vertices[v].y, vertex_z[v]};
  }
  return sd;
}

}  // namespace

std::vector<AffineMapCoefficients> solve_all_maps_serial(
    const ColoredPartition& part, const std::array<DataPoint3, 3>& base_data,
    const std::vector<double>& vertex_z, const std::vector<double>& alpha7s) {
  const int n_tris = part.triangle_count();
  std::vector<AffineMapCoefficients> maps(n_tris);
  for (int n = 0; n < n_tris; ++n)
    maps[n] = solve_coefficients(base_data, sub_data_of(part, vertex_z, n),
                                 alpha7s[n]);
  return maps;
}

std::vector<AffineMapCoefficients> solve_all_maps(
    const ColoredPartition& part, const std::array<DataPoint3, 3>& base_data,
    const std::vector<double>& vertex_z, const std::vector<double>& alpha7s) {
  const int n_tris = part.triangle_count();
  std::vector<AffineMapCoefficients> maps(n_tris);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int n = 0; n < n_tris; ++n) {
    try {
      maps[n] = solve_coefficients(base_data, sub_data_of(part, vertex_z, n),
                                   alpha7s[n]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return maps;
}

}  // namespace fractri
