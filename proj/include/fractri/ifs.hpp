#ifndef FRACTRI_IFS_HPP
#define FRACTRI_IFS_HPP

#include <array>
#include <vector>

#include "fractri/geometry.hpp"
#include "fractri/partition.hpp"

namespace fractri {

// One IFS map w = (L, F): L is the domain contraction onto a subtriangle,
// F(x,y,z) = Q(x,y) + alpha7*z the matching height map.
struct AffineMapCoefficients {
  double alpha1 = 0, alpha2 = 0;   // linear part of L, first row
  double alpha3 = 0, alpha4 = 0;   // linear part of L, second row
  double beta1 = 0, beta2 = 0;     // translation of L
  double alpha5 = 0, alpha6 = 0, beta3 = 0;  // Q(x,y) = a5*x + a6*y + b3
  double alpha7 = 0;               // vertical scaling factor, |alpha7| < 1
  double delta = 0;                // |det L| = area ratio of the subtriangle

  Point2 apply_L(Point2 p) const {
    return {alpha1 * p.x + alpha2 * p.y + beta1,
            alpha3 * p.x + alpha4 * p.y + beta2};
  }
  Point2 apply_L_inverse(Point2 p) const;
  double apply_Q(Point2 p) const {
    return alpha5 * p.x + alpha6 * p.y + beta3;
  }
  double apply_F(Point2 p, double z) const { return apply_Q(p) + alpha7 * z; }
};

// Closed-form solve of the endpoint conditions: L maps the color-j base
// vertex onto the color-j subtriangle vertex and F carries the base data
// values onto the subtriangle ones. Residuals are re-checked against a
// 1e-9 relative gate to guard the transcription.
AffineMapCoefficients solve_coefficients(
    const std::array<DataPoint3, 3>& base_data,
    const std::array<DataPoint3, 3>& sub_data, double alpha7);

enum class ScalingMode { Centroid, LeastSquares, Fixed };

struct ScalingPolicy {
  ScalingMode mode = ScalingMode::Centroid;
  double fixed_value = 0.0;
  double clamp_bound = 0.9;
  int sample_depth = 4;  // barycentric grid depth for least-squares sampling
};

// Ratio of centroid deviations from vertex means, clamped to [-c, c];
// returns 0 when the base denominator is degenerate (affine data).
double scaling_centroid(double z_sub_centroid, double zn1, double zn2,
                        double zn3, double z_base_centroid, double z1,
                        double z2, double z3, double clamp_bound = 0.9);

// Least-squares fit of alpha7 over samples in the subtriangle, with
// u_l = (h - b) o L^{-1} at each sample; clamped to [-c, c].
double scaling_least_squares(const std::vector<DataPoint3>& samples,
                             const Plane& sub_plane, const Plane& base_plane,
                             const AffineMapCoefficients& map,
                             double clamp_bound = 0.9);

// Cauchy-Schwarz upper bound for the unclamped least-squares value.
double scaling_bound(const std::vector<DataPoint3>& samples,
                     const Plane& sub_plane, const Plane& base_plane,
                     const AffineMapCoefficients& map);

struct HyperbolicityReport {
  double theta = 0.0;        // metric weight certifying the contraction
  double contraction = 0.0;  // max(0.5, max |alpha7|)
  bool hyperbolic = false;   // theta > 0 and contraction < 1
};

HyperbolicityReport hyperbolicity(const std::vector<AffineMapCoefficients>& maps);

// Per-subtriangle solves; slots are independent, so the parallel kernel is
// bit-identical to the serial reference.
std::vector<AffineMapCoefficients> solve_all_maps(
    const ColoredPartition& part, const std::array<DataPoint3, 3>& base_data,
    const std::vector<double>& vertex_z, const std::vector<double>& alpha7s);
std::vector<AffineMapCoefficients> solve_all_maps_serial(
    const ColoredPartition& part, const std::array<DataPoint3, 3>& base_data,
    const std::vector<double>& vertex_z, const std::vector<double>& alpha7s);

}  // namespace fractri

#endif
