#ifndef FRACTRI_GEOMETRY_HPP
#define FRACTRI_GEOMETRY_HPP

#include <array>
#include <stdexcept>
#include <vector>

namespace fractri {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Planar point carrying an interpolation value.
struct DataPoint3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  Point2 xy() const { return {x, y}; }
};

// z = p*x + q*y + r
struct Plane {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double operator()(double x, double y) const { return p * x + q * y + r; }
  double operator()(Point2 pt) const { return p * pt.x + q * pt.y + r; }
};

// Non-degenerate triangle; degeneracy is rejected at construction so
// downstream code can assume a usable basis.
class Triangle2 {
 public:
  Triangle2(Point2 a, Point2 b, Point2 c);

  const Point2& a() const { return a_; }
  const Point2& b() const { return b_; }
  const Point2& c() const { return c_; }
  const Point2& vertex(int i) const;

  // Longest bounding-box extent; the base unit for relative tolerances.
  double scale() const;

 private:
  Point2 a_, b_, c_;
};

double signed_area(const Triangle2& t);
Point2 centroid(const Triangle2& t);

// Weights (wa, wb, wc) with p = wa*a + wb*b + wc*c, wa+wb+wc = 1.
std::array<double, 3> barycentric(const Triangle2& t, Point2 p);

// Signed-distance containment test: p is accepted when it lies no farther
// than `tol` outside any edge. `tol` is an absolute length.
bool contains(const Triangle2& t, Point2 p, double tol);

// Plane through three data points whose (x,y) projections are not collinear.
Plane plane_through(const DataPoint3& p1, const DataPoint3& p2,
                    const DataPoint3& p3);

double distance(Point2 p, Point2 q);
double longest_edge(const Triangle2& t);

// Barycentric lattice of depth k: (k+1)(k+2)/2 points covering t, vertices
// included.
std::vector<Point2> barycentric_grid(const Triangle2& t, int depth);

}  // namespace fractri

#endif
