#include "fractri/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fractri {

namespace {

double raw_signed_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double bbox_scale(Point2 a, Point2 b, Point2 c) {
  const double w = std::max({a.x, b.x, c.x}) - std::min({a.x, b.x, c.x});
  const double h = std::max({a.y, b.y, c.y}) - std::min({a.y, b.y, c.y});
  return std::max(w, h);
}

}  // namespace

Triangle2::Triangle2(Point2 a, Point2 b, Point2 c) : a_(a), b_(b), c_(c) {
  for (const Point2& p : {a, b, c}) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("Triangle2: non-finite vertex");
  }
  const double area = std::fabs(raw_signed_area(a, b, c));
  if (area <= 1e-12 * bbox_scale(a, b, c))
    throw std::invalid_argument("Triangle2: degenerate (zero-area) triangle");
}

const Point2& Triangle2::vertex(int i) const {
  switch (i) {
    case 0: return a_;
    case 1: return b_;
    default: return c_;
  }
}

double Triangle2::scale() const { return bbox_scale(a_, b_, c_); }

double signed_area(const Triangle2& t) {
  return raw_signed_area(t.a(), t.b(), t.c());
}

Point2 centroid(const Triangle2& t) {
  return {(t.a().x + t.b().x + t.c().x) / 3.0,
          (t.a().y + t.b().y + t.c().y) / 3.0};
}

std::array<double, 3> barycentric(const Triangle2& t, Point2 p) {
  const Point2 a = t.a(), b = t.b(), c = t.c();
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double wb = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double wc = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - wb - wc, wb, wc};
}

bool contains(const Triangle2& t, Point2 p, double tol) {
  const double orient = raw_signed_area(t.a(), t.b(), t.c()) >= 0 ? 1.0 : -1.0;
  const Point2 v[3] = {t.a(), t.b(), t.c()};
  for (int i = 0; i < 3; ++i) {
    const Point2 e0 = v[i];
    const Point2 e1 = v[(i + 1) % 3];
    const double len = distance(e0, e1);
    const double cross =
        (e1.x - e0.x) * (p.y - e0.y) - (p.x - e0.x) * (e1.y - e0.y);
    if (orient * cross / len < -tol) return false;
  }
  return true;
}

Plane plane_through(const DataPoint3& p1, const DataPoint3& p2,
                    const DataPoint3& p3) {
  // Cramer solution of z_i = p*x_i + q*y_i + r; the shared denominator is
  // twice the signed area of the projected triangle.
  const double den = p1.x * (p2.y - p3.y) + p2.x * (p3.y - p1.y) +
                     p3.x * (p1.y - p2.y);
  const double scale = bbox_scale({p1.x, p1.y}, {p2.x, p2.y}, {p3.x, p3.y});
  if (std::fabs(den) <= 2e-12 * scale)
    throw std::invalid_argument("plane_through: collinear projected points");
  Plane pl;
  pl.p = (p1.z * (p2.y - p3.y) + p2.z * (p3.y - p1.y) + p3.z * (p1.y - p2.y)) /
         den;
  pl.q = (p1.z * (p3.x - p2.x) + p2.z * (p1.x - p3.x) + p3.z * (p2.x - p1.x)) /
         den;
  pl.r = (p1.z * (p2.x * p3.y - p3.x * p2.y) +
          p2.z * (p3.x * p1.y - p1.x * p3.y) +
          p3.z * (p1.x * p2.y - p2.x * p1.y)) /
         den;
  return pl;
}

double distance(Point2 p, Point2 q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

double longest_edge(const Triangle2& t) {
  return std::max({distance(t.a(), t.b()), distance(t.b(), t.c()),
                   distance(t.c(), t.a())});
}

std::vector<Point2> barycentric_grid(const Triangle2& t, int depth) {
  if (depth < 1) throw std::invalid_argument("barycentric_grid: depth < 1");
  std::vector<Point2> pts;
  pts.reserve(static_cast<size_t>(depth + 1) * (depth + 2) / 2);
  for (int i = 0; i <= depth; ++i) {
    for (int j = 0; j <= depth - i; ++j) {
      const double wa = double(i) / depth;
      const double wb = double(j) / depth;
      const double wc = 1.0 - wa - wb;
      pts.push_back({wa * t.a().x + wb * t.b().x + wc * t.c().x,
                     wa * t.a().y + wb * t.b().y + wc * t.c().y});
    }
  }
  return pts;
}

}  // namespace fractri
