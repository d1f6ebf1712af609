#include "fractri/corpus.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace fractri {

namespace {

std::vector<double> parse_params(const std::string& spec, size_t expect) {
  std::vector<double> vals;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    vals.push_back(std::stod(item, &pos));
    if (pos != item.size())
      throw std::invalid_argument("builtin: bad numeric parameter '" + item + "'");
  }
  if (vals.size() != expect)
    throw std::invalid_argument("builtin: expected " + std::to_string(expect) +
                                " parameters");
  return vals;
}

const Triangle2 kUnitRight({0, 0}, {1, 0}, {0, 1});

}  // namespace

TestFunction builtin(const std::string& name) {
  if (name == "matyas") {
    return {name,
            [](Point2 p) {
              return 0.26 * (p.x * p.x + p.y * p.y) - 0.48 * p.x * p.y;
            },
            Triangle2({-10, -10}, {10, -10}, {0, 10}),
            2600.0};
  }
  if (name == "three-hump-camel") {
    return {name,
            [](Point2 p) {
              const double x2 = p.x * p.x;
              return 2.0 * x2 - 1.05 * x2 * x2 + x2 * x2 * x2 / 6.0 +
                     p.x * p.y + p.y * p.y;
            },
            Triangle2({-5, -5}, {5, -5}, {0, 5}),
            276875.0 / 84.0};
  }
  if (name.rfind("plane:", 0) == 0) {
    const auto v = parse_params(name.substr(6), 3);
    const double p = v[0], q = v[1], r = v[2];
    // Exact over the unit right triangle: area * plane(centroid).
    return {name,
            [p, q, r](Point2 pt) { return p * pt.x + q * pt.y + r; },
            kUnitRight,
            0.5 * (p / 3.0 + q / 3.0 + r)};
  }
  if (name.rfind("constant:", 0) == 0) {
    const double c = parse_params(name.substr(9), 1)[0];
    return {name, [c](Point2) { return c; }, kUnitRight, 0.5 * c};
  }
  throw std::invalid_argument("builtin: unknown test function '" + name + "'");
}

DatasetSamples sample_dataset(const SurfaceFn& f, const ColoredPartition& part) {
  DatasetSamples s;
  s.vertex_z.reserve(part.vertices.size());
  for (const Point2& v : part.vertices) s.vertex_z.push_back(f(v));
  s.centroid_z.reserve(part.tris.size());
  for (int n = 0; n < part.triangle_count(); ++n)
    s.centroid_z.push_back(f(centroid(part.subtriangle(n))));
  s.base_centroid_z = f(centroid(part.base));
  return s;
}

}  // namespace fractri
