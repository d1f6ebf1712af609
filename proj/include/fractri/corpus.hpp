#ifndef FRACTRI_CORPUS_HPP
#define FRACTRI_CORPUS_HPP

#include <optional>
#include <string>

#include "fractri/bfif.hpp"
#include "fractri/geometry.hpp"
#include "fractri/partition.hpp"

namespace fractri {

// Built-in benchmark surface with its canonical triangle and, when known in
// closed form, the exact integral over that triangle.
struct TestFunction {
  std::string name;
  SurfaceFn fn;
  Triangle2 triangle;
  std::optional<double> exact_integral;
};

// Names: "matyas", "three-hump-camel", "plane:p,q,r", "constant:c".
TestFunction builtin(const std::string& name);

struct DatasetSamples {
  std::vector<double> vertex_z;
  std::vector<double> centroid_z;  // one per subtriangle
  double base_centroid_z = 0.0;
};

DatasetSamples sample_dataset(const SurfaceFn& f, const ColoredPartition& part);

}  // namespace fractri

#endif
