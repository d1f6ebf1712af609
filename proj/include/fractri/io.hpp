#ifndef FRACTRI_IO_HPP
#define FRACTRI_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "fractri/bfif.hpp"
#include "fractri/partition.hpp"
#include "fractri/quadrature.hpp"

namespace fractri {

// Source descriptor kept in the model file so reports can recover a
// reference integral: a builtin function name, or plain data.
struct ModelSource {
  bool is_function = false;
  std::string function_name;
};

// All floating-point fields are serialized with shortest-round-trip digits,
// so save -> load -> integrate reproduces M bit for bit.
void save_model(const BfifModel& m, const ModelSource& source,
                const std::string& path);

struct LoadedModel {
  BfifModel model;
  ModelSource source;
};

LoadedModel load_model(const std::string& path);

// 17-significant-digit decimal; the canonical number format of every file
// this project writes.
std::string format_double(double v);

void write_vertices_csv(const ColoredPartition& p, const std::string& path);
void write_triangles_csv(const ColoredPartition& p, const std::string& path);
void write_cloud_csv(const PointCloud& cloud, const std::string& path);
void write_cloud_ply(const PointCloud& cloud, const std::string& path);

struct TableRow {
  int d = 0;
  std::int64_t subtriangles = 0;
  double M = 0.0;
  double reference = 0.0;
  double error = 0.0;
};

void write_table_csv(const std::vector<TableRow>& rows, const std::string& path);

std::string report_json(const IntegralReport& r);

// vertices data: either `index,x,y,color,z` (coordinates cross-checked
// against the partition) or the short `index,z` form.
std::vector<double> read_vertex_data_csv(const std::string& path,
                                         const ColoredPartition& part);
// centroid data: `n,z` with n = 1..N for subtriangles and n = 0 for the base.
CentroidData read_centroids_csv(const std::string& path,
                                const ColoredPartition& part);

}  // namespace fractri

#endif
