#ifndef FRACTRI_PARTITION_HPP
#define FRACTRI_PARTITION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fractri/geometry.hpp"

namespace fractri {

// Triangle split into N = 2d^2-2d+3 subtriangles whose vertex graph carries
// a proper 3-coloring with every subtriangle rainbow (one vertex per color).
//
// Layout: rows j = 1..d of d+1 points each (row 1 is the edge a-b, the apex
// c sits alone above row d), rows cut between the a-c and b-c sides. Strips
// between consecutive rows are triangulated into 2d alternating
// upright/inverted triangles; the apex is joined to the 2nd and d-th points
// of row d to form the final three triangles. Points 3..d-1 of row d are
// hanging nodes on the middle top triangle's base edge.
struct ColoredPartition {
  Triangle2 base;
  int d = 0;
  std::vector<Point2> vertices;
  std::vector<int> colors;                   // 1..3 per vertex
  std::vector<std::array<int, 3>> tris;      // [k] = vertex index colored k+1
  std::vector<std::pair<int, int>> edges;    // adjacency, lo < hi

  explicit ColoredPartition(const Triangle2& b) : base(b) {}

  int vertex_index(int i, int j) const;      // 1-based row point (i, j)
  int apex_index() const { return d * (d + 1); }
  int triangle_count() const { return static_cast<int>(tris.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  Triangle2 subtriangle(int n) const;        // 0-based n
  double locate_tolerance() const { return 1e-9 * base.scale(); }
};

struct PartitionCounts {
  std::int64_t subtriangles = 0;
  std::int64_t vertices = 0;
};

// N = 2d^2-2d+3, V = d^2+d+1.
PartitionCounts count_formulas(int d);

// Builds the partition and its coloring. Throws std::invalid_argument for
// d < 4 and std::runtime_error when no rainbow 3-coloring exists (the
// construction admits one exactly when d == 1 mod 3).
ColoredPartition partition_triangle(const Triangle2& base, int d);

// Recomputes a coloring for the partition's topology: closed-form row
// coloring first, exhaustive backtracking as fallback. Throws when the
// search exhausts.
std::vector<int> color_partition(const ColoredPartition& p);

// Proper on every edge, rainbow on every subtriangle, exactly 3 colors.
bool verify_coloring(const ColoredPartition& p, const std::vector<int>& colors);

std::optional<std::vector<int>> backtrack_coloring(const ColoredPartition& p);

// Lowest-index subtriangle containing pt (within the partition's relative
// tolerance). Throws std::domain_error when pt lies outside the base.
int locate(const ColoredPartition& p, Point2 pt);

// Exhaustive-scan variant with the same contract.
int locate_scan(const ColoredPartition& p, Point2 pt);

}  // namespace fractri

#endif
