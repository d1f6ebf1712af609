#include "fractri/partition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fractri {

namespace {

int positive_mod3(int v) {
  int m = v % 3;
  return m < 0 ? m + 3 : m;
}

// The third color once two distinct ones are taken; 0 when they collide.
int third_color(int c1, int c2) {
  if (c1 == c2) return 0;
  return 6 - c1 - c2;
}

struct RawTopology {
  // Construction-order vertex triples, before color-ordering.
  std::vector<std::array<int, 3>> tris;
};

}  // namespace

int ColoredPartition::vertex_index(int i, int j) const {
  return (j - 1) * (d + 1) + (i - 1);
}

Triangle2 ColoredPartition::subtriangle(int n) const {
  const auto& t = tris.at(static_cast<size_t>(n));
  return Triangle2(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
}

PartitionCounts count_formulas(int d) {
  if (d < 4) throw std::invalid_argument("count_formulas: d < 4");
  const std::int64_t dd = d;
  return {2 * dd * dd - 2 * dd + 3, dd * dd + dd + 1};
}

namespace {

void build_vertices(ColoredPartition& p) {
  const int d = p.d;
  const Point2 a = p.base.a(), b = p.base.b(), c = p.base.c();
  p.vertices.reserve(static_cast<size_t>(d) * (d + 1) + 1);
  for (int j = 1; j <= d; ++j) {
    const double t = double(j - 1) / d;
    for (int i = 1; i <= d + 1; ++i) {
      const double u = double(i - 1) / d;
      p.vertices.push_back({(1.0 - u) * (1.0 - t) * a.x + u * (1.0 - t) * b.x + t * c.x,
                            (1.0 - u) * (1.0 - t) * a.y + u * (1.0 - t) * b.y + t * c.y});
    }
  }
  p.vertices.push_back(c);
}

RawTopology build_triangles(const ColoredPartition& p) {
  const int d = p.d;
  RawTopology topo;
  topo.tris.reserve(static_cast<size_t>(2 * d * d - 2 * d + 3));
  for (int j = 1; j <= d - 1; ++j) {
    for (int i = 1; i <= d; ++i) {
      topo.tris.push_back({p.vertex_index(i, j), p.vertex_index(i + 1, j),
                           p.vertex_index(i, j + 1)});
      topo.tris.push_back({p.vertex_index(i + 1, j), p.vertex_index(i + 1, j + 1),
                           p.vertex_index(i, j + 1)});
    }
  }
  const int apex = p.apex_index();
  topo.tris.push_back({p.vertex_index(1, d), p.vertex_index(2, d), apex});
  topo.tris.push_back({p.vertex_index(2, d), p.vertex_index(d, d), apex});
  topo.tris.push_back({p.vertex_index(d, d), p.vertex_index(d + 1, d), apex});
  return topo;
}

void build_edges(ColoredPartition& p) {
  const int d = p.d;
  std::set<std::pair<int, int>> es;
  auto add = [&es](int u, int v) {
    es.insert({std::min(u, v), std::max(u, v)});
  };
  for (int j = 1; j <= d; ++j)
    for (int i = 1; i <= d; ++i)
      add(p.vertex_index(i, j), p.vertex_index(i + 1, j));
  for (int j = 1; j <= d - 1; ++j) {
    for (int i = 1; i <= d + 1; ++i)
      add(p.vertex_index(i, j), p.vertex_index(i, j + 1));
    for (int i = 1; i <= d; ++i)
      add(p.vertex_index(i + 1, j), p.vertex_index(i, j + 1));
  }
  const int apex = p.apex_index();
  add(p.vertex_index(1, d), apex);
  add(p.vertex_index(2, d), apex);
  add(p.vertex_index(d, d), apex);
  add(p.vertex_index(d + 1, d), apex);
  add(p.vertex_index(2, d), p.vertex_index(d, d));
  p.edges.assign(es.begin(), es.end());
}

std::vector<int> formula_coloring(const ColoredPartition& p) {
  const int d = p.d;
  std::vector<int> colors(p.vertices.size(), 0);
  for (int j = 1; j <= d; ++j)
    for (int i = 1; i <= d + 1; ++i)
      colors[p.vertex_index(i, j)] = positive_mod3(i - j) + 1;

  // Apex color must complete all three top triangles at once.
  const int c1 = colors[p.vertex_index(1, d)];
  const int c2 = colors[p.vertex_index(2, d)];
  const int cd = colors[p.vertex_index(d, d)];
  const int cd1 = colors[p.vertex_index(d + 1, d)];
  const int want1 = third_color(c1, c2);
  const int want2 = third_color(c2, cd);
  const int want3 = third_color(cd, cd1);
  if (want1 != 0 && want1 == want2 && want2 == want3)
    colors[p.apex_index()] = want1;
  else
    colors[p.apex_index()] = 1;  // placeholder; verification will reject
  return colors;
}

}  // namespace

bool verify_coloring(const ColoredPartition& p, const std::vector<int>& colors) {
  if (colors.size() != p.vertices.size()) return false;
  bool used[4] = {false, false, false, false};
  for (int c : colors) {
    if (c < 1 || c > 3) return false;
    used[c] = true;
  }
  if (!(used[1] && used[2] && used[3])) return false;
  for (const auto& [u, v] : p.edges)
    if (colors[u] == colors[v]) return false;
  for (const auto& t : p.tris) {
    const int mask = (1 << colors[t[0]]) | (1 << colors[t[1]]) | (1 << colors[t[2]]);
    if (mask != 0b1110) return false;
  }
  return true;
}

std::optional<std::vector<int>> backtrack_coloring(const ColoredPartition& p) {
  const int nv = p.vertex_count();
  const int d = p.d;

  // Anti-diagonal order: when (i, j) is placed, its neighbours (i, j-1) and
  // (i+1, j-1) are already colored, so interior choices are forced and dead
  // ends surface within a step or two.
  std::vector<int> order;
  order.reserve(nv);
  {
    std::vector<std::pair<std::pair<int, int>, int>> keyed;
    for (int j = 1; j <= d; ++j)
      for (int i = 1; i <= d + 1; ++i)
        keyed.push_back({{i + j, j}, p.vertex_index(i, j)});
    std::sort(keyed.begin(), keyed.end());
    for (const auto& k : keyed) order.push_back(k.second);
    order.push_back(p.apex_index());
  }

  std::vector<std::vector<int>> adj(nv);
  for (const auto& [u, v] : p.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::vector<int>> tris_of(nv);
  for (size_t t = 0; t < p.tris.size(); ++t)
    for (int v : p.tris[t]) tris_of[v].push_back(static_cast<int>(t));

  std::vector<int> colors(nv, 0);
  std::vector<int> rank(nv, 0);
  for (int k = 0; k < nv; ++k) rank[order[k]] = k;

  auto feasible = [&](int v, int c) {
    for (int w : adj[v])
      if (colors[w] == c) return false;
    for (int t : tris_of[v]) {
      const auto& tri = p.tris[t];
      int other1 = -1, other2 = -1;
      for (int w : tri)
        if (w != v) (other1 < 0 ? other1 : other2) = w;
      if (colors[other1] != 0 && colors[other2] != 0) {
        const int mask = (1 << c) | (1 << colors[other1]) | (1 << colors[other2]);
        if (mask != 0b1110) return false;
      }
    }
    return true;
  };

  // Iterative depth-first search; choice[k] is the last color tried at rank k.
  std::vector<int> choice(nv, 0);
  int k = 0;
  while (k >= 0 && k < nv) {
    const int v = order[k];
    int c = choice[k] + 1;
    while (c <= 3 && !feasible(v, c)) ++c;
    if (c <= 3) {
      colors[v] = c;
      choice[k] = c;
      ++k;
    } else {
      colors[v] = 0;
      choice[k] = 0;
      --k;
      if (k >= 0) colors[order[k]] = 0;
    }
  }
  if (k < 0) return std::nullopt;
  return colors;
}

std::vector<int> color_partition(const ColoredPartition& p) {
  std::vector<int> colors = formula_coloring(p);
  if (verify_coloring(p, colors)) return colors;
  auto found = backtrack_coloring(p);
  if (found && verify_coloring(p, *found)) return *found;
  throw std::runtime_error(
      "color_partition: no rainbow 3-coloring exists for this partition "
      "(supported subdivision counts satisfy d == 1 mod 3)");
}

ColoredPartition partition_triangle(const Triangle2& base, int d) {
  if (d < 4) throw std::invalid_argument("partition_triangle: d must be >= 4");
  ColoredPartition p(base);
  p.d = d;
  build_vertices(p);
  RawTopology topo = build_triangles(p);
  p.tris = topo.tris;
  build_edges(p);
  p.colors = color_partition(p);
  // Store triples color-ordered: slot k holds the vertex colored k+1.
  for (auto& t : p.tris) {
    std::array<int, 3> ordered{};
    for (int v : t) ordered[p.colors[v] - 1] = v;
    t = ordered;
  }
  return p;
}

namespace {

int try_candidates(const ColoredPartition& p, Point2 pt, double tol,
                   const std::vector<int>& candidates) {
  for (int n : candidates)
    if (contains(p.subtriangle(n), pt, tol)) return n;
  return -1;
}

}  // namespace

int locate(const ColoredPartition& p, Point2 pt) {
  const double tol = p.locate_tolerance();
  if (!contains(p.base, pt, tol))
    throw std::domain_error("locate: point outside the base triangle");

  const int d = p.d;
  const int n_total = p.triangle_count();
  const auto w = barycentric(p.base, pt);
  const double t = std::clamp(w[2], 0.0, 1.0);
  const double ab = w[0] + w[1];
  const double u = ab > 1e-14 ? std::clamp(w[1] / ab, 0.0, 1.0) : 0.5;

  const int js = static_cast<int>(std::floor(t * d)) + 1;
  const int is = static_cast<int>(std::floor(u * d)) + 1;
  std::vector<int> candidates;
  candidates.reserve(24);
  for (int j = std::max(1, js - 1); j <= std::min(d - 1, js + 1); ++j)
    for (int i = std::max(1, is - 1); i <= std::min(d, is + 1); ++i) {
      const int base_n = (j - 1) * 2 * d + 2 * (i - 1);
      candidates.push_back(base_n);
      candidates.push_back(base_n + 1);
    }
  if (js >= d - 2)
    for (int n = n_total - 3; n < n_total; ++n) candidates.push_back(n);
  std::sort(candidates.begin(), candidates.end());

  int hit = try_candidates(p, pt, tol, candidates);
  if (hit >= 0) return hit;
  return locate_scan(p, pt);
}

int locate_scan(const ColoredPartition& p, Point2 pt) {
  const double tol = p.locate_tolerance();
  for (int n = 0; n < p.triangle_count(); ++n)
    if (contains(p.subtriangle(n), pt, tol)) return n;
  throw std::domain_error("locate: point not contained in any subtriangle");
}

}  // namespace fractri
