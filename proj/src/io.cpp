#include "fractri/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fractri {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::string mode_name(ScalingMode mode) {
  switch (mode) {
    case ScalingMode::Centroid: return "centroid";
    case ScalingMode::LeastSquares: return "least-squares";
    case ScalingMode::Fixed: return "fixed";
  }
  return "centroid";
}

ScalingMode mode_from(const std::string& s) {
  if (s == "centroid") return ScalingMode::Centroid;
  if (s == "least-squares") return ScalingMode::LeastSquares;
  if (s == "fixed") return ScalingMode::Fixed;
  throw std::runtime_error("model file: unknown scaling mode '" + s + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_model(const BfifModel& m, const ModelSource& source,
                const std::string& path) {
  Json j;
  j["format"] = "fractri-model";
  j["version"] = 1;
  const Triangle2& base = m.partition.base;
  j["base"] = {{"a", {base.a().x, base.a().y}},
               {"b", {base.b().x, base.b().y}},
               {"c", {base.c().x, base.c().y}}};
  j["d"] = m.partition.d;
  j["source"] = source.is_function
                    ? Json{{"type", "function"}, {"name", source.function_name}}
                    : Json{{"type", "data"}};
  j["policy"] = {{"mode", mode_name(m.policy.mode)},
                 {"fixed_value", m.policy.fixed_value},
                 {"clamp_bound", m.policy.clamp_bound},
                 {"sample_depth", m.policy.sample_depth}};
  j["base_data"] = Json::array();
  for (const auto& bd : m.base_data)
    j["base_data"].push_back({bd.x, bd.y, bd.z});

  j["vertices"] = Json::array();
  for (int v = 0; v < m.partition.vertex_count(); ++v)
    j["vertices"].push_back({v, m.partition.vertices[v].x,
                             m.partition.vertices[v].y, m.partition.colors[v],
                             m.vertex_z[v]});
  j["subtriangles"] = Json::array();
  for (int n = 0; n < m.partition.triangle_count(); ++n)
    j["subtriangles"].push_back({n + 1, m.partition.tris[n][0],
                                 m.partition.tris[n][1], m.partition.tris[n][2]});
  j["maps"] = Json::array();
  for (const auto& c : m.maps)
    j["maps"].push_back({{"alpha1", c.alpha1},
                         {"alpha2", c.alpha2},
                         {"alpha3", c.alpha3},
                         {"alpha4", c.alpha4},
                         {"alpha5", c.alpha5},
                         {"alpha6", c.alpha6},
                         {"alpha7", c.alpha7},
                         {"beta1", c.beta1},
                         {"beta2", c.beta2},
                         {"beta3", c.beta3},
                         {"delta", c.delta}});
  j["diagnostics"] = {{"theta", m.diagnostics.theta},
                      {"contraction", m.diagnostics.contraction},
                      {"hyperbolic", m.diagnostics.hyperbolic}};

  auto out = open_out(path);
  out << j.dump(1) << "\n";
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  Json j;
  in >> j;
  if (j.value("format", "") != "fractri-model")
    throw std::runtime_error("not a fractri model file: " + path);

  const auto& jb = j.at("base");
  auto pt = [](const Json& arr) {
    return Point2{arr[0].get<double>(), arr[1].get<double>()};
  };
  const Triangle2 base(pt(jb.at("a")), pt(jb.at("b")), pt(jb.at("c")));
  const int d = j.at("d");

  // The partition is a pure function of (base, d); rebuilding it reproduces
  // the serialized vertices exactly. Cross-check a stable fingerprint.
  ColoredPartition part = partition_triangle(base, d);
  const auto& jverts = j.at("vertices");
  if (static_cast<int>(jverts.size()) != part.vertex_count())
    throw std::runtime_error("model file: vertex count mismatch");
  BfifModel model(std::move(part));
  model.vertex_z.resize(jverts.size());
  for (const auto& row : jverts) {
    const int idx = row.at(0);
    if (idx < 0 || idx >= static_cast<int>(jverts.size()))
      throw std::runtime_error("model file: bad vertex index");
    const double x = row.at(1), y = row.at(2);
    const int color = row.at(3);
    if (x != model.partition.vertices[idx].x ||
        y != model.partition.vertices[idx].y ||
        color != model.partition.colors[idx])
      throw std::runtime_error("model file: vertex table does not match (base, d)");
    model.vertex_z[idx] = row.at(4);
  }
  const auto& jtris = j.at("subtriangles");
  if (static_cast<int>(jtris.size()) != model.partition.triangle_count())
    throw std::runtime_error("model file: subtriangle count mismatch");
  for (const auto& row : jtris) {
    const int n = row.at(0).get<int>() - 1;
    const auto& t = model.partition.tris.at(n);
    if (row.at(1).get<int>() != t[0] || row.at(2).get<int>() != t[1] ||
        row.at(3).get<int>() != t[2])
      throw std::runtime_error("model file: subtriangle table does not match");
  }

  const auto& jp = j.at("policy");
  model.policy.mode = mode_from(jp.at("mode"));
  model.policy.fixed_value = jp.at("fixed_value");
  model.policy.clamp_bound = jp.at("clamp_bound");
  model.policy.sample_depth = jp.at("sample_depth");

  const auto& jbd = j.at("base_data");
  for (int k = 0; k < 3; ++k)
    model.base_data[k] = {jbd[k][0].get<double>(), jbd[k][1].get<double>(),
                          jbd[k][2].get<double>()};

  model.maps.reserve(j.at("maps").size());
  for (const auto& row : j.at("maps")) {
    AffineMapCoefficients c;
    c.alpha1 = row.at("alpha1");
    c.alpha2 = row.at("alpha2");
    c.alpha3 = row.at("alpha3");
    c.alpha4 = row.at("alpha4");
    c.alpha5 = row.at("alpha5");
    c.alpha6 = row.at("alpha6");
    c.alpha7 = row.at("alpha7");
    c.beta1 = row.at("beta1");
    c.beta2 = row.at("beta2");
    c.beta3 = row.at("beta3");
    c.delta = row.at("delta");
    model.maps.push_back(c);
  }
  if (model.maps.size() != static_cast<size_t>(model.partition.triangle_count()))
    throw std::runtime_error("model file: map count mismatch");

  model.diagnostics.theta = j.at("diagnostics").at("theta");
  model.diagnostics.contraction = j.at("diagnostics").at("contraction");
  model.diagnostics.hyperbolic = j.at("diagnostics").at("hyperbolic");
  model.base_plane =
      plane_through(model.base_data[0], model.base_data[1], model.base_data[2]);
  double max_q = 0.0;
  for (const auto& c : model.maps)
    for (int k = 0; k < 3; ++k)
      max_q = std::max(max_q,
                       std::fabs(c.apply_Q(model.partition.base.vertex(k))));
  model.z_bound = max_q / (1.0 - model.max_scaling());

  LoadedModel loaded{std::move(model), {}};
  const auto& js = j.at("source");
  if (js.at("type") == "function") {
    loaded.source.is_function = true;
    loaded.source.function_name = js.at("name");
  }
  return loaded;
}

void write_vertices_csv(const ColoredPartition& p, const std::string& path) {
  auto out = open_out(path);
  out << "index,x,y,color\n";
  for (int v = 0; v < p.vertex_count(); ++v)
    out << v << ',' << format_double(p.vertices[v].x) << ','
        << format_double(p.vertices[v].y) << ',' << p.colors[v] << '\n';
}

void write_triangles_csv(const ColoredPartition& p, const std::string& path) {
  auto out = open_out(path);
  out << "n,v1,v2,v3\n";
  for (int n = 0; n < p.triangle_count(); ++n)
    out << n + 1 << ',' << p.tris[n][0] << ',' << p.tris[n][1] << ','
        << p.tris[n][2] << '\n';
}

void write_cloud_csv(const PointCloud& cloud, const std::string& path) {
  auto out = open_out(path);
  out << "x,y,z\n";
  for (const auto& pt : cloud.points)
    out << format_double(pt[0]) << ',' << format_double(pt[1]) << ','
        << format_double(pt[2]) << '\n';
}

void write_cloud_ply(const PointCloud& cloud, const std::string& path) {
  auto out = open_out(path);
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\n"
         "end_header\n";
  for (const auto& pt : cloud.points)
    out << format_double(pt[0]) << ' ' << format_double(pt[1]) << ' '
        << format_double(pt[2]) << '\n';
}

void write_table_csv(const std::vector<TableRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "d,N,M,I,error\n";
  for (const auto& r : rows)
    out << r.d << ',' << r.subtriangles << ',' << format_double(r.M) << ','
        << format_double(r.reference) << ',' << format_double(r.error) << '\n';
}

std::string report_json(const IntegralReport& r) {
  Json j;
  j["d"] = r.d;
  j["N"] = r.subtriangles;
  j["A"] = r.A;
  j["B"] = r.B;
  j["M"] = r.M;
  j["A_signed"] = r.A_signed;
  if (r.M_signed) j["M_signed"] = *r.M_signed;
  if (r.reference) j["I"] = *r.reference;
  if (r.error) j["error"] = *r.error;
  if (r.reference && r.M_signed)
    j["error_signed"] = *r.M_signed - *r.reference;
  return j.dump(1);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

std::vector<double> read_vertex_data_csv(const std::string& path,
                                         const ColoredPartition& part) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty data file: " + path);
  const auto header = split_line(line);
  const bool full = header.size() == 5;
  if (!full && header.size() != 2)
    throw std::runtime_error(
        "data file: expected header index,x,y,color,z or index,z");

  const double tol = part.locate_tolerance();
  std::vector<double> z(part.vertex_count());
  std::vector<bool> seen(part.vertex_count(), false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("data file: ragged row '" + line + "'");
    const int idx = std::stoi(cells[0]);
    if (idx < 0 || idx >= part.vertex_count())
      throw std::runtime_error("data file: vertex index out of range");
    if (full) {
      const double x = std::stod(cells[1]);
      const double y = std::stod(cells[2]);
      if (std::fabs(x - part.vertices[idx].x) > tol ||
          std::fabs(y - part.vertices[idx].y) > tol)
        throw std::runtime_error(
            "data file: coordinates do not match the partition");
    }
    z[idx] = std::stod(cells.back());
    seen[idx] = true;
  }
  for (int v = 0; v < part.vertex_count(); ++v)
    if (!seen[v])
      throw std::runtime_error("data file: missing z for vertex " +
                               std::to_string(v));
  return z;
}

CentroidData read_centroids_csv(const std::string& path,
                                const ColoredPartition& part) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open centroid file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty centroid file: " + path);
  CentroidData data;
  data.sub_centroid_z.assign(part.triangle_count(), 0.0);
  std::vector<bool> seen(part.triangle_count() + 1, false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 2)
      throw std::runtime_error("centroid file: expected rows n,z");
    const int n = std::stoi(cells[0]);
    const double z = std::stod(cells[1]);
    if (n == 0) {
      data.base_centroid_z = z;
      seen[part.triangle_count()] = true;
    } else if (n >= 1 && n <= part.triangle_count()) {
      data.sub_centroid_z[n - 1] = z;
      seen[n - 1] = true;
    } else {
      throw std::runtime_error("centroid file: subtriangle index out of range");
    }
  }
  for (int n = 0; n <= part.triangle_count(); ++n)
    if (!seen[n])
      throw std::runtime_error("centroid file: missing row for n=" +
                               std::to_string(n == part.triangle_count() ? 0 : n + 1));
  return data;
}

}  // namespace fractri
