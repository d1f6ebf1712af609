// Command-line surface: partition export, model build/persist, integration
// reports, convergence tables, and attractor point clouds.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractri/bfif.hpp"
#include "fractri/corpus.hpp"
#include "fractri/io.hpp"
#include "fractri/quadrature.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

fractri::Triangle2 parse_triangle(const std::vector<double>& coords) {
  if (coords.size() != 6)
    throw std::invalid_argument("--tri needs 6 comma-separated coordinates");
  return fractri::Triangle2({coords[0], coords[1]}, {coords[2], coords[3]},
                            {coords[4], coords[5]});
}

void warn_if_off_family(int d) {
  if (d >= 4 && d % 3 != 1)
    std::cerr << "warning: d=" << d
              << " is not of the form 3n+1; the partition graph may admit no "
                 "rainbow 3-coloring\n";
}

fractri::ScalingPolicy make_policy(const std::string& alpha_mode,
                                   double alpha_value, int dprime) {
  fractri::ScalingPolicy policy;
  if (alpha_mode == "centroid") {
    policy.mode = fractri::ScalingMode::Centroid;
  } else if (alpha_mode == "least-squares") {
    policy.mode = fractri::ScalingMode::LeastSquares;
  } else if (alpha_mode == "fixed") {
    policy.mode = fractri::ScalingMode::Fixed;
    policy.fixed_value = alpha_value;
  } else {
    throw std::invalid_argument("--alpha must be centroid|least-squares|fixed");
  }
  policy.sample_depth = dprime;
  return policy;
}

std::string sci5(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4e", v);
  return buf;
}

double reference_for(const fractri::ModelSource& source,
                     const fractri::BfifModel& model) {
  if (!source.is_function)
    throw std::domain_error(
        "no reference integral available for data-built models");
  const fractri::TestFunction tf = fractri::builtin(source.function_name);
  const fractri::Triangle2& base = model.partition.base;
  const bool canonical =
      tf.triangle.a().x == base.a().x && tf.triangle.a().y == base.a().y &&
      tf.triangle.b().x == base.b().x && tf.triangle.b().y == base.b().y &&
      tf.triangle.c().x == base.c().x && tf.triangle.c().y == base.c().y;
  if (canonical && tf.exact_integral) return *tf.exact_integral;
  return fractri::reference_integral(tf.fn, base, 64);
}

int cmd_partition(const std::vector<double>& tri, int d,
                  const std::string& out_dir) {
  warn_if_off_family(d);
  const auto part = fractri::partition_triangle(parse_triangle(tri), d);
  std::filesystem::create_directories(out_dir);
  fractri::write_vertices_csv(part, out_dir + "/vertices.csv");
  fractri::write_triangles_csv(part, out_dir + "/triangles.csv");
  std::cout << "wrote " << part.vertex_count() << " vertices and "
            << part.triangle_count() << " subtriangles to " << out_dir << "\n";
  return 0;
}

int cmd_build(const std::string& function, const std::string& data_file,
              const std::string& centroid_file, std::vector<double> tri,
              int d, const std::string& alpha_mode, double alpha_value,
              int dprime, const std::string& out) {
  warn_if_off_family(d);
  const auto policy = make_policy(alpha_mode, alpha_value, dprime);

  fractri::ModelSource source;
  std::optional<fractri::BfifModel> model;
  if (!function.empty()) {
    const fractri::TestFunction tf = fractri::builtin(function);
    const fractri::Triangle2 base =
        tri.empty() ? tf.triangle : parse_triangle(tri);
    model = fractri::build_model(base, d, tf.fn, policy);
    source.is_function = true;
    source.function_name = function;
  } else if (!data_file.empty()) {
    if (tri.empty())
      throw std::invalid_argument("--data mode requires --tri");
    const auto part = fractri::partition_triangle(parse_triangle(tri), d);
    auto vertex_z = fractri::read_vertex_data_csv(data_file, part);
    std::optional<fractri::CentroidData> centroids;
    if (!centroid_file.empty())
      centroids = fractri::read_centroids_csv(centroid_file, part);
    model = fractri::build_model_from_data(part, std::move(vertex_z),
                                           centroids, policy);
  } else {
    throw std::invalid_argument("need --function or --data");
  }

  fractri::save_model(*model, source, out);
  std::cout << "wrote model with " << model->subtriangle_count()
            << " maps to " << out << " (theta=" << model->diagnostics.theta
            << ", contraction=" << model->diagnostics.contraction << ")\n";
  return 0;
}

int cmd_integrate(const std::string& model_file, bool with_reference) {
  auto loaded = fractri::load_model(model_file);
  fractri::IntegralReport report = fractri::integrate(loaded.model);
  if (with_reference) {
    const double ref = reference_for(loaded.source, loaded.model);
    report.reference = ref;
    report.error = report.M - ref;
  }
  std::cout << fractri::report_json(report) << "\n";
  return 0;
}

int cmd_table(const std::string& function, const std::vector<int>& d_list,
              const std::string& alpha_mode, double alpha_value, int dprime,
              const std::string& out) {
  const auto policy = make_policy(alpha_mode, alpha_value, dprime);
  const fractri::TestFunction tf = fractri::builtin(function);
  const double ref = tf.exact_integral
                         ? *tf.exact_integral
                         : fractri::reference_integral(tf.fn, tf.triangle, 64);

  // The table mirrors the signed-Jacobian assembly; the surface integral is
  // available from the integrate subcommand as M.
  std::vector<fractri::TableRow> rows;
  std::cout << "d,N,M,I,error\n";
  for (int d : d_list) {
    warn_if_off_family(d);
    const auto model = fractri::build_model(tf.triangle, d, tf.fn, policy);
    const auto report = fractri::integrate(model);
    const double m_table = report.M_signed.value_or(report.M);
    fractri::TableRow row{d, report.subtriangles, m_table, ref, m_table - ref};
    rows.push_back(row);
    std::cout << d << ',' << row.subtriangles << ',' << sci5(row.M) << ','
              << sci5(row.reference) << ',' << sci5(row.error) << "\n";
  }
  if (!out.empty()) fractri::write_table_csv(rows, out);
  return 0;
}

int cmd_render(const std::string& model_file, const std::string& method,
               std::int64_t points, std::uint64_t seed,
               const std::string& out) {
  auto loaded = fractri::load_model(model_file);
  fractri::RenderMethod rm;
  if (method == "chaos") {
    rm = fractri::RenderMethod::Chaos;
  } else if (method == "iterate") {
    rm = fractri::RenderMethod::Deterministic;
  } else {
    throw std::invalid_argument("--method must be chaos|iterate");
  }
  const auto cloud = fractri::render_attractor(loaded.model, points, rm, seed);
  if (out.size() >= 4 && out.substr(out.size() - 4) == ".ply")
    fractri::write_cloud_ply(cloud, out);
  else
    fractri::write_cloud_csv(cloud, out);
  std::cout << "wrote " << cloud.points.size() << " points to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal surface interpolation over triangular domains"};
  app.require_subcommand(1);

  // partition
  auto* sp = app.add_subcommand("partition", "export a colored partition");
  std::vector<double> p_tri;
  int p_d = 0;
  std::string p_out = ".";
  sp->add_option("--tri", p_tri, "x1,y1,x2,y2,x3,y3 (apex last)")
      ->delimiter(',')->required();
  sp->add_option("--d", p_d, "subdivision count (>= 4)")->required();
  sp->add_option("--out", p_out, "output directory");

  // build
  auto* sb = app.add_subcommand("build", "build and persist a model");
  std::string b_function, b_data, b_centroids, b_alpha = "centroid";
  std::vector<double> b_tri;
  int b_d = 0, b_dprime = 4;
  double b_alpha_value = 0.0;
  std::string b_out = "model.json";
  sb->add_option("--function", b_function,
                 "matyas|three-hump-camel|plane:p,q,r|constant:c");
  sb->add_option("--data", b_data, "vertex data CSV (index,x,y,color,z or index,z)");
  sb->add_option("--centroids", b_centroids, "centroid data CSV (n,z; n=0 is the base)");
  sb->add_option("--tri", b_tri, "x1,y1,x2,y2,x3,y3 (apex last)")->delimiter(',');
  sb->add_option("--d", b_d, "subdivision count (>= 4)")->required();
  sb->add_option("--alpha", b_alpha, "centroid|least-squares|fixed");
  sb->add_option("--alpha-value", b_alpha_value, "value for --alpha fixed");
  sb->add_option("--dprime", b_dprime, "least-squares sampling depth");
  sb->add_option("--out", b_out, "model file");

  // integrate
  auto* si = app.add_subcommand("integrate", "closed-form double integral");
  std::string i_model;
  bool i_reference = false;
  si->add_option("--model", i_model, "model file")->required();
  si->add_flag("--reference", i_reference, "include I and M-I");

  // table
  auto* st = app.add_subcommand("table", "convergence table over d values");
  std::string t_function, t_alpha = "centroid", t_out;
  std::vector<int> t_dlist;
  double t_alpha_value = 0.0;
  int t_dprime = 4;
  st->add_option("--function", t_function, "builtin function name")->required();
  st->add_option("--d-list", t_dlist, "subdivision counts")
      ->delimiter(',')->required();
  st->add_option("--alpha", t_alpha, "centroid|least-squares|fixed");
  st->add_option("--alpha-value", t_alpha_value, "value for --alpha fixed");
  st->add_option("--dprime", t_dprime, "least-squares sampling depth");
  st->add_option("--out", t_out, "table CSV file");

  // render
  auto* sr = app.add_subcommand("render", "attractor point cloud");
  std::string r_model, r_method = "chaos", r_out = "cloud.csv";
  std::int64_t r_points = 100000;
  std::uint64_t r_seed = 42;
  sr->add_option("--model", r_model, "model file")->required();
  sr->add_option("--method", r_method, "chaos|iterate");
  sr->add_option("--points", r_points, "number of points");
  sr->add_option("--seed", r_seed, "random seed (chaos method)");
  sr->add_option("--out", r_out, "cloud file (.csv or .ply)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (sp->parsed()) return cmd_partition(p_tri, p_d, p_out);
    if (sb->parsed())
      return cmd_build(b_function, b_data, b_centroids, b_tri, b_d, b_alpha,
                       b_alpha_value, b_dprime, b_out);
    if (si->parsed()) return cmd_integrate(i_model, i_reference);
    if (st->parsed())
      return cmd_table(t_function, t_dlist, t_alpha, t_alpha_value, t_dprime,
                       t_out);
    if (sr->parsed())
      return cmd_render(r_model, r_method, r_points, r_seed, r_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
