// Copyright 2026 The Manifront Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifront/manifront.hpp"

namespace {

using nlohmann::json;

// exit codes: 0 ok, 1 usage, 2 input format, 3 algorithm failure
constexpr int kUsageError = 1;
constexpr int kFormatError = 2;
constexpr int kAlgorithmError = 3;

json report_to_json(const manifront::RunReport& report) {
  json stages = json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"stage", s.stage},
                      {"iterations", s.iterations},
                      {"accepted", s.accepted},
                      {"rejected_conflict", s.rejected_conflict},
                      {"rejected_minimizer_too_far",
                       s.rejected_minimizer_too_far},
                      {"rejected_empty_neighborhood",
                       s.rejected_empty_neighborhood},
                      {"rejected_empty_constraint_set",
                       s.rejected_empty_constraint_set},
                      {"wall_seconds", s.wall_seconds}});
  }
  const auto& t = report.topology;
  return {{"stages", stages},
          {"topology",
           {{"vertices", t.vertices},
            {"edges", t.edges},
            {"triangles", t.triangles},
            {"front_edges", t.front_edges},
            {"euler", t.euler}}}};
}

json topology_to_json(const manifront::TopologyCounts& t) {
  return {{"vertices", t.vertices},
          {"edges", t.edges},
          {"triangles", t.triangles},
          {"front_edges", t.front_edges},
          {"euler", t.euler}};
}

int run_generate(const std::string& manifold, int n, int ambient_dim,
                 double noise, std::uint64_t seed, const std::string& out,
                 const std::string& basis_out) {
  manifront::ManifoldSpec spec;
  if (manifold == "sphere") {
    spec = manifront::ManifoldSpec::sphere(4.0);
  } else if (manifold == "torus") {
    spec = manifront::ManifoldSpec::torus(4.0, 1.0);
  } else if (manifold == "swiss-roll") {
    spec = manifront::ManifoldSpec::swiss_roll(0.5, 6.0, 4.0 * M_PI);
  } else if (manifold == "creased-sheet") {
    spec = manifront::ManifoldSpec::creased_sheet(8.5, 11.0, 0.8);
  } else {
    std::cerr << "unknown manifold: " << manifold << "\n";
    return kUsageError;
  }

  manifront::Matrix pts = manifront::sample_manifold(spec, n, seed);
  if (noise > 0.0) pts = manifront::add_noise(pts, noise, seed + 1);
  const manifront::EmbeddingBasis basis =
      manifront::random_embedding_basis(ambient_dim, seed + 2);
  manifront::write_point_csv(out, manifront::embed(pts, basis));
  manifront::write_basis_csv(basis_out, basis);
  std::cout << "wrote " << n << " points in R^" << ambient_dim << " to " << out
            << "\n";
  return 0;
}

int run_triangulate(const std::string& in,
                    const manifront::TriangulationConfig& config,
                    const std::string& out, const std::string& report_path) {
  const manifront::PointCloud cloud(manifront::read_point_csv(in));
  const manifront::TriangulationResult result =
      manifront::triangulate(cloud, config);
  manifront::write_mesh(out, result.complex, config.resolved());
  manifront::detail::write_file(report_path,
                                report_to_json(result.report).dump(2) + "\n");
  const auto& t = result.report.topology;
  std::cout << "triangles " << t.triangles << " vertices " << t.vertices
            << " front_edges " << t.front_edges << "\n";
  return 0;
}

int run_evaluate(const std::string& mesh_path, const std::string& points_path,
                 const std::string& report_path) {
  const manifront::MeshData mesh = manifront::read_mesh(mesh_path);
  const manifront::PointCloud cloud(manifront::read_point_csv(points_path));
  if (cloud.dim() != mesh.ambient_dim)
    throw manifront::FormatError("mesh and points have different dimensions");
  const manifront::ErrorReport report =
      manifront::evaluate(cloud, mesh.complex);
  const json j = {{"max", report.max},
                  {"avg", report.avg},
                  {"rms", report.rms},
                  {"n_points", report.n_points},
                  {"topology", topology_to_json(report.topology)}};
  manifront::detail::write_file(report_path, j.dump(2) + "\n");
  std::printf("max %.6g avg %.6g rms %.6g over %lld points\n", report.max,
              report.avg, report.rms,
              static_cast<long long>(report.n_points));
  return 0;
}

int run_export(const std::string& mesh_path, const std::string& format,
               const std::string& basis_path, const std::string& out) {
  if (format != "obj") {
    std::cerr << "unsupported export format: " << format << "\n";
    return kUsageError;
  }
  const manifront::MeshData mesh = manifront::read_mesh(mesh_path);
  if (!basis_path.empty()) {
    const manifront::EmbeddingBasis basis =
        manifront::read_basis_csv(basis_path);
    manifront::write_obj(out, mesh.complex, &basis);
  } else {
    manifront::write_obj(out, mesh.complex, nullptr);
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point-cloud triangulation on embedded 2-manifolds"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand(
      "generate", "sample a benchmark manifold and embed it");
  std::string manifold;
  int gen_n = 10000;
  int ambient_dim = 50;
  double noise = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out, basis_out;
  generate->add_option("--manifold", manifold,
                       "sphere|torus|swiss-roll|creased-sheet")
      ->required();
  generate->add_option("--n", gen_n, "number of points");
  generate->add_option("--ambient-dim", ambient_dim, "embedding dimension");
  generate->add_option("--noise", noise, "noise scale (pre-embedding)");
  generate->add_option("--seed", gen_seed, "random seed");
  generate->add_option("--out", gen_out, "point CSV path")->required();
  generate->add_option("--basis-out", basis_out, "basis CSV path")->required();

  // triangulate
  auto* triangulate =
      app.add_subcommand("triangulate", "triangulate a point cloud");
  std::string tri_in, tri_out, tri_report;
  manifront::TriangulationConfig config;
  config.char_length = 0.0;
  triangulate->add_option("--in", tri_in, "point CSV path")->required();
  triangulate->add_option("--char-length", config.char_length,
                          "characteristic edge length")
      ->required();
  triangulate->add_option("--mu", config.mu, "metric regularization");
  triangulate->add_option("--conflict-delta", config.conflict_delta,
                          "conflict distance tolerance");
  triangulate->add_option("--accept-tol", config.accept_tol,
                          "max minimizer-to-data distance");
  triangulate->add_option("--merge-tol", config.merge_tol,
                          "second-candidate merge distance");
  triangulate->add_option("--max-sew-length", config.max_sew_length,
                          "max seam-sewing edge length");
  triangulate->add_option("--seed", config.seed, "random seed");
  triangulate->add_option("--start-index", config.start_index,
                          "data index of the first vertex");
  triangulate->add_flag("--skip-sewing", config.skip_sewing,
                        "stop after the advancing front stage");
  triangulate->add_flag("--fill-holes", config.fill_holes,
                        "close remaining holes ignoring conflicts");
  triangulate->add_option("--out", tri_out, "mesh output path")->required();
  triangulate->add_option("--report", tri_report, "run report JSON path")
      ->required();

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "distance errors of a mesh to points");
  std::string eval_mesh, eval_points, eval_report;
  evaluate->add_option("--mesh", eval_mesh, "mesh path")->required();
  evaluate->add_option("--points", eval_points, "point CSV path")->required();
  evaluate->add_option("--report", eval_report, "report JSON path")
      ->required();

  // export
  auto* exporter = app.add_subcommand("export", "export a mesh for viewers");
  std::string exp_mesh, exp_format = "obj", exp_basis, exp_out;
  exporter->add_option("--mesh", exp_mesh, "mesh path")->required();
  exporter->add_option("--format", exp_format, "output format (obj)");
  exporter->add_option("--basis", exp_basis,
                       "basis CSV for unembedding (else PCA projection)");
  exporter->add_option("--out", exp_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (generate->parsed())
      return run_generate(manifold, gen_n, ambient_dim, noise, gen_seed,
                          gen_out, basis_out);
    if (triangulate->parsed())
      return run_triangulate(tri_in, config, tri_out, tri_report);
    if (evaluate->parsed())
      return run_evaluate(eval_mesh, eval_points, eval_report);
    if (exporter->parsed())
      return run_export(exp_mesh, exp_format, exp_basis, exp_out);
  } catch (const manifront::FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kFormatError;
  } catch (const manifront::SeedFailure& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kAlgorithmError;
  } catch (const manifront::EmptyComplex& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kAlgorithmError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kFormatError;
  } catch (const std::exception& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kAlgorithmError;
  }
  return kUsageError;
}
