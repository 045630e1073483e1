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

#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "manifront/complex.hpp"
#include "manifront/datasets.hpp"
#include "manifront/pipeline.hpp"
#include "manifront/types.hpp"

namespace manifront {

// Full-precision decimal formatting: 17 significant digits round-trip any
// double exactly, and a fixed format keeps serialized files byte-stable.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<double> parse_csv_row(const std::string& line, int lineno) {
  std::vector<double> row;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string field = line.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str())
      throw FormatError("line " + std::to_string(lineno) +
                        ": not a number: '" + field + "'");
    row.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return row;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << content;
}

}  // namespace detail

// ---- point cloud CSV: headerless, one point per row ----

inline std::string point_csv_to_string(const Matrix& points) {
  std::string out;
  for (int i = 0; i < points.cols(); ++i) {
    for (int r = 0; r < points.rows(); ++r) {
      if (r) out += ',';
      out += fmt_double(points(r, i));
    }
    out += '\n';
  }
  return out;
}

inline Matrix point_csv_from_string(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    rows.push_back(detail::parse_csv_row(line, lineno));
    if (rows.back().size() != rows.front().size())
      throw FormatError("line " + std::to_string(lineno) +
                        ": inconsistent column count");
  }
  if (rows.empty()) throw FormatError("empty point file");
  Matrix points(rows.front().size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t r = 0; r < rows[i].size(); ++r)
      points(r, i) = rows[i][r];
  return points;
}

inline void write_point_csv(const std::string& path, const Matrix& points) {
  detail::write_file(path, point_csv_to_string(points));
}

inline Matrix read_point_csv(const std::string& path) {
  return point_csv_from_string(detail::read_file(path));
}

// ---- embedding basis CSV: one basis vector per row ----

inline void write_basis_csv(const std::string& path,
                            const EmbeddingBasis& basis) {
  // one basis vector per row
  detail::write_file(path, point_csv_to_string(basis.basis));
}

inline EmbeddingBasis read_basis_csv(const std::string& path) {
  const Matrix parsed = point_csv_from_string(detail::read_file(path));
  if (parsed.cols() != 3)
    throw FormatError("basis file must contain exactly 3 rows");
  EmbeddingBasis basis;
  basis.basis = parsed;
  basis.ambient_dim = static_cast<int>(basis.basis.rows());
  const Matrix gram = basis.basis.transpose() * basis.basis;
  if ((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-8)
    throw FormatError("basis vectors are not orthonormal");
  return basis;
}

// ---- mesh text format ----
//
// A single structured-text document: version line, ambient dimension, the
// configuration echo, then vertices (id, source data index, coordinates) and
// triangles (three vertex ids). Edges are derivable and not stored.

struct MeshData {
  Complex complex;
  TriangulationConfig config;
  int ambient_dim = 0;
};

inline std::string mesh_to_string(const Complex& complex,
                                  const TriangulationConfig& config) {
  std::string out = "manifront-mesh 1\n";
  const int dim =
      complex.vertex_count() ? static_cast<int>(complex.vertex(0).coords.size())
                             : 0;
  out += "ambient_dim " + std::to_string(dim) + "\n";
  out += "config char_length " + fmt_double(config.char_length) + "\n";
  out += "config mu " + fmt_double(config.mu) + "\n";
  out += "config conflict_delta " + fmt_double(config.conflict_delta) + "\n";
  out += "config accept_tol " + fmt_double(config.accept_tol) + "\n";
  out += "config merge_tol " + fmt_double(config.merge_tol) + "\n";
  out += "config max_sew_length " + fmt_double(config.max_sew_length) + "\n";
  out += "config drop_tol " + fmt_double(config.drop_tol) + "\n";
  out += "config seed " + std::to_string(config.seed) + "\n";
  out += "config start_index " + std::to_string(config.start_index) + "\n";
  out += "config skip_sewing " + std::to_string(config.skip_sewing ? 1 : 0) +
         "\n";
  out += "config fill_holes " + std::to_string(config.fill_holes ? 1 : 0) +
         "\n";
  out += "vertices " + std::to_string(complex.vertex_count()) + "\n";
  for (int i = 0; i < complex.vertex_count(); ++i) {
    const auto& v = complex.vertex(i);
    out += "v " + std::to_string(i) + " " + std::to_string(v.source_index);
    for (int r = 0; r < v.coords.size(); ++r)
      out += " " + fmt_double(v.coords[r]);
    out += '\n';
  }
  out += "triangles " + std::to_string(complex.triangle_count()) + "\n";
  for (int i = 0; i < complex.triangle_count(); ++i) {
    const auto& t = complex.triangle(i);
    out += "t " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
           std::to_string(t[2]) + "\n";
  }
  return out;
}

inline MeshData mesh_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw FormatError(std::string("unexpected end of mesh file, expected ") +
                        what);
    return std::istringstream(line);
  };

  MeshData mesh;
  {
    auto ls = next_line("header");
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    if (magic != "manifront-mesh" || version != 1)
      throw FormatError("not a manifront mesh file");
  }
  {
    auto ls = next_line("ambient_dim");
    std::string key;
    ls >> key >> mesh.ambient_dim;
    if (key != "ambient_dim" || mesh.ambient_dim < 0)
      throw FormatError("bad ambient_dim line");
  }

  int vertex_count = -1;
  while (true) {
    auto ls = next_line("config or vertices");
    std::string key;
    ls >> key;
    if (key == "config") {
      std::string name;
      ls >> name;
      auto& c = mesh.config;
      if (name == "char_length") ls >> c.char_length;
      else if (name == "mu") ls >> c.mu;
      else if (name == "conflict_delta") ls >> c.conflict_delta;
      else if (name == "accept_tol") ls >> c.accept_tol;
      else if (name == "merge_tol") ls >> c.merge_tol;
      else if (name == "max_sew_length") ls >> c.max_sew_length;
      else if (name == "drop_tol") ls >> c.drop_tol;
      else if (name == "seed") ls >> c.seed;
      else if (name == "start_index") ls >> c.start_index;
      else if (name == "skip_sewing") { int b; ls >> b; c.skip_sewing = b; }
      else if (name == "fill_holes") { int b; ls >> b; c.fill_holes = b; }
      else throw FormatError("unknown config field: " + name);
      if (ls.fail()) throw FormatError("bad config value for " + name);
    } else if (key == "vertices") {
      ls >> vertex_count;
      if (ls.fail() || vertex_count < 0)
        throw FormatError("bad vertices line");
      break;
    } else {
      throw FormatError("unexpected line: " + line);
    }
  }

  for (int i = 0; i < vertex_count; ++i) {
    auto ls = next_line("vertex");
    std::string key;
    int id = -1;
    std::int64_t source = -1;
    ls >> key >> id >> source;
    if (key != "v" || id != i)
      throw FormatError("vertex lines must be dense and ordered");
    Vector coords(mesh.ambient_dim);
    for (int r = 0; r < mesh.ambient_dim; ++r) ls >> coords[r];
    if (ls.fail()) throw FormatError("bad vertex coordinates at id " +
                                     std::to_string(id));
    mesh.complex.add_vertex(coords, source);
  }

  int triangle_count = -1;
  {
    auto ls = next_line("triangles");
    std::string key;
    ls >> key >> triangle_count;
    if (key != "triangles" || ls.fail() || triangle_count < 0)
      throw FormatError("bad triangles line");
  }
  for (int i = 0; i < triangle_count; ++i) {
    auto ls = next_line("triangle");
    std::string key;
    int a = -1, b = -1, c = -1;
    ls >> key >> a >> b >> c;
    if (key != "t" || ls.fail()) throw FormatError("bad triangle line");
    try {
      mesh.complex.add_triangle(a, b, c);
    } catch (const std::exception& e) {
      throw FormatError(std::string("invalid triangle: ") + e.what());
    }
  }
  return mesh;
}

inline void write_mesh(const std::string& path, const Complex& complex,
                       const TriangulationConfig& config) {
  detail::write_file(path, mesh_to_string(complex, config));
}

inline MeshData read_mesh(const std::string& path) {
  return mesh_from_string(detail::read_file(path));
}

// ---- OBJ export (lossy, 3D only) ----
//
// Vertex positions come from undoing the orthonormal embedding when a basis
// is given, otherwise from the top three principal components of the vertex
// coordinates.

inline std::string mesh_to_obj(const Complex& complex,
                               const EmbeddingBasis* basis) {
  if (complex.vertex_count() == 0) throw EmptyComplex("no vertices to export");
  const int dim = static_cast<int>(complex.vertex(0).coords.size());
  Matrix verts(dim, complex.vertex_count());
  for (int i = 0; i < complex.vertex_count(); ++i)
    verts.col(i) = complex.vertex(i).coords;

  Matrix coords3;
  if (basis) {
    if (basis->ambient_dim != dim)
      throw DimensionMismatch("basis dimension does not match mesh");
    coords3 = basis->basis.transpose() * verts;
  } else if (dim <= 3) {
    coords3 = Matrix::Zero(3, verts.cols());
    coords3.topRows(dim) = verts;
  } else {
    const Vector mean = verts.rowwise().mean();
    const Matrix centered = verts.colwise() - mean;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(
        Matrix(centered * centered.transpose() / double(verts.cols())));
    coords3 = solver.eigenvectors().rightCols(3).transpose() * centered;
    coords3.colwise().reverseInPlace();  // leading component first
  }

  std::string out;
  for (int i = 0; i < coords3.cols(); ++i)
    out += "v " + fmt_double(coords3(0, i)) + " " + fmt_double(coords3(1, i)) +
           " " + fmt_double(coords3(2, i)) + "\n";
  for (int i = 0; i < complex.triangle_count(); ++i) {
    const auto& t = complex.triangle(i);
    out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) +
           " " + std::to_string(t[2] + 1) + "\n";
  }
  return out;
}

inline void write_obj(const std::string& path, const Complex& complex,
                      const EmbeddingBasis* basis) {
  detail::write_file(path, mesh_to_obj(complex, basis));
}

}  // namespace manifront
