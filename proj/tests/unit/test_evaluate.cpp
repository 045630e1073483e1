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

#include <doctest.h>

#include <cmath>

#include "manifront/datasets.hpp"
#include "manifront/evaluate.hpp"
#include "oracles.hpp"

using manifront::Complex;
using manifront::Matrix;
using manifront::Vector;

namespace {

Vector v3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

Complex two_triangle_complex() {
  Complex c;
  c.add_vertex(v3(0, 0, 0), 0);
  c.add_vertex(v3(1, 0, 0), 1);
  c.add_vertex(v3(0, 1, 0), 2);
  c.add_vertex(v3(1, 1, 0), 3);
  c.add_triangle(0, 1, 2);
  c.add_triangle(1, 2, 3);
  return c;
}

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("distance to a triangle vertex is zero") {
  const Complex c = two_triangle_complex();
  CHECK(manifront::point_to_mesh_distance(v3(0, 0, 0), c) ==
        doctest::Approx(0.0));
  CHECK(manifront::point_to_mesh_distance(v3(1, 1, 0), c) ==
        doctest::Approx(0.0));
}

TEST_CASE("height above a centroid along the normal") {
  const Complex c = two_triangle_complex();
  const Vector centroid = v3(1.0 / 3, 1.0 / 3, 0);
  const double h = 0.42;
  CHECK(manifront::point_to_mesh_distance(
            Vector(centroid + h * v3(0, 0, 1)), c) ==
        doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("empty complex throws") {
  Complex empty;
  CHECK_THROWS_AS(manifront::point_to_mesh_distance(v3(0, 0, 0), empty),
                  manifront::EmptyComplex);
}

TEST_CASE("distance matches a barycentric sampling oracle") {
  manifront::Rng rng(89);
  const Complex c = two_triangle_complex();
  std::vector<manifront::EmbeddedTriangle> tris;
  for (int i = 0; i < c.triangle_count(); ++i) {
    const auto& t = c.triangle(i);
    tris.push_back(manifront::make_embedded_triangle(
        c.vertex(t[0]).coords, c.vertex(t[1]).coords, c.vertex(t[2]).coords));
  }
  for (int rep = 0; rep < 60; ++rep) {
    const Vector p = rng.normal_vector(3) * 1.5;
    const double ours = manifront::point_to_mesh_distance(p, c);
    double sampled = std::numeric_limits<double>::infinity();
    for (const auto& t : tris) {
      const Matrix samples = oracle::triangle_samples(t, 4000, rng);
      for (int i = 0; i < samples.cols(); ++i)
        sampled = std::min(sampled, (samples.col(i) - p).norm());
    }
    CHECK(ours <= sampled + 1e-12);
    CHECK(sampled - ours <= 1e-1);  // sampling resolution
    // cross-check with the independent projection-based formula
    double ref = std::numeric_limits<double>::infinity();
    for (const auto& t : tris) ref = std::min(ref, oracle::point_triangle(p, t));
    CHECK(ours == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("aggregate report over a covered cloud is all zeros") {
  const Complex c = two_triangle_complex();
  Matrix pts(3, 4);
  for (int i = 0; i < 4; ++i) pts.col(i) = c.vertex(i).coords;
  const manifront::PointCloud cloud(pts);
  const auto report = manifront::evaluate(cloud, c);
  CHECK(report.max == 0.0);
  CHECK(report.avg == 0.0);
  CHECK(report.rms == 0.0);
  CHECK(report.n_points == 4);
  CHECK(report.topology.triangles == 2);
}

TEST_CASE("aggregates satisfy their defining identities") {
  manifront::Rng rng(97);
  const Complex c = two_triangle_complex();
  Matrix pts(3, 200);
  for (int i = 0; i < 200; ++i) pts.col(i) = rng.normal_vector(3);
  const manifront::PointCloud cloud(pts);
  const auto report = manifront::evaluate(cloud, c);

  double mx = 0.0, sum = 0.0, sum_sq = 0.0;
  for (const double d : report.per_point) {
    mx = std::max(mx, d);
    sum += d;
    sum_sq += d * d;
  }
  CHECK(report.max == doctest::Approx(mx));
  CHECK(report.avg == doctest::Approx(sum / 200));
  CHECK(report.rms == doctest::Approx(std::sqrt(sum_sq / 200)));
  CHECK(report.max >= report.rms);
  CHECK(report.max >= report.avg);
}

TEST_CASE("evaluation is invariant under orthonormal re-embedding") {
  manifront::Rng rng(101);
  // a small planar mesh and cloud in R^3, then the same data pushed into R^50
  const Complex c3 = two_triangle_complex();
  Matrix pts(3, 50);
  for (int i = 0; i < 50; ++i) pts.col(i) = rng.normal_vector(3);

  const auto basis = manifront::random_embedding_basis(50, 13);
  Complex c50;
  for (int i = 0; i < c3.vertex_count(); ++i)
    c50.add_vertex(basis.basis * c3.vertex(i).coords,
                   c3.vertex(i).source_index);
  for (int i = 0; i < c3.triangle_count(); ++i) {
    const auto& t = c3.triangle(i);
    c50.add_triangle(t[0], t[1], t[2]);
  }

  const auto r3 = manifront::evaluate(manifront::PointCloud(pts), c3);
  const auto r50 = manifront::evaluate(
      manifront::PointCloud(manifront::embed(pts, basis)), c50);
  CHECK(std::abs(r3.max - r50.max) < 1e-10);
  CHECK(std::abs(r3.avg - r50.avg) < 1e-10);
  CHECK(std::abs(r3.rms - r50.rms) < 1e-10);
}

}  // TEST_SUITE
