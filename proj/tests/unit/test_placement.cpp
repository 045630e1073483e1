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
#include "manifront/pipeline.hpp"
#include "manifront/placement.hpp"
#include "oracles.hpp"

using manifront::LocalMetric;
using manifront::Matrix;
using manifront::PlacementStatus;
using manifront::Vector;

namespace {

Vector v3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

// metric at a vertex from a ring of in-plane neighbors (planar data)
LocalMetric planar_metric(const Vector& vertex, double ring_radius,
                          double mu) {
  Matrix nbrs(3, 12);
  for (int i = 0; i < 12; ++i) {
    const double a = 2.0 * M_PI * i / 12;
    nbrs.col(i) =
        vertex + ring_radius * v3(std::cos(a), std::sin(a), 0.0);
  }
  return manifront::eigendecompose(
      manifront::build_direction_factor(vertex, nbrs), mu);
}

// quadratic surface z = -(m11 x^2 + m22 y^2) / (1 + m13 x + m23 y) style
// patch used for random solver instances
struct Patch {
  double m11, m22, m13, m23, m33;

  double height(double x, double y) const {
    const double b = 1.0 + m13 * x + m23 * y;
    const double c = m11 * x * x + m22 * y * y;
    return -2.0 * c / (b + std::sqrt(b * b - 4.0 * m33 * c));
  }
  Vector at(double x, double y) const { return v3(x, y, height(x, y)); }
};

LocalMetric patch_metric(const Patch& patch, const Vector& vertex,
                         double radius, double mu, manifront::Rng& rng) {
  Matrix nbrs(3, 80);
  int kept = 0;
  while (kept < 80) {
    const double x = vertex[0] + rng.uniform(-radius, radius);
    const double y = vertex[1] + rng.uniform(-radius, radius);
    const Vector p = patch.at(x, y);
    if ((p - vertex).norm() > radius) continue;
    nbrs.col(kept++) = p;
  }
  return manifront::eigendecompose(
      manifront::build_direction_factor(vertex, nbrs), mu);
}

}  // namespace

TEST_SUITE("placement") {

TEST_CASE("constraint radius formula") {
  CHECK(manifront::constraint_radius(0.5, 0.5) ==
        doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
  // equal edge and characteristic length: apex height of the equilateral
  // triangle with that side
  const double ell = 1.7;
  CHECK(manifront::constraint_radius(ell, ell) ==
        doctest::Approx(std::sqrt(3.0) / 2.0 * ell).epsilon(1e-12));
  CHECK(manifront::constraint_radius(0.1, 0.9) ==
        doctest::Approx(std::sqrt(3.0) / 2.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("planar symmetric case solves to the in-plane apex") {
  const double mu = 1e-3;
  const Vector v1 = v3(-0.5, 0, 0), v2 = v3(0.5, 0, 0);
  const LocalMetric q1 = planar_metric(v1, 0.9, mu);
  const LocalMetric q2 = planar_metric(v2, 0.9, mu);
  const double rc = manifront::constraint_radius(1.0, 1.0);
  const Vector v0 = v3(0.0, -0.7, 0.0);

  const auto problem =
      manifront::make_placement_problem(v1, v2, q1, q2, rc, v0);
  CHECK(problem.normal.dot(v3(0, 1, 0)) == doctest::Approx(1.0).epsilon(1e-9));

  const auto outcome = manifront::solve_placement(problem);
  REQUIRE(outcome.status == PlacementStatus::converged);
  const Vector expected = v3(0.0, rc, 0.0);
  CHECK((outcome.solution.minimizer - expected).norm() < 1e-5);
  CHECK(outcome.solution.sphere_residual <= 1e-8 * rc);
  CHECK(std::abs(outcome.solution.isosceles_residual) <=
        1e-8 * std::max(1.0, outcome.solution.objective));

  // brute-force scan over the feasible curve confirms global optimality
  const auto scan = oracle::placement_curve_scan(q1, v1, q2, v2, rc,
                                                 &problem.normal, 400, 400);
  CHECK(outcome.solution.objective <= scan.objective * 1.01);
}

TEST_CASE("seeding returns both apex points") {
  const double mu = 1e-3;
  const Vector v1 = v3(-0.5, 0, 0), v2 = v3(0.5, 0, 0);
  const LocalMetric q1 = planar_metric(v1, 0.9, mu);
  const LocalMetric q2 = planar_metric(v2, 0.9, mu);
  const double rc = manifront::constraint_radius(1.0, 1.0);

  const auto problem = manifront::make_placement_problem(v1, v2, q1, q2, rc,
                                                         std::nullopt);
  const auto pair = manifront::solve_placement_pair(problem);
  REQUIRE(pair.status == PlacementStatus::converged);

  const Vector apex_a = v3(0.0, rc, 0.0);
  const Vector apex_b = v3(0.0, -rc, 0.0);
  const double d1 = std::min((pair.first.minimizer - apex_a).norm(),
                             (pair.first.minimizer - apex_b).norm());
  const double d2 = std::min((pair.second.minimizer - apex_a).norm(),
                             (pair.second.minimizer - apex_b).norm());
  CHECK(d1 < 1e-5);
  CHECK(d2 < 1e-5);
  // the two solutions sit on opposite sides
  CHECK((pair.first.minimizer - pair.second.minimizer).norm() >
        1e-6 * rc);
  CHECK(pair.first.sphere_residual <= 1e-8 * rc);
  CHECK(pair.second.sphere_residual <= 1e-8 * rc);
}

TEST_CASE("solver meets the brute-force oracle on random quadric patches") {
  manifront::Rng rng(67);
  const double mu = 1e-3;
  int solved = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Patch patch{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4),
                rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                rng.uniform(-0.2, 0.2)};
    const double edge = 0.5;
    const Vector v1 = patch.at(-edge / 2, 0.0);
    const Vector v2 = patch.at(edge / 2, 0.0);
    const double edge_len = (v2 - v1).norm();
    const LocalMetric q1 = patch_metric(patch, v1, edge_len, mu, rng);
    const LocalMetric q2 = patch_metric(patch, v2, edge_len, mu, rng);
    const double rc = manifront::constraint_radius(edge_len, 0.5);
    const Vector v0 = patch.at(0.0, -0.45);

    const auto problem =
        manifront::make_placement_problem(v1, v2, q1, q2, rc, v0);
    const auto outcome = manifront::solve_placement(problem);
    if (outcome.status != PlacementStatus::converged) continue;
    ++solved;

    CHECK(outcome.solution.sphere_residual <= 1e-8 * rc);
    CHECK(std::abs(outcome.solution.isosceles_residual) <=
          1e-8 * std::max(1.0, outcome.solution.objective));
    CHECK(problem.normal.dot(outcome.solution.minimizer -
                             problem.midpoint()) >= -1e-10);

    const auto scan = oracle::placement_curve_scan(q1, v1, q2, v2, rc,
                                                   &problem.normal, 500, 500);
    if (scan.feasible_points == 0) continue;
    CHECK(outcome.solution.objective <= scan.objective * 1.01 + 1e-12);
    CHECK(outcome.solution.objective >= scan.objective * 0.99 - 1e-12);
  }
  CHECK(solved >= 95);
}

TEST_CASE("appending an orthogonal component inflates both forms equally") {
  manifront::Rng rng(71);
  const int dim = 20;
  for (int rep = 0; rep < 30; ++rep) {
    const Vector v1 = rng.normal_vector(dim);
    const Vector v2 = rng.normal_vector(dim);
    Matrix nb1(dim, 8), nb2(dim, 8);
    for (int i = 0; i < 8; ++i) {
      nb1.col(i) = v1 + rng.normal_vector(dim);
      nb2.col(i) = v2 + rng.normal_vector(dim);
    }
    const double mu = 1e-3;
    const auto q1 = manifront::eigendecompose(
        manifront::build_direction_factor(v1, nb1), mu);
    const auto q2 = manifront::eigendecompose(
        manifront::build_direction_factor(v2, nb2), mu);

    const Vector v = 0.5 * (v1 + v2) + rng.normal_vector(dim) * 0.3;

    // component exactly orthogonal to both eigvec spans and displacements
    Matrix span(dim, q1.rank() + q2.rank() + 2);
    span << q1.eigvecs, q2.eigvecs, (v - v1), (v - v2);
    const Matrix q_thin =
        Eigen::HouseholderQR<Matrix>(span).householderQ() *
        Matrix::Identity(dim, span.cols());
    Vector w = rng.normal_vector(dim);
    w -= q_thin * (q_thin.transpose() * w);
    if (w.norm() < 1e-8) continue;

    const double f1 = manifront::q_form(q1, v - v1);
    const double f2 = manifront::q_form(q2, v - v2);
    const Vector vw = v + w;
    const double g1 = manifront::q_form(q1, vw - v1);
    const double g2 = manifront::q_form(q2, vw - v2);
    const double bump = w.squaredNorm() / mu;
    CHECK(g1 - f1 == doctest::Approx(bump).epsilon(1e-6));
    CHECK(g2 - f2 == doctest::Approx(bump).epsilon(1e-6));
    // the isosceles residual is untouched
    CHECK(g1 - g2 == doctest::Approx(f1 - f2).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("swapping the edge vertices mirrors the problem") {
  manifront::Rng rng(73);
  const double mu = 1e-3;
  for (int rep = 0; rep < 20; ++rep) {
    Patch patch{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), 0.0};
    const Vector v1 = patch.at(-0.25, 0.0);
    const Vector v2 = patch.at(0.25, 0.0);
    const double edge_len = (v2 - v1).norm();
    const LocalMetric q1 = patch_metric(patch, v1, edge_len, mu, rng);
    const LocalMetric q2 = patch_metric(patch, v2, edge_len, mu, rng);
    const double rc = manifront::constraint_radius(edge_len, 0.5);
    const Vector v0 = patch.at(0.0, -0.4);

    const auto fwd = manifront::solve_placement(
        manifront::make_placement_problem(v1, v2, q1, q2, rc, v0));
    const auto rev = manifront::solve_placement(
        manifront::make_placement_problem(v2, v1, q2, q1, rc, v0));
    if (fwd.status != PlacementStatus::converged ||
        rev.status != PlacementStatus::converged)
      continue;
    // with the isosceles constraint active the two objectives agree
    CHECK(fwd.solution.objective ==
          doctest::Approx(rev.solution.objective).epsilon(1e-6));
  }
}

TEST_CASE("placement on the sphere dataset stays near the sphere") {
  manifront::Rng rng(79);
  const auto spec = manifront::ManifoldSpec::sphere(4.0);
  const Matrix pts = manifront::sample_manifold(spec, 10000, 5);
  const manifront::PointCloud cloud(pts);

  auto config = manifront::TriangulationConfig::with_char_length(0.5);
  config.seed = 5;
  config.max_triangles = 40;
  manifront::PipelineState state;
  manifront::Complex complex = manifront::seed_complex(cloud, config, &state);
  manifront::advancing_front(cloud, complex, config, state);

  int checked = 0;
  for (const auto& edge : complex.front_edges()) {
    if (checked >= 50) break;
    const Vector& v1 = complex.vertex(edge.first).coords;
    const Vector& v2 = complex.vertex(edge.second).coords;
    const double edge_len = (v2 - v1).norm();
    const Vector v0 = complex.vertex(complex.third_vertex(edge)).coords;
    try {
      const auto q1 = manifront::detail::metric_at(cloud, v1, edge_len, config);
      const auto q2 = manifront::detail::metric_at(cloud, v2, edge_len, config);
      const auto outcome =
          manifront::solve_placement(manifront::make_placement_problem(
              v1, v2, q1, q2,
              manifront::constraint_radius(edge_len, config.char_length), v0));
      if (outcome.status != PlacementStatus::converged) continue;
      ++checked;
      CHECK(std::abs(outcome.solution.minimizer.norm() - 4.0) <= 0.1);
    } catch (const manifront::EmptyNeighborhood&) {
      continue;
    }
  }
  CHECK(checked >= 30);
}

TEST_CASE("candidate vertices: new data point, reuse, and merge ordering") {
  using manifront::Complex;

  // build a small complex in the plane
  Complex complex;
  Matrix pts(3, 8);
  pts.col(0) = v3(0, 0, 0);      // vertex 0
  pts.col(1) = v3(1, 0, 0);      // vertex 1
  pts.col(2) = v3(0.5, -1, 0);   // vertex 2 (v0 of the active edge)
  pts.col(3) = v3(1.6, 0.9, 0);  // vertex 3: far vertex of adjacent front edge
  pts.col(4) = v3(0.5, 0.9, 0);  // free data point near the apex
  pts.col(5) = v3(3, 3, 0);
  pts.col(6) = v3(-3, 3, 0);
  pts.col(7) = v3(3, -3, 0);
  const manifront::PointCloud cloud(pts);
  complex.add_vertex(pts.col(0), 0);
  complex.add_vertex(pts.col(1), 1);
  complex.add_vertex(pts.col(2), 2);
  complex.add_vertex(pts.col(3), 3);
  complex.add_triangle(0, 1, 2);
  complex.add_triangle(1, 3, 2);  // shares vertex 1 -> (1,3) is adjacent front

  manifront::PlacementSolution sol;
  sol.minimizer = v3(0.5, 1.0, 0.0);

  SUBCASE("nearest free data point becomes a new-vertex candidate") {
    const auto result = manifront::candidate_vertices(
        sol, cloud, complex, {0, 1}, 0.5, 0.25);
    REQUIRE(result.status == manifront::CandidateStatus::ok);
    REQUIRE(result.candidates.size() == 1);
    CHECK(!result.candidates[0].existing_id.has_value());
    CHECK(result.candidates[0].data_index == 4);
  }

  SUBCASE("merge candidate is offered first when within tolerance") {
    // tolerance large enough to reach vertex 3 at distance ~1.1
    const auto result = manifront::candidate_vertices(
        sol, cloud, complex, {0, 1}, 0.5, 1.2);
    REQUIRE(result.status == manifront::CandidateStatus::ok);
    REQUIRE(result.candidates.size() == 2);
    REQUIRE(result.candidates[0].existing_id.has_value());
    CHECK(*result.candidates[0].existing_id == 3);
    CHECK(result.candidates[1].data_index == 4);
  }

  SUBCASE("minimizer too far from the data") {
    manifront::PlacementSolution far;
    far.minimizer = v3(0.5, 10.0, 0.0);
    const auto result = manifront::candidate_vertices(
        far, cloud, complex, {0, 1}, 0.5, 0.25);
    CHECK(result.status == manifront::CandidateStatus::minimizer_too_far);
  }

  SUBCASE("nearest data point already backing a vertex is reused") {
    manifront::PlacementSolution at_vertex;
    at_vertex.minimizer = v3(1.55, 0.85, 0.0);  // nearest: data point 3
    const auto result = manifront::candidate_vertices(
        at_vertex, cloud, complex, {0, 1}, 0.5, 0.25);
    REQUIRE(result.status == manifront::CandidateStatus::ok);
    REQUIRE(!result.candidates.empty());
    REQUIRE(result.candidates.back().existing_id.has_value());
    CHECK(*result.candidates.back().existing_id == 3);
  }
}

}  // TEST_SUITE
