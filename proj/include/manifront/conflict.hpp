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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "manifront/complex.hpp"
#include "manifront/types.hpp"

namespace manifront {

using Tri2 = Eigen::Matrix<double, 2, 3>;

// Triangle with vertices in ambient space plus a bounding sphere for cheap
// rejection during complex-wide sweeps.
struct EmbeddedTriangle {
  Matrix vertices;  // dim x 3
  Vector bounding_center;
  double bounding_radius = 0.0;
};

inline EmbeddedTriangle make_embedded_triangle(const Vector& a,
                                               const Vector& b,
                                               const Vector& c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw DimensionMismatch("triangle vertices of mixed dimension");
  EmbeddedTriangle t;
  t.vertices.resize(a.size(), 3);
  t.vertices.col(0) = a;
  t.vertices.col(1) = b;
  t.vertices.col(2) = c;
  t.bounding_center = (a + b + c) / 3.0;
  t.bounding_radius =
      std::sqrt((t.vertices.colwise() - t.bounding_center)
                    .colwise()
                    .squaredNorm()
                    .maxCoeff());
  return t;
}

namespace detail {

inline double triangle_diameter(const EmbeddedTriangle& t) {
  const double d01 = (t.vertices.col(0) - t.vertices.col(1)).norm();
  const double d02 = (t.vertices.col(0) - t.vertices.col(2)).norm();
  const double d12 = (t.vertices.col(1) - t.vertices.col(2)).norm();
  return std::max({d01, d02, d12});
}

// Planar area from N-dimensional edge vectors (Gram determinant).
inline double embedded_area(const EmbeddedTriangle& t) {
  const Vector e1 = t.vertices.col(1) - t.vertices.col(0);
  const Vector e2 = t.vertices.col(2) - t.vertices.col(0);
  const double g = e1.squaredNorm() * e2.squaredNorm() -
                   e1.dot(e2) * e1.dot(e2);
  return 0.5 * std::sqrt(std::max(0.0, g));
}

inline double tri2_signed_area(const Tri2& t) {
  const Eigen::Vector2d e1 = t.col(1) - t.col(0);
  const Eigen::Vector2d e2 = t.col(2) - t.col(0);
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

// Separating-axis margin for the open interiors of two 2D triangles: the
// minimum over all edge-normal axes of the projected interval overlap, with
// axes normalized so the margin is a geometric length. Interiors intersect
// exactly when the margin is positive; triangles sharing an edge give a
// margin of zero.
inline double interior_overlap_margin(const Tri2& a, const Tri2& b) {
  double margin = std::numeric_limits<double>::infinity();
  for (const Tri2* tri : {&a, &b}) {
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d p = tri->col(e);
      const Eigen::Vector2d q = tri->col((e + 1) % 3);
      Eigen::Vector2d axis(-(q.y() - p.y()), q.x() - p.x());
      const double len = axis.norm();
      if (len == 0.0) continue;
      axis /= len;
      double amin = std::numeric_limits<double>::infinity(), amax = -amin;
      double bmin = amin, bmax = -amin;
      for (int i = 0; i < 3; ++i) {
        const double va = axis.dot(a.col(i));
        const double vb = axis.dot(b.col(i));
        amin = std::min(amin, va);
        amax = std::max(amax, va);
        bmin = std::min(bmin, vb);
        bmax = std::max(bmax, vb);
      }
      margin = std::min(margin, std::min(amax, bmax) - std::max(amin, bmin));
    }
  }
  return margin;
}

// Faces of the barycentric simplex {u >= 0, u1 + u2 <= 1}: the three
// vertices, three edges, and the interior.
struct SimplexFace {
  Eigen::Vector2d base;
  Eigen::Matrix<double, 2, 2> dirs;  // only the first `dim` columns are used
  int dim;
};

inline const std::array<SimplexFace, 7>& simplex_faces() {
  static const std::array<SimplexFace, 7> faces = [] {
    std::array<SimplexFace, 7> f{};
    auto vec = [](double x, double y) { return Eigen::Vector2d(x, y); };
    f[0] = {vec(0, 0), Eigen::Matrix2d::Zero(), 0};
    f[1] = {vec(1, 0), Eigen::Matrix2d::Zero(), 0};
    f[2] = {vec(0, 1), Eigen::Matrix2d::Zero(), 0};
    Eigen::Matrix2d d;
    d.col(0) = vec(1, 0);
    f[3] = {vec(0, 0), d, 1};
    d.col(0) = vec(0, 1);
    f[4] = {vec(0, 0), d, 1};
    d.col(0) = vec(-1, 1);
    f[5] = {vec(1, 0), d, 1};
    d.col(0) = vec(1, 0);
    d.col(1) = vec(0, 1);
    f[6] = {vec(0, 0), d, 2};
    return f;
  }();
  return faces;
}

inline Eigen::Vector2d clamp_to_simplex(Eigen::Vector2d u) {
  u.x() = std::clamp(u.x(), 0.0, 1.0);
  u.y() = std::clamp(u.y(), 0.0, 1.0 - u.x());
  return u;
}

inline bool in_simplex(const Eigen::Vector2d& u, double tol) {
  return u.x() >= -tol && u.y() >= -tol && u.x() + u.y() <= 1.0 + tol;
}

}  // namespace detail

// Orthogonal projection of both triangles into the plane of the reference.
// The reference is represented exactly (its in-plane edge lengths are
// preserved); the other triangle loses its normal component.
inline std::pair<Tri2, Tri2> project_to_plane(const EmbeddedTriangle& ref,
                                              const EmbeddedTriangle& other) {
  const double diam = detail::triangle_diameter(ref);
  if (diam == 0.0 || detail::embedded_area(ref) <= 1e-12 * diam * diam)
    throw DegenerateTriangle("reference triangle is degenerate");

  const Vector origin = ref.vertices.col(0);
  Vector b1 = ref.vertices.col(1) - origin;
  b1.normalize();
  Vector b2 = ref.vertices.col(2) - origin;
  b2 -= b1.dot(b2) * b1;
  b2.normalize();

  auto project = [&](const EmbeddedTriangle& t) {
    Tri2 out;
    for (int i = 0; i < 3; ++i) {
      const Vector d = t.vertices.col(i) - origin;
      out(0, i) = b1.dot(d);
      out(1, i) = b2.dot(d);
    }
    return out;
  };
  return {project(ref), project(other)};
}

// Open-interior overlap after projecting both triangles into the plane of
// the first: true when the projected open interiors intersect. The reference
// plane matters: a thin triangle's plane cuts diagonally across the geometry
// it sits in, so callers pick the well-shaped triangle as the reference
// (conflict sweeps project the candidate into each existing triangle's
// plane). A projected triangle of numerically zero area never overlaps
// anything; with the other triangle nearly edge-on to the reference, the
// distance test alone cannot create a conflict.
inline bool overlap(const EmbeddedTriangle& t1, const EmbeddedTriangle& t2) {
  const double scale =
      std::max(detail::triangle_diameter(t1), detail::triangle_diameter(t2));
  if (scale == 0.0) return false;
  const double d1 = detail::triangle_diameter(t1);
  if (d1 == 0.0 || detail::embedded_area(t1) <= 1e-12 * d1 * d1)
    throw DegenerateTriangle("overlap requires a nondegenerate first triangle");

  auto [pr, po] = project_to_plane(t1, t2);
  if (std::abs(detail::tri2_signed_area(po)) <= 1e-12 * scale * scale)
    return false;
  return detail::interior_overlap_margin(pr, po) > 1e-12 * scale;
}

// Minimum Euclidean distance between the two closed triangles as point sets.
// The convex quadratic is minimized over the product of barycentric
// simplices by enumerating all face pairs: each pair contributes the critical
// point of the objective restricted to the pair's affine hull (kept if
// feasible), and vertex-vertex pairs guarantee a nonempty candidate set. Any
// minimizer lies in the relative interior of some face pair, so the
// enumeration is exact.
inline double triangle_distance(const EmbeddedTriangle& t1,
                                const EmbeddedTriangle& t2) {
  const Vector a1 = t1.vertices.col(0);
  const Vector a2 = t2.vertices.col(0);
  Matrix e1(a1.size(), 2), e2(a2.size(), 2);
  e1.col(0) = t1.vertices.col(1) - a1;
  e1.col(1) = t1.vertices.col(2) - a1;
  e2.col(0) = t2.vertices.col(1) - a2;
  e2.col(1) = t2.vertices.col(2) - a2;

  const double feas_tol = 1e-9;
  double best = std::numeric_limits<double>::infinity();

  for (const auto& f1 : detail::simplex_faces()) {
    for (const auto& f2 : detail::simplex_faces()) {
      const int d1 = f1.dim, d2 = f2.dim;
      Eigen::Vector2d u = f1.base, w = f2.base;
      const int n = d1 + d2;
      if (n > 0) {
        // normal equations of min |r + G1 s - G2 t|^2
        Matrix g1 = e1 * f1.dirs.leftCols(d1);
        Matrix g2 = e2 * f2.dirs.leftCols(d2);
        const Vector r = (a1 + e1 * f1.base) - (a2 + e2 * f2.base);
        Matrix k(n, n);
        Vector rhs(n);
        k.topLeftCorner(d1, d1) = g1.transpose() * g1;
        k.topRightCorner(d1, d2) = -g1.transpose() * g2;
        k.bottomLeftCorner(d2, d1) = -g2.transpose() * g1;
        k.bottomRightCorner(d2, d2) = g2.transpose() * g2;
        rhs.head(d1) = -g1.transpose() * r;
        rhs.tail(d2) = g2.transpose() * r;
        Eigen::FullPivLU<Matrix> lu(k);
        if (!lu.isInvertible()) continue;  // covered by lower-dim faces
        const Vector st = lu.solve(rhs);
        u += f1.dirs.leftCols(d1) * st.head(d1);
        w += f2.dirs.leftCols(d2) * st.tail(d2);
        if (!detail::in_simplex(u, feas_tol) ||
            !detail::in_simplex(w, feas_tol))
          continue;
        u = detail::clamp_to_simplex(u);
        w = detail::clamp_to_simplex(w);
      }
      const double dist = ((a1 + e1 * u) - (a2 + e2 * w)).norm();
      best = std::min(best, dist);
    }
  }
  return best;
}

// Exact distance from a point to a closed triangle: project onto the
// triangle's plane and keep the projection if its barycentric coordinates are
// feasible, otherwise clamp onto each of the three edges.
inline double point_triangle_distance(const Vector& p,
                                      const EmbeddedTriangle& t) {
  const Vector a = t.vertices.col(0);
  const Vector e1 = t.vertices.col(1) - a;
  const Vector e2 = t.vertices.col(2) - a;
  const Vector d = p - a;

  const double g11 = e1.squaredNorm();
  const double g22 = e2.squaredNorm();
  const double g12 = e1.dot(e2);
  const double b1 = e1.dot(d);
  const double b2 = e2.dot(d);
  const double det = g11 * g22 - g12 * g12;

  if (det > 1e-14 * g11 * g22) {
    const double u = (g22 * b1 - g12 * b2) / det;
    const double v = (g11 * b2 - g12 * b1) / det;
    if (u >= 0.0 && v >= 0.0 && u + v <= 1.0)
      return (d - u * e1 - v * e2).norm();
  }

  auto segment = [](const Vector& rel, const Vector& dir) {
    const double len2 = dir.squaredNorm();
    const double s =
        len2 > 0.0 ? std::clamp(rel.dot(dir) / len2, 0.0, 1.0) : 0.0;
    return (rel - s * dir).norm();
  };
  const Vector d2 = p - t.vertices.col(1);
  return std::min({segment(d, e1), segment(d, e2),
                   segment(d2, Vector(t.vertices.col(2) - t.vertices.col(1)))});
}

// Shape quality: planar area over squared diameter (~0.433 for equilateral,
// ~0 for slivers). A triangle's plane is only a meaningful local-surface
// proxy when the triangle is reasonably shaped; projections into sliver
// planes cut diagonally across the geometry and say nothing.
inline double triangle_quality(const EmbeddedTriangle& t) {
  const double diam = detail::triangle_diameter(t);
  if (diam == 0.0) return 0.0;
  return detail::embedded_area(t) / (diam * diam);
}

constexpr double kMinReferenceQuality = 0.05;

// Conflict of one candidate/existing pair: they lie within delta of each
// other and their open interiors overlap when projected into the plane of a
// well-shaped member of the pair. Sliver planes are not consulted, which is
// what lets the sewing stage close slit-shaped gaps while layered well-shaped
// triangles are still rejected.
inline bool pair_conflicts(const EmbeddedTriangle& candidate,
                           const EmbeddedTriangle& existing, double delta) {
  bool overlapping = false;
  if (triangle_quality(existing) >= kMinReferenceQuality)
    overlapping = overlap(existing, candidate);
  if (!overlapping && triangle_quality(candidate) >= kMinReferenceQuality)
    overlapping = overlap(candidate, existing);
  if (!overlapping) return false;
  return triangle_distance(candidate, existing) <= delta;
}

// Conflict of a candidate against a set of triangles. The bounding-sphere
// prune is a pure speedup (a pair it rejects cannot be within delta).
inline bool conflicts(const EmbeddedTriangle& candidate,
                      const std::vector<EmbeddedTriangle>& triangles,
                      double delta) {
  for (const auto& t : triangles) {
    const double center_gap =
        (t.bounding_center - candidate.bounding_center).norm();
    if (center_gap > t.bounding_radius + candidate.bounding_radius + delta)
      continue;
    if (pair_conflicts(candidate, t, delta)) return true;
  }
  return false;
}

// Convenience overload sweeping every triangle of a complex.
inline bool conflicts(const EmbeddedTriangle& candidate, const Complex& complex,
                      double delta) {
  std::vector<EmbeddedTriangle> triangles;
  triangles.reserve(complex.triangle_count());
  for (int i = 0; i < complex.triangle_count(); ++i) {
    const auto& tri = complex.triangle(i);
    triangles.push_back(make_embedded_triangle(complex.vertex(tri[0]).coords,
                                               complex.vertex(tri[1]).coords,
                                               complex.vertex(tri[2]).coords));
  }
  return conflicts(candidate, triangles, delta);
}

}  // namespace manifront
