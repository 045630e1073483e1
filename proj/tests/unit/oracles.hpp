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

// Independent reference implementations used only by tests. These stay
// deliberately naive (dense matrices, exhaustive scans, brute-force searches)
// so they share no code path with the library.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "manifront/conflict.hpp"
#include "manifront/local_metric.hpp"
#include "manifront/types.hpp"

namespace oracle {

using manifront::Matrix;
using manifront::Vector;

// Dense P = D D^T from a direction factor.
inline Matrix dense_covariance(const manifront::DirectionFactor& f) {
  return f.columns * f.columns.transpose();
}

// x^T (P + mu I)^(-1) x by a dense solve.
inline double dense_q_form(const Matrix& p, double mu, const Vector& x) {
  Matrix a = p + mu * Matrix::Identity(p.rows(), p.cols());
  return x.dot(a.ldlt().solve(x));
}

// Exhaustive spatial queries.
inline std::vector<int> scan_radius(const Matrix& pts, const Vector& c,
                                    double r) {
  std::vector<int> out;
  for (int i = 0; i < pts.cols(); ++i)
    if ((pts.col(i) - c).norm() <= r) out.push_back(i);
  return out;
}

inline std::pair<int, double> scan_nearest(const Matrix& pts,
                                           const Vector& q) {
  int best = 0;
  double best_d = (pts.col(0) - q).norm();
  for (int i = 1; i < pts.cols(); ++i) {
    const double d = (pts.col(i) - q).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, best_d};
}

inline int scan_nearest_at_distance(const Matrix& pts, int center,
                                    double target) {
  int best = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pts.cols(); ++i) {
    if (i == center) continue;
    const double gap = std::abs((pts.col(i) - pts.col(center)).norm() - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

// Brute-force minimum of the placement objective over the feasible curve in
// R^3: sweep the constraint sphere in spherical coordinates, bracket sign
// changes of the isosceles residual along each meridian, and bisect them to
// machine precision. Returns the best feasible objective (optionally
// restricted to the half-space n . (v - vm) >= 0).
struct CurveScanResult {
  double objective = std::numeric_limits<double>::infinity();
  Vector minimizer;
  int feasible_points = 0;
};

inline CurveScanResult placement_curve_scan(
    const manifront::LocalMetric& q1, const Vector& v1,
    const manifront::LocalMetric& q2, const Vector& v2, double rc,
    const Vector* halfspace_normal, int n_azimuth = 1000,
    int n_polar = 1000) {
  const Vector vm = 0.5 * (v1 + v2);
  // orthonormal frame
  Matrix frame = Matrix::Identity(3, 3);
  CurveScanResult result;

  auto point_at = [&](double phi, double theta) {
    const Vector dir = std::sin(theta) * (std::cos(phi) * frame.col(0) +
                                          std::sin(phi) * frame.col(1)) +
                       std::cos(theta) * frame.col(2);
    return Vector(vm + rc * dir);
  };
  auto iso = [&](const Vector& v) {
    return manifront::q_form(q1, v - v1) - manifront::q_form(q2, v - v2);
  };
  auto consider = [&](const Vector& v) {
    if (halfspace_normal && halfspace_normal->dot(v - vm) < 0.0) return;
    ++result.feasible_points;
    const double obj = manifront::q_form(q1, v - v1);
    if (obj < result.objective) {
      result.objective = obj;
      result.minimizer = v;
    }
  };

  // sweep both coordinate directions so intersections grazing one family of
  // grid lines are still caught transversally by the other
  for (int i = 0; i < n_azimuth; ++i) {
    const double phi = 2.0 * M_PI * i / n_azimuth;
    double prev_theta = 0.0;
    double prev_val = iso(point_at(phi, prev_theta));
    for (int j = 1; j <= n_polar; ++j) {
      const double theta = M_PI * j / n_polar;
      const double val = iso(point_at(phi, theta));
      if ((prev_val <= 0.0) != (val <= 0.0)) {
        double lo = prev_theta, hi = theta;
        for (int b = 0; b < 60; ++b) {
          const double mid = 0.5 * (lo + hi);
          if ((iso(point_at(phi, mid)) <= 0.0) == (prev_val <= 0.0))
            lo = mid;
          else
            hi = mid;
        }
        consider(point_at(phi, 0.5 * (lo + hi)));
      }
      prev_theta = theta;
      prev_val = val;
    }
  }
  for (int j = 1; j < n_polar; ++j) {
    const double theta = M_PI * j / n_polar;
    double prev_phi = 0.0;
    double prev_val = iso(point_at(prev_phi, theta));
    for (int i = 1; i <= n_azimuth; ++i) {
      const double phi = 2.0 * M_PI * i / n_azimuth;
      const double val = iso(point_at(phi, theta));
      if ((prev_val <= 0.0) != (val <= 0.0)) {
        double lo = prev_phi, hi = phi;
        for (int b = 0; b < 60; ++b) {
          const double mid = 0.5 * (lo + hi);
          if ((iso(point_at(mid, theta)) <= 0.0) == (prev_val <= 0.0))
            lo = mid;
          else
            hi = mid;
        }
        consider(point_at(0.5 * (lo + hi), theta));
      }
      prev_phi = phi;
      prev_val = val;
    }
  }
  return result;
}

// Scanline oracle for open-interior overlap of two projected triangles:
// slice the common vertical extent into rows and intersect the interior
// x-intervals of both triangles analytically on each row.
inline double scanline_max_overlap(const manifront::Tri2& a,
                                   const manifront::Tri2& b, int rows) {
  const double ymin =
      std::max(a.row(1).minCoeff(), b.row(1).minCoeff());
  const double ymax =
      std::min(a.row(1).maxCoeff(), b.row(1).maxCoeff());
  if (ymax <= ymin) return -1.0;

  auto interval_at = [](const manifront::Tri2& t, double y, double& lo,
                        double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d p = t.col(e);
      const Eigen::Vector2d q = t.col((e + 1) % 3);
      const double dy = q.y() - p.y();
      if (dy == 0.0) continue;
      const double s = (y - p.y()) / dy;
      if (s < 0.0 || s > 1.0) continue;
      const double x = p.x() + s * (q.x() - p.x());
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return lo < hi;
  };

  double best = -1.0;
  for (int i = 0; i < rows; ++i) {
    const double y = ymin + (ymax - ymin) * (i + 0.5) / rows;
    double alo, ahi, blo, bhi;
    if (!interval_at(a, y, alo, ahi) || !interval_at(b, y, blo, bhi)) continue;
    best = std::max(best, std::min(ahi, bhi) - std::max(alo, blo));
  }
  return best;
}

// Overlap decision on the scanline oracle, projecting into t1's plane like
// the library test does.
inline bool scanline_overlap(const manifront::EmbeddedTriangle& t1,
                             const manifront::EmbeddedTriangle& t2,
                             int rows = 2000) {
  const double scale = std::max((t1.vertices.col(0) - t1.vertices.col(1)).norm(),
                                (t2.vertices.col(0) - t2.vertices.col(1)).norm());
  auto [pr, po] = manifront::project_to_plane(t1, t2);
  return scanline_max_overlap(pr, po, rows) > 1e-12 * std::max(1.0, scale);
}

// Uniform barycentric samples on a triangle.
inline Matrix triangle_samples(const manifront::EmbeddedTriangle& t, int count,
                               manifront::Rng& rng) {
  Matrix out(t.vertices.rows(), count);
  for (int i = 0; i < count; ++i) {
    double u = rng.uniform(), v = rng.uniform();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    out.col(i) = t.vertices.col(0) +
                 u * (t.vertices.col(1) - t.vertices.col(0)) +
                 v * (t.vertices.col(2) - t.vertices.col(0));
  }
  return out;
}

// Exact triangle-triangle distance for DISJOINT triangles in R^3: minimum
// over the 9 edge-edge and 6 vertex-triangle candidates (valid in R^3, where
// any interior-interior minimum is also attained on the boundary).
inline double segment_segment_distance(const Vector& p1, const Vector& q1,
                                       const Vector& p2, const Vector& q2) {
  const Vector d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  const double tiny = 1e-30;
  if (a <= tiny && e <= tiny) return r.norm();
  if (a <= tiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= tiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      if (denom > tiny)
        s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p1 + s * d1 - (p2 + t * d2)).norm();
}

// Point-to-triangle distance reimplemented from scratch (least-squares plane
// projection, falling back to the three edge segments).
inline double point_triangle(const Vector& p,
                             const manifront::EmbeddedTriangle& t) {
  const Vector a = t.vertices.col(0);
  Matrix e(a.size(), 2);
  e.col(0) = t.vertices.col(1) - a;
  e.col(1) = t.vertices.col(2) - a;
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Vector2d uv =
      e.colPivHouseholderQr().solve(Vector(p - a));
  if (uv.x() >= 0.0 && uv.y() >= 0.0 && uv.x() + uv.y() <= 1.0)
    best = (p - a - e * uv).norm();
  for (int i = 0; i < 3; ++i)
    best = std::min(best,
                    segment_segment_distance(p, p, t.vertices.col(i),
                                             t.vertices.col((i + 1) % 3)));
  return best;
}

inline double candidate_triangle_distance(
    const manifront::EmbeddedTriangle& t1,
    const manifront::EmbeddedTriangle& t2) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      best = std::min(
          best, segment_segment_distance(
                    t1.vertices.col(i), t1.vertices.col((i + 1) % 3),
                    t2.vertices.col(j), t2.vertices.col((j + 1) % 3)));
    best = std::min(best, point_triangle(t1.vertices.col(i), t2));
    best = std::min(best, point_triangle(t2.vertices.col(i), t1));
  }
  return best;
}

}  // namespace oracle
