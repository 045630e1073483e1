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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "manifront/complex.hpp"
#include "manifront/conflict.hpp"
#include "manifront/point_cloud.hpp"
#include "manifront/types.hpp"

namespace manifront {

struct ErrorReport {
  std::vector<double> per_point;
  double max = 0.0;
  double avg = 0.0;
  double rms = 0.0;
  std::int64_t n_points = 0;
  TopologyCounts topology;
};

// Precomputed triangle data for repeated point queries: evaluating a point
// first sorts triangles by a bounding-sphere lower bound and stops once the
// bound exceeds the best distance found, which cannot change the result.
class MeshDistanceIndex {
 public:
  explicit MeshDistanceIndex(const Complex& complex) {
    if (complex.triangle_count() == 0)
      throw EmptyComplex("complex has no triangles");
    triangles_.reserve(complex.triangle_count());
    for (int i = 0; i < complex.triangle_count(); ++i) {
      const auto& tri = complex.triangle(i);
      triangles_.push_back(make_embedded_triangle(
          complex.vertex(tri[0]).coords, complex.vertex(tri[1]).coords,
          complex.vertex(tri[2]).coords));
    }
    centers_.resize(triangles_[0].vertices.rows(), triangles_.size());
    radii_.resize(triangles_.size());
    for (size_t i = 0; i < triangles_.size(); ++i) {
      centers_.col(i) = triangles_[i].bounding_center;
      radii_[i] = triangles_[i].bounding_radius;
    }
  }

  double distance(const Vector& point) const {
    const Vector lower =
        ((centers_.colwise() - point).colwise().norm().transpose() - radii_)
            .cwiseMax(0.0);
    int seed = 0;
    lower.minCoeff(&seed);
    double best = point_triangle_distance(point, triangles_[seed]);
    for (size_t i = 0; i < triangles_.size(); ++i) {
      if (static_cast<int>(i) == seed || lower[i] >= best) continue;
      best = std::min(best, point_triangle_distance(point, triangles_[i]));
    }
    return best;
  }

 private:
  std::vector<EmbeddedTriangle> triangles_;
  Matrix centers_;
  Vector radii_;
};

// Shortest Euclidean distance from the point to any point of the
// triangulation.
inline double point_to_mesh_distance(const Vector& point,
                                     const Complex& complex) {
  return MeshDistanceIndex(complex).distance(point);
}

// Per-point distances from every data point to the triangulation, with the
// max / average / RMS aggregates and the topology counts.
inline ErrorReport evaluate(const PointCloud& cloud, const Complex& complex) {
  const MeshDistanceIndex index(complex);
  ErrorReport report;
  report.n_points = cloud.size();
  report.per_point.resize(cloud.size());
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < cloud.size(); ++i) {
    const double d = index.distance(cloud.point(i));
    report.per_point[i] = d;
    report.max = std::max(report.max, d);
    sum += d;
    sum_sq += d * d;
  }
  report.avg = sum / static_cast<double>(cloud.size());
  report.rms = std::sqrt(sum_sq / static_cast<double>(cloud.size()));
  report.topology = complex.topology_counts();
  return report;
}

}  // namespace manifront
