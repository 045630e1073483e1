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
#include <chrono>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "manifront/complex.hpp"
#include "manifront/conflict.hpp"
#include "manifront/local_metric.hpp"
#include "manifront/placement.hpp"
#include "manifront/point_cloud.hpp"
#include "manifront/types.hpp"

namespace manifront {

// All tolerances default to fractions of the characteristic length, the one
// scale the caller asserts about the data.
struct TriangulationConfig {
  double char_length = 1.0;
  double mu = 1e-3;
  double conflict_delta = 0.0;   // default 0.25 * char_length
  double accept_tol = 0.0;       // default 0.5 * char_length
  double merge_tol = 0.0;        // default 1.3 * char_length
  double max_sew_length = 0.0;   // default 2 * char_length
  double drop_tol = 1e-10;
  std::uint64_t seed = 0;
  std::int64_t start_index = -1;  // < 0: random data point
  bool skip_sewing = false;
  bool fill_holes = false;
  std::int64_t max_triangles = -1;  // < 0: unlimited
  int validate_stride = 0;          // > 0: structural sweep every k accepts

  static TriangulationConfig with_char_length(double ell) {
    TriangulationConfig c;
    c.char_length = ell;
    return c.resolved();
  }

  TriangulationConfig resolved() const {
    TriangulationConfig c = *this;
    if (c.char_length <= 0)
      throw std::invalid_argument("characteristic length must be positive");
    if (c.conflict_delta <= 0) c.conflict_delta = 0.25 * c.char_length;
    if (c.accept_tol <= 0) c.accept_tol = 0.5 * c.char_length;
    if (c.merge_tol <= 0) c.merge_tol = 1.3 * c.char_length;
    if (c.max_sew_length <= 0) c.max_sew_length = 2.0 * c.char_length;
    return c;
  }
};

struct StageReport {
  std::string stage;
  std::int64_t iterations = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected_conflict = 0;
  std::int64_t rejected_minimizer_too_far = 0;
  std::int64_t rejected_empty_neighborhood = 0;
  std::int64_t rejected_empty_constraint_set = 0;
  double wall_seconds = 0.0;

  std::int64_t rejected() const {
    return rejected_conflict + rejected_minimizer_too_far +
           rejected_empty_neighborhood + rejected_empty_constraint_set;
  }
};

struct RunReport {
  std::vector<StageReport> stages;
  TopologyCounts topology;
};

// Per-run working state shared between the stages: the latest metric computed
// for each vertex (the sewing stage reuses them) and the embedded-triangle
// mirror of the complex for conflict sweeps.
struct PipelineState {
  std::map<int, LocalMetric> metrics;
  std::vector<EmbeddedTriangle> triangles;

  void mirror_triangle(const Complex& complex, int tid) {
    const auto& tri = complex.triangle(tid);
    triangles.push_back(make_embedded_triangle(complex.vertex(tri[0]).coords,
                                               complex.vertex(tri[1]).coords,
                                               complex.vertex(tri[2]).coords));
  }
};

namespace detail {

class StageTimer {
 public:
  explicit StageTimer(StageReport& report)
      : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    report_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
  }

 private:
  StageReport& report_;
  std::chrono::steady_clock::time_point start_;
};

inline Matrix gather_columns(const PointCloud& cloud,
                             const std::vector<int>& indices) {
  Matrix m(cloud.dim(), indices.size());
  for (size_t i = 0; i < indices.size(); ++i)
    m.col(i) = cloud.points().col(indices[i]);
  return m;
}

// Metric at a vertex from the Euclidean neighborhood of the given radius
// (the active edge length). Throws EmptyNeighborhood when no usable
// neighbors remain.
inline LocalMetric metric_at(const PointCloud& cloud, const Vector& vertex,
                             double radius, const TriangulationConfig& config) {
  const std::vector<int> nbrs = cloud.radius_query(vertex, radius);
  const DirectionFactor factor =
      build_direction_factor(vertex, gather_columns(cloud, nbrs));
  return eigendecompose(factor, config.mu, config.drop_tol);
}

}  // namespace detail

// Initial triangulation: a random (or user-chosen) data point, a second data
// point at distance as close to the characteristic length as possible, and
// the two minimizers of the placement problem with the half-space constraint
// removed, snapped to their nearest data points. Result: 4 vertices, 5 edges,
// 2 triangles, all five edges on the stack.
inline Complex seed_complex(const PointCloud& cloud,
                            const TriangulationConfig& raw_config,
                            PipelineState* state = nullptr) {
  const TriangulationConfig config = raw_config.resolved();
  if (cloud.size() < 4)
    throw SeedFailure("need at least 4 data points to seed");

  Rng rng(config.seed);
  std::string last_error = "no attempts made";
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::int64_t i1;
    if (attempt == 0 && config.start_index >= 0) {
      if (config.start_index >= cloud.size())
        throw SeedFailure("start index out of range");
      i1 = config.start_index;
    } else {
      i1 = rng.uniform_int(cloud.size());
    }
    const int i2 = cloud.nearest_at_distance(static_cast<int>(i1),
                                             config.char_length);
    const Vector v1 = cloud.point(static_cast<int>(i1));
    const Vector v2 = cloud.point(i2);
    const double edge_len = (v2 - v1).norm();

    try {
      const LocalMetric q1 = detail::metric_at(cloud, v1, edge_len, config);
      const LocalMetric q2 = detail::metric_at(cloud, v2, edge_len, config);
      const PlacementProblem problem = make_placement_problem(
          v1, v2, q1, q2, constraint_radius(edge_len, config.char_length),
          std::nullopt);
      const PlacementPairOutcome pair = solve_placement_pair(problem);
      if (pair.status != PlacementStatus::converged) {
        last_error = "placement pair did not converge";
        continue;
      }
      const int i3 = cloud.nearest(pair.first.minimizer).first;
      const int i4 = cloud.nearest(pair.second.minimizer).first;
      std::array<std::int64_t, 4> picked{i1, i2, i3, i4};
      std::sort(picked.begin(), picked.end());
      if (std::adjacent_find(picked.begin(), picked.end()) != picked.end()) {
        last_error = "snapped seed vertices coincide";
        continue;
      }

      Complex complex;
      const int a = complex.add_vertex(v1, i1);
      const int b = complex.add_vertex(v2, i2);
      const int c = complex.add_vertex(cloud.point(i3), i3);
      const int d = complex.add_vertex(cloud.point(i4), i4);
      complex.push_edges(complex.add_triangle(a, b, c));
      complex.push_edges(complex.add_triangle(a, b, d));
      if (state) {
        state->metrics[a] = q1;
        state->metrics[b] = q2;
        state->mirror_triangle(complex, 0);
        state->mirror_triangle(complex, 1);
      }
      return complex;
    } catch (const EmptyNeighborhood&) {
      last_error = "empty seed neighborhood";
      continue;
    } catch (const DegenerateTriangle&) {
      last_error = "degenerate seed triangle";
      continue;
    }
  }
  throw SeedFailure("seeding failed after 10 attempts: " + last_error);
}

// Advancing front stage: pop an active front edge, build the two vertex
// metrics from edge-length neighborhoods, solve the placement problem, and
// accept the first candidate triangle that does not conflict with the
// triangulation. Any failure marks the edge unviable for the rest of the
// stage. Terminates when the stack is empty (every front edge unviable).
inline StageReport advancing_front(const PointCloud& cloud, Complex& complex,
                                   const TriangulationConfig& raw_config,
                                   PipelineState& state) {
  const TriangulationConfig config = raw_config.resolved();
  StageReport report;
  report.stage = "advancing_front";
  detail::StageTimer timer(report);

  while (auto active = complex.pop_active_front_edge()) {
    if (config.max_triangles >= 0 &&
        complex.triangle_count() >= config.max_triangles)
      break;
    ++report.iterations;
    const EdgeKey edge = *active;
    const int a = edge.first, b = edge.second;
    const Vector& v1 = complex.vertex(a).coords;
    const Vector& v2 = complex.vertex(b).coords;
    const double edge_len = (v2 - v1).norm();

    bool accepted = false;
    try {
      const LocalMetric q1 = detail::metric_at(cloud, v1, edge_len, config);
      const LocalMetric q2 = detail::metric_at(cloud, v2, edge_len, config);
      state.metrics[a] = q1;
      state.metrics[b] = q2;

      const Vector v0 = complex.vertex(complex.third_vertex(edge)).coords;
      const PlacementProblem problem = make_placement_problem(
          v1, v2, q1, q2, constraint_radius(edge_len, config.char_length), v0);
      const PlacementOutcome outcome = solve_placement(problem);
      if (outcome.status != PlacementStatus::converged) {
        ++report.rejected_empty_constraint_set;
        complex.set_viable(edge, false);
        continue;
      }

      const CandidateResult cands =
          candidate_vertices(outcome.solution, cloud, complex, edge,
                             config.accept_tol, config.merge_tol);
      if (cands.status == CandidateStatus::minimizer_too_far) {
        ++report.rejected_minimizer_too_far;
        complex.set_viable(edge, false);
        continue;
      }

      for (const CandidateVertex& cand : cands.candidates) {
        if (cand.existing_id) {
          const int id = *cand.existing_id;
          if (id == a || id == b) continue;
          if (complex.has_triangle(a, b, id) || complex.would_overown(a, b, id))
            continue;
        }
        EmbeddedTriangle tri;
        try {
          tri = make_embedded_triangle(v1, v2, cand.coords);
          if (detail::embedded_area(tri) <=
              1e-12 * detail::triangle_diameter(tri) *
                  detail::triangle_diameter(tri))
            continue;
        } catch (const DegenerateTriangle&) {
          continue;
        }
        if (conflicts(tri, state.triangles, config.conflict_delta)) continue;

        const int c = cand.existing_id
                          ? *cand.existing_id
                          : complex.add_vertex(cand.coords, cand.data_index);
        complex.push_edges(complex.add_triangle(a, b, c));
        state.mirror_triangle(complex, complex.triangle_count() - 1);
        accepted = true;
        ++report.accepted;
        break;
      }
      if (!accepted) {
        ++report.rejected_conflict;
        complex.set_viable(edge, false);
      }
    } catch (const EmptyNeighborhood&) {
      ++report.rejected_empty_neighborhood;
      complex.set_viable(edge, false);
    } catch (const DegenerateTriangle&) {
      ++report.rejected_conflict;
      complex.set_viable(edge, false);
    }

    if (config.validate_stride > 0 &&
        report.accepted % config.validate_stride == 0)
      complex.validate();
  }
  complex.validate();
  return report;
}

namespace detail {

// One seam-sewing step on an active front edge: exhaustive search over
// existing vertices within the sewing length of both edge vertices,
// minimizing the sum of the two squared metric edge lengths, skipping
// candidates whose triangle conflicts. In hole-fill mode conflicts are
// ignored, but candidates must extend an adjacent front edge, so each
// acceptance clips an ear off a hole ring and the ring shrinks; fills can
// never web across the mesh.
inline bool sew_edge(const PointCloud& cloud, Complex& complex,
                     const EdgeKey& edge, const TriangulationConfig& config,
                     PipelineState& state, bool fill_mode,
                     StageReport& report) {
  const int a = edge.first, b = edge.second;
  const Vector& v1 = complex.vertex(a).coords;
  const Vector& v2 = complex.vertex(b).coords;
  const double edge_len = (v2 - v1).norm();

  auto metric_for = [&](int id, const Vector& at) -> const LocalMetric& {
    auto it = state.metrics.find(id);
    if (it == state.metrics.end()) {
      // vertex never drove an advancing-front solve; build its metric now
      // with the same edge-length radius rule
      it = state.metrics.emplace(id, metric_at(cloud, at, edge_len, config))
               .first;
    }
    return it->second;
  };

  const LocalMetric& q1 = metric_for(a, v1);
  const LocalMetric& q2 = metric_for(b, v2);

  struct Scored {
    double objective;
    int id;
  };
  std::vector<Scored> scored;
  for (int w = 0; w < complex.vertex_count(); ++w) {
    if (w == a || w == b) continue;
    const Vector& coords = complex.vertex(w).coords;
    if (fill_mode && !complex.is_front(make_edge_key(a, w)) &&
        !complex.is_front(make_edge_key(b, w)))
      continue;
    // the length restriction stops triangles from bridging voids; a triangle
    // whose other two edges already exist creates no new edge and closes a
    // cycle, so it is exempt
    const bool closes_cycle = complex.has_edge(make_edge_key(a, w)) &&
                              complex.has_edge(make_edge_key(b, w));
    if (!closes_cycle &&
        ((coords - v1).norm() > config.max_sew_length ||
         (coords - v2).norm() > config.max_sew_length))
      continue;
    if (complex.has_triangle(a, b, w) || complex.would_overown(a, b, w))
      continue;
    scored.push_back(
        {q_form_displaced(q1, coords) + q_form_displaced(q2, coords), w});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
    return x.objective < y.objective ||
           (x.objective == y.objective && x.id < y.id);
  });

  for (const Scored& cand : scored) {
    const Vector& coords = complex.vertex(cand.id).coords;
    EmbeddedTriangle tri;
    try {
      tri = make_embedded_triangle(v1, v2, coords);
      if (embedded_area(tri) <= 1e-12 * triangle_diameter(tri) *
                                    triangle_diameter(tri))
        continue;
    } catch (const DegenerateTriangle&) {
      continue;
    }
    if (!fill_mode && conflicts(tri, state.triangles, config.conflict_delta))
      continue;

    complex.push_edges(complex.add_triangle(a, b, cand.id));
    state.mirror_triangle(complex, complex.triangle_count() - 1);
    ++report.accepted;
    return true;
  }
  ++report.rejected_conflict;
  return false;
}

// Seeds one sequence of front edges: find the smallest angle between two
// adjacent front edges of which at least one is viable, and push one viable
// member of that pair (the lexicographically smaller when both qualify).
inline std::optional<EdgeKey> pick_sequence_seed(const Complex& complex) {
  std::optional<EdgeKey> best;
  double best_angle = std::numeric_limits<double>::infinity();
  for (const EdgeKey& e : complex.front_edges()) {
    for (const auto& [nb, angle] : complex.adjacent_front_edges(e)) {
      if (!complex.is_viable(e) && !complex.is_viable(nb)) continue;
      if (angle >= best_angle) continue;
      best_angle = angle;
      if (complex.is_viable(e) && complex.is_viable(nb))
        best = std::min(e, nb);
      else
        best = complex.is_viable(e) ? e : nb;
    }
  }
  if (best) return best;
  // front edges with no front neighbors at all; fall back to any viable one
  for (const EdgeKey& e : complex.front_edges())
    if (complex.is_viable(e)) return e;
  return std::nullopt;
}

inline StageReport sew_stage(const PointCloud& cloud, Complex& complex,
                             const TriangulationConfig& raw_config,
                             PipelineState& state, bool fill_mode,
                             const std::string& name) {
  const TriangulationConfig config = raw_config.resolved();
  StageReport report;
  report.stage = name;
  StageTimer timer(report);

  complex.reset_viability();
  while (true) {
    const std::optional<EdgeKey> seed = pick_sequence_seed(complex);
    if (!seed) break;
    complex.push_edges({*seed});
    while (auto active = complex.pop_active_front_edge()) {
      ++report.iterations;
      if (!sew_edge(cloud, complex, *active, config, state, fill_mode,
                    report))
        complex.set_viable(*active, false);
      if (config.validate_stride > 0 &&
          report.accepted % config.validate_stride == 0)
        complex.validate();
    }
  }
  complex.validate();
  return report;
}

}  // namespace detail

// Seam sewing: closes the gaps the advancing front left between patches,
// reusing the metrics retained for front-edge vertices. Triangles only ever
// connect existing vertices.
inline StageReport seam_sewing(const PointCloud& cloud, Complex& complex,
                               const TriangulationConfig& config,
                               PipelineState& state) {
  return detail::sew_stage(cloud, complex, config, state, false,
                           "seam_sewing");
}

// Optional last resort for spurious holes: sewing with the conflict
// restriction dropped.
inline StageReport fill_holes(const PointCloud& cloud, Complex& complex,
                              const TriangulationConfig& config,
                              PipelineState& state) {
  return detail::sew_stage(cloud, complex, config, state, true, "fill_holes");
}

struct TriangulationResult {
  Complex complex;
  RunReport report;
};

// Full pipeline: seed, advance the front, then (unless disabled) sew seams
// and optionally fill holes.
inline TriangulationResult triangulate(const PointCloud& cloud,
                                       const TriangulationConfig& raw_config) {
  const TriangulationConfig config = raw_config.resolved();
  TriangulationResult result;
  PipelineState state;
  result.complex = seed_complex(cloud, config, &state);
  result.report.stages.push_back(
      advancing_front(cloud, result.complex, config, state));
  if (!config.skip_sewing) {
    result.report.stages.push_back(
        seam_sewing(cloud, result.complex, config, state));
    if (config.fill_holes)
      result.report.stages.push_back(
          fill_holes(cloud, result.complex, config, state));
  }
  result.report.topology = result.complex.topology_counts();
  return result;
}

}  // namespace manifront
