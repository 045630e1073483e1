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

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "manifront/complex.hpp"
#include "manifront/local_metric.hpp"
#include "manifront/point_cloud.hpp"
#include "manifront/types.hpp"

namespace manifront {

// Radius of the constraint sphere: sqrt(3)/2 times the even-weighted average
// of the active edge length and the characteristic length. When both lengths
// agree this is the apex height of the Euclidean equilateral triangle.
inline double constraint_radius(double edge_length, double char_length) {
  return std::sqrt(3.0) / 2.0 * 0.5 * (edge_length + char_length);
}

// New-vertex placement problem on an active edge: minimize the metric
// distance to v1 over the sphere of radius r_c about the edge midpoint,
// intersected with the isosceles surface (equal metric distance to both edge
// vertices) and, when the owning triangle's third vertex is known, the
// half-space pointing away from it.
struct PlacementProblem {
  Vector v1, v2;
  LocalMetric q1, q2;
  double r_c = 0.0;
  std::optional<Vector> v0;
  Vector normal;  // unit, orthogonal to the edge, away from v0 (if present)

  Vector midpoint() const { return 0.5 * (v1 + v2); }
  bool has_halfspace() const { return v0.has_value(); }
};

inline PlacementProblem make_placement_problem(Vector v1, Vector v2,
                                               LocalMetric q1, LocalMetric q2,
                                               double r_c,
                                               std::optional<Vector> v0) {
  PlacementProblem p;
  p.v1 = std::move(v1);
  p.v2 = std::move(v2);
  p.q1 = std::move(q1);
  p.q2 = std::move(q2);
  p.r_c = r_c;
  p.v0 = std::move(v0);
  if (p.v0) {
    // in-plane unit normal of the owning triangle, pointing away from v0
    const Vector edge = p.v2 - p.v1;
    const Vector u = p.midpoint() - *p.v0;
    Vector n = u - (u.dot(edge) / edge.squaredNorm()) * edge;
    const double norm = n.norm();
    if (norm <= 1e-12 * edge.norm())
      throw DegenerateTriangle("owning triangle is collinear");
    p.normal = n / norm;
  }
  return p;
}

enum class PlacementStatus {
  converged,
  empty_constraint_set,
  no_convergence,
  degenerate_second,
};

struct PlacementSolution {
  Vector minimizer;
  double objective = 0.0;
  double sphere_residual = 0.0;
  double isosceles_residual = 0.0;
  int iterations = 0;
};

struct PlacementOutcome {
  PlacementStatus status = PlacementStatus::empty_constraint_set;
  PlacementSolution solution;
};

struct PlacementPairOutcome {
  PlacementStatus status = PlacementStatus::empty_constraint_set;
  PlacementSolution first, second;
};

namespace detail {

// The minimizer has no component outside span{eigvecs(Q1), eigvecs(Q2),
// v2 - v1, n}: such a component inflates both quadratic forms identically by
// |w|^2 / mu. Restricting to this subspace turns the N-dimensional solve into
// one of dimension at most 2k + 2.
struct ReducedPlacement {
  Matrix basis;  // N x s, orthonormal
  Vector vm;
  Matrix m1, m2;  // s x s reduced quadratics
  Vector g1, g2;
  double c1 = 0.0, c2 = 0.0;
  double rc = 0.0;
  Vector nz;  // subspace coordinates of the half-space normal (or zero)
  bool has_halfspace = false;

  double f(const Vector& z) const {
    return z.dot(m1 * z) + 2.0 * g1.dot(z) + c1;
  }
  double f2(const Vector& z) const {
    return z.dot(m2 * z) + 2.0 * g2.dot(z) + c2;
  }
};

inline ReducedPlacement reduce_placement(const PlacementProblem& p) {
  const int dim = static_cast<int>(p.v1.size());
  std::vector<Vector> directions;
  for (int i = 0; i < p.q1.rank(); ++i)
    directions.push_back(p.q1.eigvecs.col(i));
  for (int i = 0; i < p.q2.rank(); ++i)
    directions.push_back(p.q2.eigvecs.col(i));
  directions.push_back(p.v2 - p.v1);
  if (p.has_halfspace()) directions.push_back(p.normal);

  Matrix basis(dim, directions.size());
  int s = 0;
  for (Vector& d : directions) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < s; ++j) d -= basis.col(j).dot(d) * basis.col(j);
    const double norm = d.norm();
    if (norm > 1e-8) basis.col(s++) = d / norm;
  }

  ReducedPlacement r;
  r.basis = basis.leftCols(s);
  r.vm = p.midpoint();
  r.rc = p.r_c;
  r.has_halfspace = p.has_halfspace();
  r.nz = r.has_halfspace ? Vector(r.basis.transpose() * p.normal)
                         : Vector(Vector::Zero(s));

  auto reduce_metric = [&](const LocalMetric& q, const Vector& vj, Matrix& m,
                           Vector& g, double& c) {
    Matrix qb(dim, s);
    for (int j = 0; j < s; ++j) qb.col(j) = q_apply(q, r.basis.col(j));
    m = r.basis.transpose() * qb;
    m = 0.5 * (m + m.transpose()).eval();
    const Vector d = r.vm - vj;
    g = qb.transpose() * d;
    c = d.dot(q_apply(q, d));
  };
  reduce_metric(p.q1, p.v1, r.m1, r.g1, r.c1);
  reduce_metric(p.q2, p.v2, r.m2, r.g2, r.c2);
  return r;
}

struct SqpResult {
  bool converged = false;
  bool found_feasible = false;  // reached small constraint residuals
  Vector z;
  int iterations = 0;
};

// Equality-constrained SQP in the reduced space with a null-space step and an
// l1 merit line search. The two constraints are the sphere and the isosceles
// surface.
inline SqpResult sqp_solve(const ReducedPlacement& r, Vector z,
                           int max_iterations = 200) {
  const int s = static_cast<int>(z.size());
  SqpResult result;
  double rho = 1.0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    result.iterations = iter;
    const double fval = r.f(z);
    const double f2val = r.f2(z);
    const Vector grad_f = 2.0 * (r.m1 * z + r.g1);
    const Vector grad_f2 = 2.0 * (r.m2 * z + r.g2);

    const double znorm = z.norm();
    const double c_sph = z.squaredNorm() - r.rc * r.rc;
    const double c_iso = fval - f2val;
    const Vector grad_sph = 2.0 * z;
    const Vector grad_iso = grad_f - grad_f2;

    const double sphere_res = std::abs(znorm - r.rc);
    const double iso_res = std::abs(c_iso);
    const bool feasible = sphere_res <= 1e-8 * r.rc &&
                          iso_res <= 1e-8 * std::max(1.0, std::abs(fval));
    result.found_feasible |= feasible;

    Matrix a(s, 2);
    a.col(0) = grad_sph;
    a.col(1) = grad_iso;

    // multiplier estimate (least squares)
    Eigen::Matrix2d ata = a.transpose() * a;
    Eigen::Vector2d atg = a.transpose() * grad_f;
    Eigen::Vector2d lambda = Eigen::Vector2d::Zero();
    if (ata.determinant() > 1e-14 * ata.trace() * ata.trace())
      lambda = ata.ldlt().solve(atg);

    const double stationarity = (grad_f - a * lambda).norm();
    if (feasible && stationarity <= 1e-6 * (1.0 + grad_f.norm())) {
      result.converged = true;
      result.z = z;
      return result;
    }

    // KKT step: solve min 1/2 p^T W p + grad_f^T p  s.t.  A^T p = -c
    const Matrix w = 2.0 * r.m1 - 2.0 * lambda[0] * Matrix::Identity(s, s) -
                     lambda[1] * (2.0 * r.m1 - 2.0 * r.m2);
    Eigen::Vector2d c(c_sph, c_iso);

    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    qr.setThreshold(1e-12);
    const int rank = static_cast<int>(qr.rank());
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a.transpose());
    Vector p_range = cod.solve(-c);

    Vector p = p_range;
    if (rank < s) {
      Matrix qfull = qr.householderQ();
      Matrix nullspace = qfull.rightCols(s - rank);
      Matrix hz = nullspace.transpose() * w * nullspace;
      const Vector rhs = -nullspace.transpose() * (grad_f + w * p_range);
      const double hz_scale = std::max(1.0, hz.cwiseAbs().maxCoeff());
      double tau = 0.0;
      for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::LDLT<Matrix> ldlt(
            hz + tau * Matrix::Identity(hz.rows(), hz.cols()));
        if (ldlt.info() == Eigen::Success &&
            ldlt.vectorD().minCoeff() > 1e-10 * hz_scale) {
          p = p_range + nullspace * ldlt.solve(rhs);
          break;
        }
        tau = tau == 0.0 ? 1e-8 * hz_scale : 10.0 * tau;
      }
    }

    // l1 merit line search
    rho = std::max(rho, 2.0 * lambda.cwiseAbs().maxCoeff() + 1.0);
    auto merit = [&](const Vector& zz) {
      const double ff = r.f(zz);
      return ff + rho * (std::abs(zz.squaredNorm() - r.rc * r.rc) +
                         std::abs(ff - r.f2(zz)));
    };
    const double phi0 = merit(z);
    const double descent =
        grad_f.dot(p) - rho * (std::abs(c_sph) + std::abs(c_iso));
    double alpha = 1.0;
    bool stepped = false;
    for (int ls = 0; ls < 30; ++ls) {
      if (merit(z + alpha * p) <=
          phi0 + 1e-4 * alpha * std::min(descent, 0.0)) {
        z += alpha * p;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) break;  // no progress possible from here
  }
  result.z = z;
  return result;
}

// Start directions: the half-space normal (or the dominant in-plane normal
// when seeding) plus rotations of it within the plane it spans with the
// leading tangent direction.
inline std::vector<Vector> placement_starts(const ReducedPlacement& r,
                                            const Matrix& eigvecs1,
                                            const Vector& primary) {
  const int s = static_cast<int>(r.basis.cols());
  Vector n = primary;
  if (n.norm() < 1e-12) n = Vector::Unit(s, 0);
  n.normalize();

  Vector t = Vector::Zero(s);
  for (int i = 0; i < eigvecs1.cols() && t.norm() < 1e-8; ++i) {
    t = r.basis.transpose() * eigvecs1.col(i);
    t -= n.dot(t) * n;
  }
  if (t.norm() < 1e-8) {
    for (int i = 0; i < s && t.norm() < 1e-8; ++i) {
      t = Vector::Unit(s, i);
      t -= n.dot(t) * n;
    }
  }
  if (t.norm() > 1e-12) t.normalize();

  std::vector<Vector> starts;
  starts.push_back(r.rc * n);
  for (int k = 1; k <= 8; ++k) {
    const double theta = 2.0 * M_PI * k / 9.0;
    starts.push_back(r.rc * (std::cos(theta) * n + std::sin(theta) * t));
  }
  return starts;
}

inline PlacementSolution assemble_solution(const ReducedPlacement& r,
                                           const SqpResult& run) {
  PlacementSolution sol;
  sol.minimizer = r.vm + r.basis * run.z;
  sol.objective = r.f(run.z);
  sol.sphere_residual = std::abs(run.z.norm() - r.rc);
  sol.isosceles_residual = r.f(run.z) - r.f2(run.z);
  sol.iterations = run.iterations;
  return sol;
}

}  // namespace detail

// Solves the placement problem with the half-space constraint enforced by
// rejection: every start is run to convergence and the best feasible
// converged point wins.
inline PlacementOutcome solve_placement(const PlacementProblem& problem) {
  const detail::ReducedPlacement r = detail::reduce_placement(problem);
  const Vector primary = problem.has_halfspace()
                             ? Vector(r.basis.transpose() * problem.normal)
                             : Vector(Vector::Zero(r.basis.cols()));

  PlacementOutcome outcome;
  bool any_feasible_point = false;
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& z0 :
       detail::placement_starts(r, problem.q1.eigvecs, primary)) {
    const detail::SqpResult run = detail::sqp_solve(r, z0);
    any_feasible_point |= run.found_feasible;
    if (!run.converged) continue;
    if (r.has_halfspace && r.nz.dot(run.z) < -1e-10 * r.rc) continue;
    const double obj = r.f(run.z);
    if (obj < best) {
      best = obj;
      outcome.status = PlacementStatus::converged;
      outcome.solution = detail::assemble_solution(r, run);
    }
  }
  if (outcome.status != PlacementStatus::converged)
    outcome.status = any_feasible_point ? PlacementStatus::no_convergence
                                        : PlacementStatus::empty_constraint_set;
  return outcome;
}

// Seeding variant: no half-space constraint, and the two minimizers on either
// side of the dominant tangent plane are both returned.
inline PlacementPairOutcome solve_placement_pair(
    const PlacementProblem& problem) {
  const detail::ReducedPlacement r = detail::reduce_placement(problem);

  // in-plane normal of the dominant local tangent plane, orthogonal to the
  // edge, used to classify the two solution branches
  const Vector edge = problem.v2 - problem.v1;
  Vector side = Vector::Zero(problem.v1.size());
  for (int i = 0; i < problem.q1.eigvecs.cols(); ++i) {
    Vector cand = problem.q1.eigvecs.col(i);
    cand -= (cand.dot(edge) / edge.squaredNorm()) * edge;
    if (cand.norm() > side.norm()) side = cand;
    if (side.norm() > 0.5) break;
  }
  Vector side_z = r.basis.transpose() * side;
  if (side_z.norm() < 1e-12) side_z = Vector::Unit(r.basis.cols(), 0);
  side_z.normalize();

  PlacementPairOutcome outcome;
  bool any_feasible_point = false;
  double best_pos = std::numeric_limits<double>::infinity();
  double best_neg = std::numeric_limits<double>::infinity();
  std::optional<detail::SqpResult> pos, neg;
  for (const Vector& z0 :
       detail::placement_starts(r, problem.q1.eigvecs, side_z)) {
    for (const double sign : {1.0, -1.0}) {
      const detail::SqpResult run = detail::sqp_solve(r, Vector(sign * z0));
      any_feasible_point |= run.found_feasible;
      if (!run.converged) continue;
      const double obj = r.f(run.z);
      if (side_z.dot(run.z) >= 0.0) {
        if (obj < best_pos) {
          best_pos = obj;
          pos = run;
        }
      } else if (obj < best_neg) {
        best_neg = obj;
        neg = run;
      }
    }
  }

  if (!pos && !neg) {
    outcome.status = any_feasible_point ? PlacementStatus::no_convergence
                                        : PlacementStatus::empty_constraint_set;
    return outcome;
  }
  if (!pos || !neg ||
      (pos->z - neg->z).norm() < 1e-6 * r.rc) {
    outcome.status = PlacementStatus::degenerate_second;
    return outcome;
  }
  outcome.status = PlacementStatus::converged;
  outcome.first = detail::assemble_solution(r, *pos);
  outcome.second = detail::assemble_solution(r, *neg);
  return outcome;
}

// Candidate vertices generated from a placement minimizer. The first
// candidate is the data point nearest the minimizer (reusing an existing
// vertex when that data point already backs one). When the far vertex of an
// adjacent front edge lies within merge_tol of the first candidate, that
// vertex is offered first so small future triangles are avoided.
enum class CandidateStatus { ok, minimizer_too_far };

struct CandidateVertex {
  std::optional<int> existing_id;
  std::int64_t data_index = -1;
  Vector coords;
};

struct CandidateResult {
  CandidateStatus status = CandidateStatus::ok;
  std::vector<CandidateVertex> candidates;
};

inline CandidateResult candidate_vertices(const PlacementSolution& solution,
                                          const PointCloud& cloud,
                                          const Complex& complex,
                                          const EdgeKey& active_edge,
                                          double accept_tol, double merge_tol) {
  CandidateResult result;
  const auto [nearest_index, nearest_dist] = cloud.nearest(solution.minimizer);
  if (nearest_dist > accept_tol) {
    result.status = CandidateStatus::minimizer_too_far;
    return result;
  }

  CandidateVertex first;
  first.data_index = nearest_index;
  first.coords = cloud.point(nearest_index);
  first.existing_id = complex.vertex_for_source(nearest_index);

  // the nearest data point may be an active-edge vertex; no triangle can be
  // built from it
  if (first.existing_id &&
      (*first.existing_id == active_edge.first ||
       *first.existing_id == active_edge.second)) {
    result.status = CandidateStatus::minimizer_too_far;
    return result;
  }

  std::optional<CandidateVertex> merge;
  double merge_dist = 0.0;
  for (const auto& [nb, angle] : complex.adjacent_front_edges(active_edge)) {
    const int shared = (nb.first == active_edge.first ||
                        nb.first == active_edge.second)
                           ? nb.first
                           : nb.second;
    const int far = nb.first == shared ? nb.second : nb.first;
    if (first.existing_id && far == *first.existing_id) continue;
    const double d = (complex.vertex(far).coords - first.coords).norm();
    if (d <= merge_tol && (!merge || d < merge_dist)) {
      merge_dist = d;
      CandidateVertex m;
      m.existing_id = far;
      m.data_index = complex.vertex(far).source_index;
      m.coords = complex.vertex(far).coords;
      merge = m;
    }
  }

  if (merge) result.candidates.push_back(*merge);
  result.candidates.push_back(first);
  return result;
}

}  // namespace manifront
