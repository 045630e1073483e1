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

#include "manifront/types.hpp"

namespace manifront {

// Factored form of the local direction covariance matrix at a vertex: each
// column is a unit direction toward a neighbor scaled by 1/sqrt(m), so the
// implied matrix P = D * D^T is PSD with trace exactly 1 and never has to be
// formed densely.
struct DirectionFactor {
  Matrix columns;  // ambient_dim x count
  Vector center;
  int count = 0;
};

// Low-rank eigenrepresentation of P together with the regularization mu.
// Quadratic forms in (P + mu I)^(-1) are evaluated in O(rank * dim) through
// the kept eigenpairs; everything orthogonal to them is penalized by 1/mu.
struct LocalMetric {
  Matrix eigvecs;  // ambient_dim x rank, orthonormal columns
  Vector eigvals;  // rank entries, descending, all > 0
  double mu = 0.0;
  Vector center;
  int ambient_dim = 0;

  int rank() const { return static_cast<int>(eigvals.size()); }
};

constexpr double kCoincidentTol = 1e-12;

// Builds the direction factor from a vertex and its neighboring data points.
// Neighbors closer than kCoincidentTol to the vertex (duplicated data rows,
// or the vertex's own data point) are dropped.
inline DirectionFactor build_direction_factor(const Vector& vertex,
                                              const Matrix& neighbors) {
  const int dim = static_cast<int>(vertex.size());
  if (neighbors.rows() != dim)
    throw DimensionMismatch("neighbor dimension does not match vertex");

  const int total = static_cast<int>(neighbors.cols());
  Matrix dirs(dim, total);
  int kept = 0;
  for (int i = 0; i < total; ++i) {
    Vector d = neighbors.col(i) - vertex;
    const double norm = d.norm();
    if (norm <= kCoincidentTol) continue;
    dirs.col(kept++) = d / norm;
  }
  if (kept == 0)
    throw EmptyNeighborhood(
        "deleted neighborhood of the vertex contains no data points");

  DirectionFactor factor;
  factor.columns = dirs.leftCols(kept) / std::sqrt(static_cast<double>(kept));
  factor.center = vertex;
  factor.count = kept;
  return factor;
}

// Eigendecomposition of P = D D^T through the m x m Gram matrix D^T D, whose
// nonzero eigenvalues coincide with P's. Eigenvectors of P are recovered as
// u_i = D w_i / sigma_i, then re-orthonormalized by one modified Gram-Schmidt
// pass to wash out roundoff from small sigmas. Cost O(dim * m^2 + m^3); no
// dim x dim matrix is ever formed.
inline LocalMetric eigendecompose(const DirectionFactor& factor, double mu,
                                  double drop_tol = 1e-10) {
  const int dim = static_cast<int>(factor.columns.rows());
  const int m = factor.count;

  Matrix gram = factor.columns.transpose() * factor.columns;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Gram eigendecomposition failed");

  const Vector& vals = solver.eigenvalues();  // ascending
  const double lambda_max = vals[m - 1];
  const double cutoff = drop_tol * lambda_max;

  int rank = 0;
  for (int i = m - 1; i >= 0; --i) {
    if (vals[i] >= cutoff && vals[i] > 0.0) ++rank;
    else break;
  }

  LocalMetric metric;
  metric.eigvals = Vector(rank);
  metric.eigvecs = Matrix(dim, rank);
  metric.mu = mu;
  metric.center = factor.center;
  metric.ambient_dim = dim;

  for (int r = 0; r < rank; ++r) {
    const int i = m - 1 - r;  // descending order
    metric.eigvals[r] = vals[i];
    metric.eigvecs.col(r) =
        factor.columns * solver.eigenvectors().col(i) / std::sqrt(vals[i]);
  }

  // MGS polish + deterministic sign convention (largest entry positive).
  for (int r = 0; r < rank; ++r) {
    Vector u = metric.eigvecs.col(r);
    for (int p = 0; p < r; ++p)
      u -= metric.eigvecs.col(p).dot(u) * metric.eigvecs.col(p);
    u.normalize();
    int imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u[imax] < 0.0) u = -u;
    metric.eigvecs.col(r) = u;
  }
  return metric;
}

// Fast quadratic form x^T (P + mu I)^(-1) x through the kept eigenpairs:
//   y = V^T x,  result = y^T (Lambda + mu I)^(-1) y + (|x|^2 - |y|^2) / mu.
inline double q_form(const LocalMetric& metric, const Vector& x) {
  if (x.size() != metric.ambient_dim)
    throw DimensionMismatch("q_form argument dimension mismatch");
  const Vector y = metric.eigvecs.transpose() * x;
  double result = 0.0;
  for (int i = 0; i < metric.rank(); ++i)
    result += y[i] * y[i] / (metric.eigvals[i] + metric.mu);
  result += (x.squaredNorm() - y.squaredNorm()) / metric.mu;
  return result < 0.0 ? 0.0 : result;
}

// Quadratic form of the displacement from the metric's center vertex,
// (v - c)^T (P + mu I)^(-1) (v - c).
inline double q_form_displaced(const LocalMetric& metric, const Vector& v) {
  if (v.size() != metric.ambient_dim)
    throw DimensionMismatch("q_form_displaced argument dimension mismatch");
  return q_form(metric, v - metric.center);
}

// Matrix action (P + mu I)^(-1) x, used by the placement solver to build
// reduced quadratics. Same O(rank * dim) structure as q_form.
inline Vector q_apply(const LocalMetric& metric, const Vector& x) {
  if (x.size() != metric.ambient_dim)
    throw DimensionMismatch("q_apply argument dimension mismatch");
  const Vector y = metric.eigvecs.transpose() * x;
  Vector scaled(metric.rank());
  for (int i = 0; i < metric.rank(); ++i)
    scaled[i] = y[i] / (metric.eigvals[i] + metric.mu);
  return metric.eigvecs * scaled + (x - metric.eigvecs * y) / metric.mu;
}

}  // namespace manifront
