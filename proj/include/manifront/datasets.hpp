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

#include <cmath>
#include <stdexcept>
#include <string>

#include "manifront/types.hpp"

namespace manifront {

// Synthetic benchmark surfaces. Every sampler draws parameters with density
// proportional to the surface area element, so points are uniform with
// respect to area.
struct ManifoldSpec {
  enum class Kind { sphere, torus, swiss_roll, creased_sheet };
  Kind kind = Kind::sphere;

  // sphere
  double radius = 4.0;
  // torus: center-circle and tube radii
  double major_radius = 4.0;
  double minor_radius = 1.0;
  // swiss roll: (tau, kappa*theta*cos(theta), kappa*theta*sin(theta))
  double kappa = 0.5;
  double tau_max = 6.0;
  double theta_max = 4.0 * M_PI;
  // creased sheet: width x height rectangle folded along the midline of the
  // long side, rotated out of plane by crease_angle
  double width = 8.5;
  double height = 11.0;
  double crease_angle = 0.8;

  static ManifoldSpec sphere(double a) {
    ManifoldSpec s;
    s.kind = Kind::sphere;
    s.radius = a;
    if (a <= 0) throw std::invalid_argument("sphere radius must be positive");
    return s;
  }
  static ManifoldSpec torus(double big_r, double small_r) {
    ManifoldSpec s;
    s.kind = Kind::torus;
    s.major_radius = big_r;
    s.minor_radius = small_r;
    if (!(big_r > small_r && small_r > 0))
      throw std::invalid_argument("torus radii must satisfy R > r > 0");
    return s;
  }
  static ManifoldSpec swiss_roll(double kappa, double tau_max,
                                 double theta_max) {
    ManifoldSpec s;
    s.kind = Kind::swiss_roll;
    s.kappa = kappa;
    s.tau_max = tau_max;
    s.theta_max = theta_max;
    if (kappa <= 0 || tau_max <= 0 || theta_max <= 0)
      throw std::invalid_argument("swiss roll parameters must be positive");
    return s;
  }
  static ManifoldSpec creased_sheet(double width, double height,
                                    double crease_angle) {
    ManifoldSpec s;
    s.kind = Kind::creased_sheet;
    s.width = width;
    s.height = height;
    s.crease_angle = crease_angle;
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("sheet dimensions must be positive");
    if (!(crease_angle > 0 && crease_angle < M_PI))
      throw std::invalid_argument("crease angle must lie in (0, pi)");
    return s;
  }
};

// Area-uniform samples on the manifold, one 3-vector per column.
inline Matrix sample_manifold(const ManifoldSpec& spec, int count,
                              std::uint64_t rng_seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  Rng rng(rng_seed);
  Matrix pts(3, count);

  switch (spec.kind) {
    case ManifoldSpec::Kind::sphere: {
      // dS = a^2 sin(v) du dv: u uniform, v = arccos(1 - 2s)
      const double a = spec.radius;
      for (int i = 0; i < count; ++i) {
        const double u = rng.uniform(0.0, 2.0 * M_PI);
        const double v = std::acos(1.0 - 2.0 * rng.uniform());
        pts.col(i) << a * std::cos(u) * std::sin(v),
            a * std::sin(u) * std::sin(v), a * std::cos(v);
      }
      break;
    }
    case ManifoldSpec::Kind::torus: {
      // dS = r (R + r cos(phi)) du dphi: rejection in the tube angle
      const double big_r = spec.major_radius, small_r = spec.minor_radius;
      for (int i = 0; i < count; ++i) {
        double phi;
        do {
          phi = rng.uniform(0.0, 2.0 * M_PI);
        } while (rng.uniform() * (big_r + small_r) >
                 big_r + small_r * std::cos(phi));
        const double u = rng.uniform(0.0, 2.0 * M_PI);
        const double ring = big_r + small_r * std::cos(phi);
        pts.col(i) << ring * std::cos(u), ring * std::sin(u),
            small_r * std::sin(phi);
      }
      break;
    }
    case ManifoldSpec::Kind::swiss_roll: {
      // dS = kappa sqrt(1 + theta^2) dtheta dtau: rejection in theta with a
      // flat envelope at theta_max
      const double envelope = std::sqrt(1.0 + spec.theta_max * spec.theta_max);
      for (int i = 0; i < count; ++i) {
        double theta;
        do {
          theta = rng.uniform(0.0, spec.theta_max);
        } while (rng.uniform() * envelope > std::sqrt(1.0 + theta * theta));
        const double tau = rng.uniform(0.0, spec.tau_max);
        pts.col(i) << tau, spec.kappa * theta * std::cos(theta),
            spec.kappa * theta * std::sin(theta);
      }
      break;
    }
    case ManifoldSpec::Kind::creased_sheet: {
      // uniform on the flat sheet, then the far half is folded about the
      // crease line (an isometry, so uniformity is preserved)
      const double half = spec.height / 2.0;
      const double ca = std::cos(spec.crease_angle);
      const double sa = std::sin(spec.crease_angle);
      for (int i = 0; i < count; ++i) {
        const double sx = rng.uniform(0.0, spec.width);
        const double sy = rng.uniform(0.0, spec.height);
        if (sy <= half) {
          pts.col(i) << sx, sy, 0.0;
        } else {
          const double t = sy - half;
          pts.col(i) << sx, half + t * ca, t * sa;
        }
      }
      break;
    }
  }
  return pts;
}

// Perturbs every point by scale * (independent standard normal draws).
inline Matrix add_noise(const Matrix& points, double sigma_scale,
                        std::uint64_t rng_seed) {
  if (sigma_scale < 0)
    throw std::invalid_argument("noise scale must be nonnegative");
  if (sigma_scale == 0.0) return points;
  Rng rng(rng_seed);
  Matrix noisy = points;
  for (int i = 0; i < noisy.cols(); ++i)
    for (int r = 0; r < noisy.rows(); ++r)
      noisy(r, i) += sigma_scale * rng.normal();
  return noisy;
}

// Three orthonormal directions in an N-dimensional space; the 3D manifold
// coordinates become the weights of their linear combination. Orthonormality
// makes the embedding an isometry, so distances computed in the ambient
// space equal the original 3D distances.
struct EmbeddingBasis {
  Matrix basis;  // ambient_dim x 3, orthonormal columns
  int ambient_dim = 0;
};

inline EmbeddingBasis random_embedding_basis(int ambient_dim,
                                             std::uint64_t rng_seed) {
  if (ambient_dim < 3)
    throw std::invalid_argument("ambient dimension must be at least 3");
  Rng rng(rng_seed);
  EmbeddingBasis eb;
  eb.ambient_dim = ambient_dim;
  eb.basis.resize(ambient_dim, 3);
  for (int c = 0; c < 3; ++c) {
    Vector v;
    double norm = 0.0;
    do {
      v = rng.normal_vector(ambient_dim);
      for (int p = 0; p < c; ++p) v -= eb.basis.col(p).dot(v) * eb.basis.col(p);
      norm = v.norm();
    } while (norm < 1e-8);
    eb.basis.col(c) = v / norm;
  }
  return eb;
}

inline Matrix embed(const Matrix& points3, const EmbeddingBasis& basis) {
  if (points3.rows() != 3)
    throw DimensionMismatch("embed expects 3-dimensional points");
  return basis.basis * points3;
}

inline Matrix unembed(const Matrix& points_nd, const EmbeddingBasis& basis) {
  if (points_nd.rows() != basis.ambient_dim)
    throw DimensionMismatch("unembed dimension mismatch");
  return basis.basis.transpose() * points_nd;
}

}  // namespace manifront
