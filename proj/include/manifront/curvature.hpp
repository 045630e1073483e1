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
#include <cmath>
#include <string>
#include <vector>

#include "manifront/local_metric.hpp"
#include "manifront/types.hpp"

namespace manifront {

// Validation-only module: the continuum limit of the local direction
// covariance on a quadratic surface has closed-form eigenvalue and
// eigenvector expansions in the search radius, which anchor the correctness
// of the discrete metric machinery. Nothing in the triangulation pipeline
// calls this.

// Quadratic surface through the origin with normal e3:
//   0 = m11 x1^2 + m22 x2^2 + m13 x1 x3 + m23 x2 x3 + m33 x3^2 + x3.
struct QuadraticSurface {
  double m11 = 0.0, m22 = 0.0, m13 = 0.0, m23 = 0.0, m33 = 0.0;
};

struct CurvatureSummary {
  double kappa1 = 0.0;  // principal curvature along x1
  double kappa2 = 0.0;  // principal curvature along x2
  double kappa_bar = 0.0;
  double search_radius = 0.0;
};

inline CurvatureSummary curvature_summary(const QuadraticSurface& s,
                                          double r_s) {
  CurvatureSummary c;
  c.kappa1 = -2.0 * s.m11;
  c.kappa2 = -2.0 * s.m22;
  c.kappa_bar = 0.5 * (c.kappa1 + c.kappa2);
  c.search_radius = r_s;
  return c;
}

// Signed curvature of the normal section along (cos t, sin t, 0).
inline double signed_curvature(const QuadraticSurface& s, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  return -2.0 * (s.m11 * ct * ct + s.m22 * st * st);
}

// Leading-order expansion coefficients of the continuum covariance in the
// search radius.
struct ExpansionCoefficients {
  double a11, a22, a13, a23, a33;
};

inline ExpansionCoefficients expansion_coefficients(
    const QuadraticSurface& s) {
  ExpansionCoefficients a{};
  const double sum = s.m11 + s.m22;
  a.a11 = -(sum * sum + 4.0 * s.m11 * s.m11) / 32.0;
  a.a22 = -(sum * sum + 4.0 * s.m22 * s.m22) / 32.0;
  a.a13 = s.m13 * (3.0 * s.m11 + s.m22) / 16.0;
  a.a23 = s.m23 * (s.m11 + 3.0 * s.m22) / 16.0;
  a.a33 = (3.0 * s.m11 * s.m11 + 2.0 * s.m11 * s.m22 +
           3.0 * s.m22 * s.m22) / 16.0;
  return a;
}

// Truncated eigenvalues {1/2 + a11 r^2, 1/2 + a22 r^2, a33 r^2}.
inline Eigen::Vector3d truncated_eigenvalues(const QuadraticSurface& s,
                                             double r_s) {
  const ExpansionCoefficients a = expansion_coefficients(s);
  const double r2 = r_s * r_s;
  return {0.5 + a.a11 * r2, 0.5 + a.a22 * r2, a.a33 * r2};
}

// Truncated dominant eigenvectors e1 + 2 a13 r^2 e3 and e2 + 2 a23 r^2 e3,
// normalized.
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> truncated_eigenvectors(
    const QuadraticSurface& s, double r_s) {
  const ExpansionCoefficients a = expansion_coefficients(s);
  const double r2 = r_s * r_s;
  Eigen::Vector3d u1(1.0, 0.0, 2.0 * a.a13 * r2);
  Eigen::Vector3d u2(0.0, 1.0, 2.0 * a.a23 * r2);
  return {u1.normalized(), u2.normalized()};
}

namespace detail {

// Height of the surface branch through the origin over the tangent plane,
// from the stable quadratic root.
inline double surface_height(const QuadraticSurface& s, double x1, double x2) {
  const double a = s.m33;
  const double b = 1.0 + s.m13 * x1 + s.m23 * x2;
  const double c = s.m11 * x1 * x1 + s.m22 * x2 * x2;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0 || b <= 0.0)
    throw PatchNotGraph("surface is not a graph over the requested patch");
  return -2.0 * c / (b + std::sqrt(disc));
}

// Area-element weight sqrt(1 + |grad h|^2) by implicit differentiation.
inline double area_weight(const QuadraticSurface& s, double x1, double x2,
                          double z) {
  const double fx1 = 2.0 * s.m11 * x1 + s.m13 * z;
  const double fx2 = 2.0 * s.m22 * x2 + s.m23 * z;
  const double fx3 = s.m13 * x1 + s.m23 * x2 + 2.0 * s.m33 * z + 1.0;
  if (std::abs(fx3) < 1e-10)
    throw PatchNotGraph("vertical tangent inside the patch");
  const double gs = -fx1 / fx3, gt = -fx2 / fx3;
  return std::sqrt(1.0 + gs * gs + gt * gt);
}

// Parameter-space radius at which the surface point leaves the search sphere,
// along a fixed direction. The ambient norm dominates the parameter radius,
// so the root is bracketed by [0, r_s].
inline double patch_extent(const QuadraticSurface& s, double phi, double r_s) {
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  auto excess = [&](double rho) {
    const double x1 = rho * cphi, x2 = rho * sphi;
    const double z = surface_height(s, x1, x2);
    return std::sqrt(rho * rho + z * z) - r_s;
  };
  double lo = 0.0, hi = r_s;
  if (excess(hi) < 0.0) return hi;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Gauss-Legendre nodes and weights on (0, 1).
inline void gauss_legendre_unit(int n, std::vector<double>& nodes,
                                std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-based initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp) ;
  }
}

inline Eigen::Matrix3d covariance_quadrature(const QuadraticSurface& s,
                                             double r_s, int n_phi,
                                             int n_rho) {
  std::vector<double> nodes, weights;
  gauss_legendre_unit(n_rho, nodes, weights);

  Eigen::Matrix3d numerator = Eigen::Matrix3d::Zero();
  double denominator = 0.0;
  for (int j = 0; j < n_phi; ++j) {
    const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
    const double rho_max = patch_extent(s, phi, r_s);
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    for (int i = 0; i < n_rho; ++i) {
      const double rho = rho_max * nodes[i];
      const double x1 = rho * cphi, x2 = rho * sphi;
      const double z = surface_height(s, x1, x2);
      const Eigen::Vector3d x(x1, x2, z);
      const double norm2 = x.squaredNorm();
      const double w =
          area_weight(s, x1, x2, z) * rho * rho_max * weights[i];
      if (norm2 > 0.0) numerator += (x * x.transpose() / norm2) * w;
      denominator += w;
    }
  }
  return numerator / denominator;
}

}  // namespace detail

// Continuum local direction covariance of the surface patch inside the search
// sphere of radius r_s about the origin, by tensor quadrature (uniform angular
// grid, Gauss-Legendre radially). The resolution is doubled until the matrix
// stops moving; the trace equals 1 by construction of the normalized
// quadrature.
inline Eigen::Matrix3d continuum_covariance(const QuadraticSurface& s,
                                            double r_s, int resolution = 64) {
  if (resolution < 64) resolution = 64;
  Eigen::Matrix3d prev =
      detail::covariance_quadrature(s, r_s, resolution, resolution / 2);
  for (int pass = 0; pass < 5; ++pass) {
    resolution *= 2;
    const Eigen::Matrix3d next =
        detail::covariance_quadrature(s, r_s, resolution, resolution / 2);
    const double drift = (next - prev).cwiseAbs().maxCoeff();
    prev = next;
    if (drift < 1e-11) break;
  }
  return prev;
}

// Residuals of the truncated expansions against the quadrature covariance,
// per search radius. Both eigenvalue and eigenvector residuals must decay as
// the fourth power of the radius.
struct ExpansionResidualRow {
  double r_s = 0.0;
  double eigenvalue_residual = 0.0;   // |sorted quadrature - sorted truncated|
  double eigenvector_residual = 0.0;  // max_i |(P - lambda_i I) u_i|
};

struct ExpansionResidualReport {
  std::vector<ExpansionResidualRow> rows;

  // empirical convergence orders between consecutive radii
  std::vector<double> eigenvalue_orders() const { return orders(false); }
  std::vector<double> eigenvector_orders() const { return orders(true); }

  std::string to_text() const {
    std::string out =
        "# r_s  eigenvalue_residual  eigenvector_residual\n";
    char buf[128];
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof(buf), "%.6g %.12g %.12g\n", row.r_s,
                    row.eigenvalue_residual, row.eigenvector_residual);
      out += buf;
    }
    return out;
  }

 private:
  std::vector<double> orders(bool vec) const {
    std::vector<double> result;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
      const double num = vec ? rows[i].eigenvector_residual
                             : rows[i].eigenvalue_residual;
      const double den = vec ? rows[i + 1].eigenvector_residual
                             : rows[i + 1].eigenvalue_residual;
      result.push_back(std::log(num / den) /
                       std::log(rows[i].r_s / rows[i + 1].r_s));
    }
    return result;
  }
};

inline ExpansionResidualReport eigen_expansion_check(
    const QuadraticSurface& s, const std::vector<double>& radii,
    int resolution = 64) {
  ExpansionResidualReport report;
  for (const double r : radii) {
    const Eigen::Matrix3d p = continuum_covariance(s, r, resolution);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(p);

    Eigen::Vector3d quad = solver.eigenvalues().reverse();  // descending
    Eigen::Vector3d trunc = truncated_eigenvalues(s, r);
    std::sort(trunc.data(), trunc.data() + 3, std::greater<double>());

    ExpansionResidualRow row;
    row.r_s = r;
    row.eigenvalue_residual = (quad - trunc).norm();

    const auto [u1, u2] = truncated_eigenvectors(s, r);
    const Eigen::Vector3d lam = truncated_eigenvalues(s, r);
    const double res1 =
        (p * u1 - lam[0] * u1).norm();
    const double res2 =
        (p * u2 - lam[1] * u2).norm();
    row.eigenvector_residual = std::max(res1, res2);
    report.rows.push_back(row);
  }
  return report;
}

// Comparison of the discrete covariance built from area-uniform samples on
// the patch with the continuum quadrature; the spectral deviation decays as
// 1/sqrt(samples).
struct DiscreteDeviationReport {
  double deviation = 0.0;  // spectral norm of the difference
  int samples = 0;
  Eigen::Matrix3d discrete = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d continuum = Eigen::Matrix3d::Zero();
};

inline DiscreteDeviationReport discrete_vs_continuum(const QuadraticSurface& s,
                                                     double r_s,
                                                     int sample_count,
                                                     std::uint64_t rng_seed) {
  if (sample_count < 1000)
    throw std::invalid_argument("need at least 1000 samples");

  // envelope for rejection sampling of the area density
  double w_max = 0.0;
  const int grid = 129;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double x1 = r_s * (2.0 * i / (grid - 1) - 1.0);
      const double x2 = r_s * (2.0 * j / (grid - 1) - 1.0);
      try {
        const double z = detail::surface_height(s, x1, x2);
        if (x1 * x1 + x2 * x2 + z * z > r_s * r_s) continue;
        w_max = std::max(w_max, detail::area_weight(s, x1, x2, z));
      } catch (const PatchNotGraph&) {
        continue;
      }
    }
  }
  w_max *= 1.5;

  Rng rng(rng_seed);
  Matrix samples(3, sample_count);
  int kept = 0;
  while (kept < sample_count) {
    const double x1 = rng.uniform(-r_s, r_s);
    const double x2 = rng.uniform(-r_s, r_s);
    const double z = detail::surface_height(s, x1, x2);
    if (x1 * x1 + x2 * x2 + z * z > r_s * r_s) continue;
    if (rng.uniform() * w_max > detail::area_weight(s, x1, x2, z)) continue;
    samples.col(kept++) << x1, x2, z;
  }

  DiscreteDeviationReport report;
  report.samples = sample_count;
  const DirectionFactor factor =
      build_direction_factor(Vector::Zero(3), samples);
  report.discrete = factor.columns * factor.columns.transpose();
  report.continuum = continuum_covariance(s, r_s);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(report.discrete -
                                                        report.continuum);
  report.deviation = solver.eigenvalues().cwiseAbs().maxCoeff();
  return report;
}

}  // namespace manifront
