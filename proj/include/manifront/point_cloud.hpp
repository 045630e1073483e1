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
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "manifront/types.hpp"

namespace manifront {

namespace detail {

// Static kd-tree over low-dimensional projections. Only used as a pruning
// device: every query is verified with exact ambient-space distances, so the
// tree never decides anything on its own.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(const Matrix& pts) : pts_(pts) {
    const int n = static_cast<int>(pts.cols());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * n);
    root_ = build(0, n);
  }

  // Indices of points with projected distance <= radius, unsorted.
  void radius_candidates(const Vector& center, double radius,
                         std::vector<int>& out) const {
    out.clear();
    if (root_ >= 0) collect(root_, center, radius * radius, out);
  }

  // Index of some point near the query (projected metric); used only to get
  // an initial exact-distance upper bound.
  int approximate_nearest(const Vector& center) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    descend(root_, center, best, best_d2);
    return best;
  }

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(int lo, int hi) {
    if (lo >= hi) return -1;
    // split on the widest axis of this subset
    const int dim = static_cast<int>(pts_.rows());
    int axis = 0;
    double widest = -1.0;
    for (int a = 0; a < dim; ++a) {
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (int i = lo; i < hi; ++i) {
        const double v = pts_(a, order_[i]);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (mx - mn > widest) {
        widest = mx - mn;
        axis = a;
      }
    }
    const int mid = (lo + hi) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid,
                     order_.begin() + hi, [&](int a, int b) {
                       const double va = pts_(axis, a), vb = pts_(axis, b);
                       return va < vb || (va == vb && a < b);
                     });
    Node node;
    node.point = order_[mid];
    node.axis = axis;
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    nodes_[self].left = build(lo, mid);
    nodes_[self].right = build(mid + 1, hi);
    return self;
  }

  void collect(int id, const Vector& c, double r2, std::vector<int>& out) const {
    const Node& node = nodes_[id];
    const double d2 = (pts_.col(node.point) - c).squaredNorm();
    if (d2 <= r2) out.push_back(node.point);
    const double split = pts_(node.axis, node.point);
    const double delta = c[node.axis] - split;
    if (node.left >= 0 && (delta <= 0.0 || delta * delta <= r2))
      collect(node.left, c, r2, out);
    if (node.right >= 0 && (delta >= 0.0 || delta * delta <= r2))
      collect(node.right, c, r2, out);
  }

  void descend(int id, const Vector& c, int& best, double& best_d2) const {
    if (id < 0) return;
    const Node& node = nodes_[id];
    const double d2 = (pts_.col(node.point) - c).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = node.point;
    }
    const double delta = c[node.axis] - pts_(node.axis, node.point);
    const int near = delta <= 0.0 ? node.left : node.right;
    const int far = delta <= 0.0 ? node.right : node.left;
    descend(near, c, best, best_d2);
    if (far >= 0 && delta * delta < best_d2) descend(far, c, best, best_d2);
  }

  Matrix pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace detail

// Immutable point set with exact Euclidean queries. High ambient dimension
// defeats direct space partitioning, so the index projects points onto their
// top principal components, prunes in the projected space (projection never
// increases distances) and verifies every candidate in the ambient space.
// Clouds below the threshold just use a linear scan.
class PointCloud {
 public:
  static constexpr int kIndexThreshold = 2000;
  static constexpr int kProjectionDims = 3;

  explicit PointCloud(Matrix points) : pts_(std::move(points)) {
    if (pts_.cols() == 0) throw std::invalid_argument("empty point cloud");
    if (static_cast<int>(pts_.cols()) >= kIndexThreshold) build_index();
  }

  int dim() const { return static_cast<int>(pts_.rows()); }
  int size() const { return static_cast<int>(pts_.cols()); }
  const Matrix& points() const { return pts_; }
  Vector point(int i) const { return pts_.col(i); }

  // All indices i with |x_i - center| <= radius, ascending.
  std::vector<int> radius_query(const Vector& center, double radius) const {
    check_dim(center);
    std::vector<int> result;
    if (indexed_) {
      const Vector proj = project(center);
      std::vector<int> candidates;
      index_.radius_candidates(proj, radius * (1.0 + 1e-12), candidates);
      for (int i : candidates)
        if ((pts_.col(i) - center).norm() <= radius) result.push_back(i);
      std::sort(result.begin(), result.end());
    } else {
      for (int i = 0; i < size(); ++i)
        if ((pts_.col(i) - center).norm() <= radius) result.push_back(i);
    }
    return result;
  }

  // Index and distance of the point nearest the query; ties broken by
  // smallest index.
  std::pair<int, double> nearest(const Vector& query) const {
    check_dim(query);
    if (!indexed_) return nearest_scan(query);

    const Vector proj = project(query);
    const int guess = index_.approximate_nearest(proj);
    const double bound = (pts_.col(guess) - query).norm();
    // every point at true distance <= bound has projected distance <= bound
    std::vector<int> candidates;
    index_.radius_candidates(proj, bound * (1.0 + 1e-12), candidates);
    int best = guess;
    double best_d = bound;
    std::sort(candidates.begin(), candidates.end());
    for (int i : candidates) {
      const double d = (pts_.col(i) - query).norm();
      if (d < best_d || (d == best_d && i < best)) {
        best_d = d;
        best = i;
      }
    }
    return {best, best_d};
  }

  // Index j != center_index whose distance to the center point is closest to
  // the target; ties broken by smallest index. Called a handful of times per
  // run, so a scan is fine.
  int nearest_at_distance(int center_index, double target) const {
    const Vector center = pts_.col(center_index);
    int best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
      if (i == center_index) continue;
      const double gap = std::abs((pts_.col(i) - center).norm() - target);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    return best;
  }

 private:
  void check_dim(const Vector& v) const {
    if (v.size() != pts_.rows())
      throw DimensionMismatch("query dimension does not match cloud");
  }

  std::pair<int, double> nearest_scan(const Vector& query) const {
    int best = 0;
    double best_d = (pts_.col(0) - query).norm();
    for (int i = 1; i < size(); ++i) {
      const double d = (pts_.col(i) - query).norm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return {best, best_d};
  }

  void build_index() {
    const int k = std::min<int>(kProjectionDims, dim());
    mean_ = pts_.rowwise().mean();
    Matrix centered = pts_.colwise() - mean_;
    Matrix cov = centered * centered.transpose() / double(size());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    basis_ = solver.eigenvectors().rightCols(k);  // top-k principal axes
    index_ = detail::KdTree(basis_.transpose() * centered);
    indexed_ = true;
  }

  Vector project(const Vector& x) const {
    return basis_.transpose() * (x - mean_);
  }

  Matrix pts_;  // dim x size, one point per column
  bool indexed_ = false;
  Vector mean_;
  Matrix basis_;
  detail::KdTree index_;
};

}  // namespace manifront
