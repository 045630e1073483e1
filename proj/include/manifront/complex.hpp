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
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "manifront/types.hpp"

namespace manifront {

using EdgeKey = std::pair<int, int>;  // vertex ids, first < second

inline EdgeKey make_edge_key(int a, int b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

struct TopologyCounts {
  int vertices = 0;
  int edges = 0;
  int triangles = 0;
  int front_edges = 0;
  int euler = 0;
};

// The evolving triangulation: vertices, edges with owning-triangle lists and
// a viability flag, triangles, and the FILO stack of edges waiting to become
// active. Vertex ids are dense integers in insertion order and every
// container iterates in ascending key order, so runs are reproducible.
class Complex {
 public:
  struct Vertex {
    Vector coords;
    std::int64_t source_index = -1;  // index into the originating data set
  };

  struct EdgeRecord {
    std::array<int, 2> owners{-1, -1};
    int owner_count = 0;
    bool viable = true;
  };

  int add_vertex(Vector coords, std::int64_t source_index) {
    const int id = static_cast<int>(vertices_.size());
    vertices_.push_back({std::move(coords), source_index});
    if (source_index >= 0) source_to_vertex_[source_index] = id;
    return id;
  }

  // Inserts the triangle, creating any missing edges. Returns the newly
  // created edge keys in lexicographic order; the caller decides what to push
  // on the stack. Throws EdgeOverownership if an edge would gain a third
  // owner (use would_overown to test first).
  std::vector<EdgeKey> add_triangle(int v1, int v2, int v3) {
    std::array<int, 3> tri = sorted_triple(v1, v2, v3);
    for (int v : tri)
      if (v < 0 || v >= static_cast<int>(vertices_.size()))
        throw std::out_of_range("triangle vertex id out of range");
    if (tri[0] == tri[1] || tri[1] == tri[2])
      throw std::invalid_argument("triangle with repeated vertex");
    if (triangle_set_.count(tri))
      throw std::invalid_argument("triangle already present");

    const std::array<EdgeKey, 3> keys = {make_edge_key(tri[0], tri[1]),
                                         make_edge_key(tri[0], tri[2]),
                                         make_edge_key(tri[1], tri[2])};
    for (const EdgeKey& k : keys) {
      auto it = edges_.find(k);
      if (it != edges_.end() && it->second.owner_count >= 2)
        throw EdgeOverownership("edge would belong to three triangles");
    }

    const int tid = static_cast<int>(triangles_.size());
    triangles_.push_back(tri);
    triangle_set_.insert(tri);

    std::vector<EdgeKey> created;
    for (const EdgeKey& k : keys) {
      auto [it, inserted] = edges_.try_emplace(k);
      EdgeRecord& rec = it->second;
      rec.owners[rec.owner_count++] = tid;
      if (inserted) {
        created.push_back(k);
        incidence_[k.first].push_back(k);
        incidence_[k.second].push_back(k);
        ++front_count_;
      } else if (rec.owner_count == 2) {
        --front_count_;
      }
    }
    std::sort(created.begin(), created.end());
    return created;
  }

  bool has_triangle(int v1, int v2, int v3) const {
    return triangle_set_.count(sorted_triple(v1, v2, v3)) > 0;
  }

  // True if inserting the triangle would give some edge a third owner.
  bool would_overown(int v1, int v2, int v3) const {
    for (const EdgeKey& k :
         {make_edge_key(v1, v2), make_edge_key(v1, v3), make_edge_key(v2, v3)}) {
      auto it = edges_.find(k);
      if (it != edges_.end() && it->second.owner_count >= 2) return true;
    }
    return false;
  }

  void push_edges(const std::vector<EdgeKey>& keys) {
    edge_stack_.insert(edge_stack_.end(), keys.begin(), keys.end());
  }

  // Pops stack entries until the top is a current, viable front edge.
  // Returns nothing once the stack is exhausted.
  std::optional<EdgeKey> pop_active_front_edge() {
    while (!edge_stack_.empty()) {
      EdgeKey key = edge_stack_.back();
      edge_stack_.pop_back();
      auto it = edges_.find(key);
      if (it != edges_.end() && it->second.owner_count == 1 &&
          it->second.viable)
        return key;
    }
    return std::nullopt;
  }

  bool has_edge(const EdgeKey& key) const { return edges_.count(key) > 0; }

  bool is_front(const EdgeKey& key) const {
    auto it = edges_.find(key);
    return it != edges_.end() && it->second.owner_count == 1;
  }

  bool is_viable(const EdgeKey& key) const {
    return edges_.at(key).viable;
  }

  void set_viable(const EdgeKey& key, bool viable) {
    edges_.at(key).viable = viable;
  }

  // Stage transitions re-arm every edge (viability flags are only meaningful
  // within the stage that set them).
  void reset_viability() {
    for (auto& [key, rec] : edges_) rec.viable = true;
  }

  // Front edges in ascending key order.
  std::vector<EdgeKey> front_edges() const {
    std::vector<EdgeKey> result;
    for (const auto& [key, rec] : edges_)
      if (rec.owner_count == 1) result.push_back(key);
    return result;
  }

  int front_edge_count() const { return front_count_; }

  // Third vertex of the single triangle owning a front edge.
  int third_vertex(const EdgeKey& key) const {
    const EdgeRecord& rec = edges_.at(key);
    if (rec.owner_count != 1)
      throw std::logic_error("third_vertex requires a front edge");
    for (int v : triangles_[rec.owners[0]])
      if (v != key.first && v != key.second) return v;
    throw std::logic_error("corrupt triangle record");
  }

  // Front edges sharing exactly one vertex with the given front edge, each
  // with the Euclidean angle between the two edge vectors leaving the shared
  // vertex, in [0, pi]. Ascending key order.
  std::vector<std::pair<EdgeKey, double>> adjacent_front_edges(
      const EdgeKey& key) const {
    std::vector<std::pair<EdgeKey, double>> result;
    std::set<EdgeKey> seen;
    for (int shared : {key.first, key.second}) {
      auto inc = incidence_.find(shared);
      if (inc == incidence_.end()) continue;
      const int other_self = shared == key.first ? key.second : key.first;
      const Vector u = vertices_[other_self].coords - vertices_[shared].coords;
      for (const EdgeKey& nb : inc->second) {
        if (nb == key || !is_front(nb) || seen.count(nb)) continue;
        seen.insert(nb);
        const int other_nb = nb.first == shared ? nb.second : nb.first;
        const Vector w =
            vertices_[other_nb].coords - vertices_[shared].coords;
        const double c = u.dot(w) / (u.norm() * w.norm());
        result.emplace_back(nb, std::acos(std::clamp(c, -1.0, 1.0)));
      }
    }
    std::sort(result.begin(), result.end());
    return result;
  }

  TopologyCounts topology_counts() const {
    TopologyCounts t;
    t.vertices = static_cast<int>(vertices_.size());
    t.edges = static_cast<int>(edges_.size());
    t.triangles = static_cast<int>(triangles_.size());
    t.front_edges = front_count_;
    t.euler = t.vertices - t.edges + t.triangles;
    return t;
  }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  const Vertex& vertex(int id) const { return vertices_[id]; }
  const std::array<int, 3>& triangle(int id) const { return triangles_[id]; }
  const std::map<EdgeKey, EdgeRecord>& edges() const { return edges_; }

  // Vertex id backed by the given data point, if any.
  std::optional<int> vertex_for_source(std::int64_t source_index) const {
    auto it = source_to_vertex_.find(source_index);
    if (it == source_to_vertex_.end()) return std::nullopt;
    return it->second;
  }

  // Full structural sweep; throws on any violated invariant.
  void validate() const {
    int fronts = 0;
    std::set<int> edge_vertices;
    for (const auto& [key, rec] : edges_) {
      if (rec.owner_count < 1 || rec.owner_count > 2)
        throw std::logic_error("edge with owner count outside {1, 2}");
      if (rec.owner_count == 1) ++fronts;
      edge_vertices.insert(key.first);
      edge_vertices.insert(key.second);
      for (int i = 0; i < rec.owner_count; ++i) {
        const auto& tri = triangles_[rec.owners[i]];
        if (std::find(tri.begin(), tri.end(), key.first) == tri.end() ||
            std::find(tri.begin(), tri.end(), key.second) == tri.end())
          throw std::logic_error("edge owner does not contain the edge");
      }
    }
    if (fronts != front_count_)
      throw std::logic_error("tracked front count diverged from ownership");
    if (!triangles_.empty() &&
        edge_vertices.size() != vertices_.size())
      throw std::logic_error("isolated vertex");
    std::map<EdgeKey, int> owners_seen;
    for (const auto& tri : triangles_) {
      for (const EdgeKey& k : {make_edge_key(tri[0], tri[1]),
                               make_edge_key(tri[0], tri[2]),
                               make_edge_key(tri[1], tri[2])}) {
        if (!edges_.count(k))
          throw std::logic_error("triangle edge missing from edge set");
        ++owners_seen[k];
      }
    }
    for (const auto& [key, rec] : edges_)
      if (owners_seen[key] != rec.owner_count)
        throw std::logic_error("edge ownership count mismatch");
  }

 private:
  static std::array<int, 3> sorted_triple(int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
  }

  std::vector<Vertex> vertices_;
  std::map<EdgeKey, EdgeRecord> edges_;
  std::map<int, std::vector<EdgeKey>> incidence_;
  std::vector<std::array<int, 3>> triangles_;
  std::set<std::array<int, 3>> triangle_set_;
  std::vector<EdgeKey> edge_stack_;
  std::map<std::int64_t, int> source_to_vertex_;
  int front_count_ = 0;
};

}  // namespace manifront
