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

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace manifront {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Exceptions for contract violations. Recoverable per-edge failures inside the
// triangulation loop are reported through status enums instead (see
// placement.hpp and pipeline.hpp).
struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument(what) {}
};

struct EmptyNeighborhood : std::runtime_error {
  explicit EmptyNeighborhood(const std::string& what)
      : std::runtime_error(what) {}
};

struct EdgeOverownership : std::logic_error {
  explicit EdgeOverownership(const std::string& what)
      : std::logic_error(what) {}
};

struct DegenerateTriangle : std::invalid_argument {
  explicit DegenerateTriangle(const std::string& what)
      : std::invalid_argument(what) {}
};

struct EmptyComplex : std::runtime_error {
  explicit EmptyComplex(const std::string& what) : std::runtime_error(what) {}
};

struct SeedFailure : std::runtime_error {
  explicit SeedFailure(const std::string& what) : std::runtime_error(what) {}
};

struct PatchNotGraph : std::runtime_error {
  explicit PatchNotGraph(const std::string& what) : std::runtime_error(what) {}
};

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Seeded generator with hand-rolled distributions so that identical seeds give
// identical streams regardless of standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::int64_t uniform_int(std::int64_t n) {
    return static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(gen_()) *
         static_cast<unsigned __int128>(n)) >> 64);
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vector normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace manifront
