// Copyright 2026 The corrspace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "corrspace/linalg.hpp"

namespace corrspace {

/// Seeded generator built on std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. Distributions are derived by hand from raw 64-bit
/// draws because the std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  int bit() { return static_cast<int>(next() >> 63); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int below(int n) {
    const auto k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

  double normal() {
    // Box-Muller; u1 bounded away from zero.
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Complex complex_normal() { return {normal(), normal()}; }

  /// Haar-random unitary via QR of a complex Ginibre matrix with the
  /// phases of R's diagonal fixed.
  Matrix haar_unitary(int dim) {
    Matrix z(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) z(i, j) = complex_normal() / std::sqrt(2.0);
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
      const Complex d = r(j, j);
      if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
  }

  Vector random_state(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_normal();
    return v.normalized();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace corrspace
