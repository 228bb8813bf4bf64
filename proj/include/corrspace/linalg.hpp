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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "corrspace/errors.hpp"

namespace corrspace {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;  // GateMatrix: square by convention
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultTol = 1e-9;
inline constexpr Complex kI{0.0, 1.0};

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": matrix must be square and non-empty");
  }
}

inline Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

inline Vector basis_ket(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gate constants
// ---------------------------------------------------------------------------

namespace gates {

inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix h() {
  Matrix m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

/// diag(1, e^{i phi})
inline Matrix sphi(double phi) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, phi);
  return m;
}

inline Matrix s() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = kI;
  return m;
}

/// exp(i pi/k X) = cos(pi/k) 1 + i sin(pi/k) X. Requires k > 2.
inline Matrix g(int k) {
  if (k <= 2) {
    throw Error(ErrorCode::kInvalidArgument, "G(k) requires an integer k > 2");
  }
  const double a = kPi / k;
  return std::cos(a) * identity(2) + kI * std::sin(a) * x();
}

/// Controlled phase: diag(1, 1, 1, e^{i phi}) in |q0 q1> order.
inline Matrix cphase(double phi) {
  Matrix m = identity(4);
  m(3, 3) = std::polar(1.0, phi);
  return m;
}

inline Matrix cz() { return cphase(kPi); }

/// Looks up "X", "Y", "Z", "H", "S", "I", "Gk" (e.g. "G3"), "CZ".
inline Matrix by_name(const std::string& name) {
  if (name == "I") return identity(2);
  if (name == "X") return x();
  if (name == "Y") return y();
  if (name == "Z") return z();
  if (name == "H") return h();
  if (name == "S") return s();
  if (name == "CZ") return cz();
  if (name.size() > 1 && name[0] == 'G') {
    std::size_t pos = 0;
    int k = 0;
    try {
      k = std::stoi(name.substr(1), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos + 1 == name.size()) return g(k);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown gate name '" + name + "'");
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Predicates and phase handling
// ---------------------------------------------------------------------------

inline bool is_unitary(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - identity(static_cast<int>(m.rows())))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

/// True when m is a nonzero multiple of a unitary.
inline bool is_scaled_unitary(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  const double scale2 = m.squaredNorm() / static_cast<double>(m.rows());
  if (scale2 <= 0) return false;
  return is_unitary(m / std::sqrt(scale2), tol);
}

inline bool is_hermitian(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Index (column-major data offset) of the first entry whose modulus is
/// within tol of the maximum, scanning in row-major order.
inline Eigen::Index leading_entry(const Matrix& m, double tol = kDefaultTol) {
  const double max_abs = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) >= max_abs - tol) return j * m.rows() + i;
    }
  }
  return 0;
}

/// Scales by a unit phase so the first largest-modulus entry is real positive.
inline Matrix canonical_phase(const Matrix& m, double tol = kDefaultTol) {
  if (m.size() == 0) return m;
  const Complex lead = m.data()[leading_entry(m, tol)];
  if (std::abs(lead) == 0) return m;
  return m * (std::abs(lead) / lead);
}

/// Divides out the scale so that m^dagger m averages to the identity.
inline Matrix unit_scale(const Matrix& m) {
  const double scale2 = m.squaredNorm() / static_cast<double>(m.rows());
  if (scale2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "unit_scale: zero matrix");
  }
  return m / std::sqrt(scale2);
}

/// Returns theta with a = e^{i theta} b entrywise within tol, or nullopt.
inline std::optional<double> proportional_up_to_phase(
    const Matrix& a, const Matrix& b, double tol = kDefaultTol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "proportional_up_to_phase: shape mismatch");
  }
  if (b.cwiseAbs().maxCoeff() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "proportional_up_to_phase: zero reference matrix");
  }
  const Complex overlap = (b.adjoint() * a).trace();
  const double theta = std::abs(overlap) > 0 ? std::arg(overlap) : 0.0;
  const Matrix diff = a - std::polar(1.0, theta) * b;
  if (diff.cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return theta;
}

/// Same as proportional_up_to_phase after rescaling both to unit scale.
inline std::optional<double> equal_up_to_scale(const Matrix& a,
                                               const Matrix& b,
                                               double tol = kDefaultTol) {
  if (a.cwiseAbs().maxCoeff() == 0) return std::nullopt;
  return proportional_up_to_phase(unit_scale(a), unit_scale(b), tol);
}

/// min over theta of || a/|a| - e^{i theta} b/|b| ||_F with unit-scale inputs.
inline double phase_distance(const Matrix& a, const Matrix& b) {
  const Matrix ua = unit_scale(a);
  const Matrix ub = unit_scale(b);
  const Complex overlap = (ub.adjoint() * ua).trace();
  const double theta = std::abs(overlap) > 0 ? std::arg(overlap) : 0.0;
  return (ua - std::polar(1.0, theta) * ub).norm();
}

/// Principal Hermitian-involution rotation exp(-i theta T / 2).
inline Matrix rotation(const Matrix& axis, double theta) {
  const int dim = static_cast<int>(axis.rows());
  return std::cos(theta / 2) * identity(dim) -
         kI * std::sin(theta / 2) * axis;
}

}  // namespace corrspace
