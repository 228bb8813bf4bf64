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

#include <string>
#include <vector>

#include "corrspace/linalg.hpp"

namespace corrspace {

enum class BasisKind { kZ, kX, kY, kPhase, kAkltPhase };

inline const char* basis_kind_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::kZ: return "Z";
    case BasisKind::kX: return "X";
    case BasisKind::kY: return "Y";
    case BasisKind::kPhase: return "Phase";
    case BasisKind::kAkltPhase: return "AkltPhase";
  }
  return "?";
}

inline BasisKind basis_kind_from_name(const std::string& name) {
  if (name == "Z") return BasisKind::kZ;
  if (name == "X") return BasisKind::kX;
  if (name == "Y") return BasisKind::kY;
  if (name == "Phase") return BasisKind::kPhase;
  if (name == "AkltPhase") return BasisKind::kAkltPhase;
  throw Error(ErrorCode::kParse, "unknown basis kind '" + name + "'");
}

/// Local projective measurement basis. Outcome j corresponds to kets()[j];
/// for two-outcome bases outcome 0 is the +1 eigenvector.
///
///   Phase(phi):      (|0> +- e^{i phi}|1>)/sqrt2
///   AkltPhase(phi):  |0>, (|1> +- e^{i phi}|2>)/sqrt2
///   Z on a qutrit (dim = 3) is the computational basis.
struct BasisSpec {
  BasisKind kind = BasisKind::kZ;
  double phi = 0.0;
  int dim = 2;

  static BasisSpec z(int dim = 2) { return {BasisKind::kZ, 0.0, dim}; }
  static BasisSpec x() { return {BasisKind::kX, 0.0, 2}; }
  static BasisSpec y() { return {BasisKind::kY, 0.0, 2}; }
  static BasisSpec phase(double phi) { return {BasisKind::kPhase, phi, 2}; }
  static BasisSpec aklt_phase(double phi) { return {BasisKind::kAkltPhase, phi, 3}; }

  int site_dim() const { return kind == BasisKind::kAkltPhase ? 3 : (kind == BasisKind::kZ ? dim : 2); }
  int outcome_count() const { return site_dim(); }

  std::vector<Vector> kets() const {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<Vector> out;
    switch (kind) {
      case BasisKind::kZ:
        for (int j = 0; j < dim; ++j) out.push_back(basis_ket(dim, j));
        break;
      case BasisKind::kX:
        out.push_back(Vector(2));
        out.back() << r, r;
        out.push_back(Vector(2));
        out.back() << r, -r;
        break;
      case BasisKind::kY:
        out.push_back(Vector(2));
        out.back() << r, kI * r;
        out.push_back(Vector(2));
        out.back() << r, -kI * r;
        break;
      case BasisKind::kPhase: {
        const Complex e = std::polar(1.0, phi);
        out.push_back(Vector(2));
        out.back() << r, e * r;
        out.push_back(Vector(2));
        out.back() << r, -e * r;
        break;
      }
      case BasisKind::kAkltPhase: {
        const Complex e = std::polar(1.0, phi);
        out.push_back(basis_ket(3, 0));
        out.push_back(Vector(3));
        out.back() << 0, r, e * r;
        out.push_back(Vector(3));
        out.back() << 0, r, -e * r;
        break;
      }
    }
    return out;
  }

  std::vector<Matrix> projectors() const {
    std::vector<Matrix> out;
    for (const Vector& k : kets()) out.push_back(k * k.adjoint());
    return out;
  }

  bool operator==(const BasisSpec&) const = default;
};

/// Basis whose branch operators on a qubit chain carry S(alpha) = diag(1, e^{i alpha}).
/// With the <phi|s> coefficient convention a Phase(phi) ket induces S(-phi).
inline BasisSpec qubit_basis_inducing_sphi(double alpha) { return BasisSpec::phase(-alpha); }

/// AKLT counterpart: the two non-|0> kets of AkltPhase(-alpha) induce X S(alpha)
/// and X Z S(alpha).
inline BasisSpec aklt_basis_inducing_sphi(double alpha) { return BasisSpec::aklt_phase(-alpha); }

}  // namespace corrspace
