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

// Analyses of the translation-invariant encoded resource: marker decoding,
// single-site entropies and adaptive local discrimination of two
// orthogonal codeword states.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrspace/linalg.hpp"
#include "corrspace/resources.hpp"
#include "corrspace/rng.hpp"
#include "corrspace/statevec.hpp"

namespace corrspace {

// ---------------------------------------------------------------------------
// Marker decoding
// ---------------------------------------------------------------------------

/// Offset t of a window of 2k + 1 Z outcomes. The only cyclic run of k zeros
/// followed by a one starts at k + t.
inline int decode_marker(const std::vector<int>& bits, int k) {
  const int n = 2 * k + 1;
  if (k < 1 || static_cast<int>(bits.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument, "marker window must hold 2k + 1 outcomes");
  }
  for (int b : bits) {
    if (b != 0 && b != 1) throw Error(ErrorCode::kInvalidArgument, "marker outcomes must be bits");
  }
  std::optional<int> found;
  for (int p = 0; p < n; ++p) {
    bool match = bits[static_cast<std::size_t>((p + k) % n)] == 1;
    for (int j = 0; j < k && match; ++j) match = bits[static_cast<std::size_t>((p + j) % n)] == 0;
    if (!match) continue;
    if (found) throw Error(ErrorCode::kInvalidBranch, "marker pattern appears more than once");
    found = p;
  }
  if (!found) throw Error(ErrorCode::kInvalidBranch, "marker pattern not found");
  return ((*found - k) % n + n) % n;
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

/// H_b(3 / (4k + 2))
inline double encoded_sz_prediction(int k) { return binary_entropy(3.0 / (4.0 * k + 2.0)); }

struct SiteEntropy {
  int site = 0;
  double s_z = 0;
  double s_vn = 0;
};

inline std::vector<SiteEntropy> site_entropies(const PureState& state) {
  const PureState psi = state.normalized();
  std::vector<SiteEntropy> out;
  for (int s = 0; s < psi.site_count(); ++s) {
    out.push_back({s, entropy_z(psi, s), entropy_vn(reduced_density(psi, {s}))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zero-diagonal basis
// ---------------------------------------------------------------------------

/// Unitary U with diag(U M U^dagger) = 0 for traceless 2x2 M.
///
/// With M = (a + i b).sigma and |e> of Bloch vector n, <e|M|e> = a.n + i b.n,
/// so n must be orthogonal to both a and b; |f> has Bloch vector -n. The rows
/// of U are <e| and <f|. Ties are broken towards n_z >= 0, then towards the
/// z axis, then the x axis.
inline Matrix zero_diagonal_basis(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != 2 || m.cols() != 2) throw Error(ErrorCode::kDimensionMismatch, "zero_diagonal_basis needs 2x2");
  const double scale = std::max(m.norm(), 1e-300);
  if (std::abs(m.trace()) > tol * scale) throw Error(ErrorCode::kInvalidArgument, "matrix is not traceless");
  const std::array<Matrix, 3> paulis = {gates::x(), gates::y(), gates::z()};
  Eigen::Vector3d a, b;
  for (int k = 0; k < 3; ++k) {
    const Complex c = (paulis[static_cast<std::size_t>(k)] * m).trace() / 2.0;
    a(k) = c.real();
    b(k) = c.imag();
  }
  Eigen::Vector3d n = a.cross(b);
  if (n.norm() <= 1e-12 * std::max(1.0, a.norm() * b.norm())) {
    const Eigen::Vector3d d = a.norm() >= b.norm() ? a : b;
    const Eigen::Vector3d z(0, 0, 1), x(1, 0, 0);
    if (d.norm() == 0) {
      n = z;
    } else {
      const Eigen::Vector3d u = d.normalized();
      n = z - z.dot(u) * u;
      if (n.norm() < 1e-8) n = x - x.dot(u) * u;
    }
  }
  n.normalize();
  if (n(2) < 0 || (n(2) == 0 && (n(0) < 0 || (n(0) == 0 && n(1) < 0)))) n = -n;
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  Vector e(2), f(2);
  e << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  f << -std::polar(std::sin(theta / 2), -phi), std::cos(theta / 2);
  f = canonical_phase(Matrix(f)).col(0);
  Matrix u(2, 2);
  u.row(0) = e.adjoint();
  u.row(1) = f.adjoint();
  return u;
}

// ---------------------------------------------------------------------------
// Adaptive local discrimination
// ---------------------------------------------------------------------------

/// psi_0 |O_k> + psi_1 |W_k>
inline Vector codeword_state(const Vector& logical, int k) {
  if (logical.size() != 2) throw Error(ErrorCode::kDimensionMismatch, "logical state must have 2 amplitudes");
  return logical(0) * codeword_zero(k) + logical(1) * codeword_one(k);
}

struct WalgateStep {
  int site = 0;
  Matrix basis;  // rows are the bras of the two outcomes
  int outcome = 0;
  double probability = 0;  // conditional on the earlier steps
};

struct WalgateBranch {
  std::vector<WalgateStep> steps;
  int logical = 0;  // 0 for psi, 1 for psi-perp
  double probability = 0;
  PureState post_state;  // normalized, the measured sites removed
};

namespace detail {

/// <u| on the first (most significant) qubit of v.
inline Vector contract_first(const Vector& v, const Vector& u) {
  const Eigen::Index half = v.size() / 2;
  return std::conj(u(0)) * v.head(half) + std::conj(u(1)) * v.tail(half);
}

/// Tr_rest |beta><alpha| as an operator on the first qubit.
inline Matrix first_site_overlap(const Vector& alpha, const Vector& beta) {
  const Eigen::Index half = alpha.size() / 2;
  Matrix a(2, half), b(2, half);
  a.row(0) = alpha.head(half).transpose();
  a.row(1) = alpha.tail(half).transpose();
  b.row(0) = beta.head(half).transpose();
  b.row(1) = beta.tail(half).transpose();
  return b * a.adjoint();
}

}  // namespace detail

/// Distinguishes psi from psi-perp, both given as codeword coefficients, on
/// the codeword qubits `sites` (left to right) of `state`. Each step
/// measures one site in a basis for which the two conditional residuals
/// stay orthogonal, so the final outcome names the logical state without
/// error. Returns every branch of nonzero probability, or one sampled
/// branch when `rng` is given.
inline std::vector<WalgateBranch> walgate_discriminate(const PureState& state, const std::vector<int>& sites,
                                                       const Vector& psi, Rng* rng = nullptr, double tol = 1e-9) {
  const int k = static_cast<int>(sites.size());
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "walgate needs at least one site");
  for (int s : sites) {
    if (s < 0 || s >= state.site_count() || state.dims()[static_cast<std::size_t>(s)] != 2) {
      throw Error(ErrorCode::kInvalidArgument, "walgate sites must be qubits of the state");
    }
  }
  if (std::abs(psi.norm() - 1) > tol) throw Error(ErrorCode::kInvalidArgument, "logical state must be normalized");
  Vector perp(2);
  perp << -std::conj(psi(1)), std::conj(psi(0));
  const Vector alpha0 = codeword_state(psi, k), beta0 = codeword_state(perp, k);

  std::vector<WalgateBranch> out;
  struct Node {
    std::vector<WalgateStep> steps;
    PureState state;  // projected, unnormalized, sites kept
    Vector alpha, beta;
    double probability;
  };
  const double total = state.amps().squaredNorm();
  std::vector<Node> stack = {{{}, state, alpha0, beta0, 1.0}};
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const int j = static_cast<int>(node.steps.size());
    if (j == k) {
      const double na = std::abs(node.alpha(0)), nb = std::abs(node.beta(0));
      if (std::min(na, nb) > tol * std::max(na, nb)) {
        throw Error(ErrorCode::kOrthogonalityLost, "both logical branches survive the last step");
      }
      WalgateBranch br{node.steps, na >= nb ? 0 : 1, node.probability, {}};
      PureState reduced = node.state;
      std::vector<std::pair<int, Vector>> kets;
      for (const auto& st : node.steps) kets.emplace_back(st.site, st.basis.row(st.outcome).adjoint());
      std::sort(kets.begin(), kets.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
      for (const auto& [s, ket] : kets) reduced = project_out(reduced, s, ket);
      br.post_state = reduced.normalized();
      out.push_back(std::move(br));
      continue;
    }
    const Matrix u = zero_diagonal_basis(detail::first_site_overlap(node.alpha, node.beta),
                                         std::max(tol, 1e-12) * 1e3);
    const double here = node.state.amps().squaredNorm();
    std::vector<Node> children;
    std::vector<double> weights;
    for (int o = 0; o < 2; ++o) {
      const Vector ket = u.row(o).adjoint();
      PureState next = apply_gate(node.state, {sites[static_cast<std::size_t>(j)]}, ket * ket.adjoint());
      const double w = next.amps().squaredNorm();
      weights.push_back(here > 0 ? w / here : 0.0);
      Node child{node.steps, std::move(next), detail::contract_first(node.alpha, ket),
                 detail::contract_first(node.beta, ket), w / total};
      const double overlap = std::abs(child.alpha.dot(child.beta));
      if (overlap > tol * node.alpha.norm() * node.beta.norm()) {
        throw Error(ErrorCode::kOrthogonalityLost, "conditional residuals are not orthogonal");
      }
      child.steps.push_back({sites[static_cast<std::size_t>(j)], u, o, weights.back()});
      children.push_back(std::move(child));
    }
    if (rng) {
      const int o = rng->uniform() < weights[0] ? 0 : 1;
      if (weights[static_cast<std::size_t>(o)] <= 1e-14) throw Error(ErrorCode::kZeroProbability, "sampled a null branch");
      stack.push_back(std::move(children[static_cast<std::size_t>(o)]));
    } else {
      for (int o = 1; o >= 0; --o) {
        if (weights[static_cast<std::size_t>(o)] > 1e-14) stack.push_back(std::move(children[static_cast<std::size_t>(o)]));
      }
    }
  }
  return out;
}

/// Codeword qubits of block `b` in the untranslated layout.
inline std::vector<int> codeword_sites(const EncodedResourceSpec& spec, int block, int offset = 0) {
  std::vector<int> out;
  const int n = spec.qubit_count();
  for (int j = 0; j < spec.k; ++j) out.push_back(((block * spec.block_length() + j + offset) % n + n) % n);
  return out;
}

}  // namespace corrspace
