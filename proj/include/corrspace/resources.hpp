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

#include <utility>
#include <vector>

#include "corrspace/linalg.hpp"
#include "corrspace/mps.hpp"
#include "corrspace/statevec.hpp"

namespace corrspace {

inline Vector ket_plus() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

inline Vector ket_minus() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return v;
}

// ---------------------------------------------------------------------------
// One-dimensional families
// ---------------------------------------------------------------------------

/// A[s] = G(k)|s><s| with |L> = |+> and |R> = G(k)^{-1}|+>.
inline MpsChain correlation_chain(int k, int n) {
  const Matrix g = gates::g(k);
  std::vector<Matrix> site;
  for (int s = 0; s < 2; ++s) {
    const Vector e = basis_ket(2, s);
    site.push_back(g * e * e.adjoint());
  }
  return MpsChain::uniform(n, site, ket_plus(), g.adjoint() * ket_plus());
}

/// Spin-1 chain with A[0] = H, A[1] = (X - iY)/sqrt2, A[2] = (X + iY)/sqrt2.
/// Boundaries default to |0>, |0>.
inline MpsChain aklt_type_chain(int n, Vector left = basis_ket(2, 0), Vector right = basis_ket(2, 0)) {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> site = {gates::h(), r * (gates::x() - kI * gates::y()),
                              r * (gates::x() + kI * gates::y())};
  return MpsChain::uniform(n, site, std::move(left), std::move(right));
}

/// Product-state chain |+>^n written with rank-one matrices A[s] = <s|+> |u><u|.
inline MpsChain product_chain(int n) {
  const Vector u = basis_ket(2, 0);
  const Matrix p = u * u.adjoint();
  const double r = 1.0 / std::sqrt(2.0);
  return MpsChain::uniform(n, {r * p, r * p}, u, u);
}

/// Linear cluster state: A[s] = H|s><s|, |L> = |+>, |R> = |0>.
inline MpsChain cluster_chain(int n) {
  std::vector<Matrix> site;
  for (int s = 0; s < 2; ++s) {
    const Vector e = basis_ket(2, s);
    site.push_back(gates::h() * e * e.adjoint());
  }
  return MpsChain::uniform(n, site, ket_plus(), basis_ket(2, 0));
}

// ---------------------------------------------------------------------------
// Weighted graph states
// ---------------------------------------------------------------------------

struct GraphEdge {
  int u = 0;
  int v = 0;
  double phase = kPi;
};

/// Grid graph; vertex (r, c) has index r * cols + c.
struct WeightedGraph {
  int rows = 0;
  int cols = 0;
  std::vector<GraphEdge> edges;

  int vertex_count() const { return rows * cols; }
  int index(int r, int c) const { return r * cols + c; }
};

/// Horizontal controlled-pi edges along every row and controlled-pi/2 edges
/// joining (r, c) to (r +- 1, c + 1).
inline WeightedGraph weighted_graph(int rows, int cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::kInvalidArgument, "lattice needs rows, cols >= 1");
  WeightedGraph g{rows, cols, {}};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) g.edges.push_back({g.index(r, c), g.index(r, c + 1), kPi});
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      g.edges.push_back({g.index(r, c), g.index(r + 1, c + 1), kPi / 2});
      g.edges.push_back({g.index(r + 1, c), g.index(r, c + 1), kPi / 2});
    }
  }
  return g;
}

inline void validate_edges(int vertices, const std::vector<GraphEdge>& edges) {
  for (const auto& e : edges) {
    if (e.u == e.v) throw Error(ErrorCode::kInvalidArgument, "graph edge is a self-loop");
    if (e.u < 0 || e.v < 0 || e.u >= vertices || e.v >= vertices) {
      throw Error(ErrorCode::kInvalidArgument, "graph edge references a missing vertex");
    }
  }
}

/// CPhase(phase) on every edge applied to |+>^V.
inline PureState graph_state(int vertices, const std::vector<GraphEdge>& edges) {
  validate_edges(vertices, edges);
  checked_space_size(std::vector<int>(static_cast<std::size_t>(vertices), 2));
  PureState psi = PureState::uniform_plus(vertices);
  for (const auto& e : edges) psi = apply_gate(psi, {e.u, e.v}, gates::cphase(e.phase));
  return psi;
}

inline PureState weighted_graph_state(const WeightedGraph& g) {
  return graph_state(g.vertex_count(), g.edges);
}

/// Unweighted graph state: every edge carries CPhase(pi).
inline PureState cluster_state(int vertices, const std::vector<std::pair<int, int>>& edges) {
  std::vector<GraphEdge> weighted;
  for (const auto& [u, v] : edges) weighted.push_back({u, v, kPi});
  return graph_state(vertices, weighted);
}

inline std::vector<std::pair<int, int>> chain_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int j = 0; j + 1 < n; ++j) e.emplace_back(j, j + 1);
  return e;
}

// ---------------------------------------------------------------------------
// Translation-invariant encoded resource
// ---------------------------------------------------------------------------

struct EncodedResourceSpec {
  int k = 1;  // codeword length; blocks have 2k + 1 qubits
  int m = 1;  // number of blocks / logical qubits
  std::vector<std::pair<int, int>> base_edges;  // logical cluster graph; empty -> chain

  int block_length() const { return 2 * k + 1; }
  int qubit_count() const { return m * block_length(); }
  std::vector<std::pair<int, int>> logical_edges() const {
    return base_edges.empty() ? chain_edges(m) : base_edges;
  }
};

inline void validate(const EncodedResourceSpec& spec) {
  if (spec.k < 1 || spec.m < 1) throw Error(ErrorCode::kInvalidArgument, "encoded resource needs k, m >= 1");
  checked_space_size(std::vector<int>(static_cast<std::size_t>(spec.qubit_count()), 2));
}

/// |O_k> = |0...0>
inline Vector codeword_zero(int k) { return basis_ket(1 << k, 0); }

/// |W_k> = k^{-1/2} sum of single-excitation strings
inline Vector codeword_one(int k) {
  Vector w = Vector::Zero(1 << k);
  for (int j = 0; j < k; ++j) w(1 << j) = 1.0 / std::sqrt(static_cast<double>(k));
  return w;
}

/// Rear k + 1 marker qubits |0,...,0,1>.
inline Vector marker_state(int k) { return basis_ket(1 << (k + 1), 1); }

/// Encodes an m-qubit logical state blockwise: each logical qubit becomes
/// (|0> -> |O_k>, |1> -> |W_k>) followed by the marker qubits.
inline PureState encode_logical(const Vector& logical, int k, int m) {
  if (logical.size() != (Eigen::Index{1} << m)) {
    throw Error(ErrorCode::kDimensionMismatch, "logical state must have 2^m amplitudes");
  }
  const int block = 2 * k + 1;
  checked_space_size(std::vector<int>(static_cast<std::size_t>(m * block), 2));
  const Vector zero_block = kron(codeword_zero(k), marker_state(k));
  const Vector one_block = kron(codeword_one(k), marker_state(k));
  Vector out = Vector::Zero(Eigen::Index{1} << (m * block));
  for (Eigen::Index x = 0; x < logical.size(); ++x) {
    if (logical(x) == Complex{}) continue;
    Vector term = Vector::Ones(1);
    for (int j = 0; j < m; ++j) {
      const bool bit = (x >> (m - 1 - j)) & 1;
      term = kron(term, bit ? one_block : zero_block);
    }
    out += logical(x) * term;
  }
  return PureState(std::vector<int>(static_cast<std::size_t>(m * block), 2), std::move(out));
}

inline Vector logical_cluster(const EncodedResourceSpec& spec) {
  return cluster_state(spec.m, spec.logical_edges()).amps();
}

/// The untranslated encoded cluster with markers.
inline PureState encoded_phi(const EncodedResourceSpec& spec) {
  validate(spec);
  return encode_logical(logical_cluster(spec), spec.k, spec.m);
}

/// sum_{t=0}^{2k} T^t |phi>, normalized, on a cyclic line of m(2k+1) qubits.
inline PureState encoded_resource(const EncodedResourceSpec& spec) {
  const PureState phi = encoded_phi(spec);
  Vector sum = phi.amps();
  for (int t = 1; t < spec.block_length(); ++t) sum += translate(phi, t).amps();
  return PureState(phi.dims(), sum).normalized();
}

}  // namespace corrspace
