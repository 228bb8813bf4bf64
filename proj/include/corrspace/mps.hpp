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

#include <map>
#include <utility>
#include <vector>

#include "corrspace/linalg.hpp"
#include "corrspace/statevec.hpp"

namespace corrspace {

/// One-dimensional matrix product state
///
///   |Psi> = sum_s <R| A_n[s_n] ... A_1[s_1] |L> |s_1 ... s_n>
///
/// Site 0 is the leftmost physical site and its matrix acts first on |L>.
/// Every A_j[s] is a D x D operator on correlation space. Physical
/// dimensions may vary per site.
class MpsChain {
 public:
  MpsChain(std::vector<std::vector<Matrix>> sites, Vector left, Vector right)
      : sites_(std::move(sites)), left_(std::move(left)), right_(std::move(right)) {
    validate();
  }

  /// Translation-invariant chain of n copies of `site`.
  static MpsChain uniform(int n, const std::vector<Matrix>& site, Vector left, Vector right) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "chain needs at least one site");
    return MpsChain(std::vector<std::vector<Matrix>>(static_cast<std::size_t>(n), site),
                    std::move(left), std::move(right));
  }

  int size() const { return static_cast<int>(sites_.size()); }
  int bond_dim() const { return static_cast<int>(left_.size()); }
  int phys_dim(int site) const { return static_cast<int>(sites_.at(static_cast<std::size_t>(site)).size()); }
  const std::vector<Matrix>& site(int j) const { return sites_.at(static_cast<std::size_t>(j)); }
  const Vector& left() const { return left_; }
  const Vector& right() const { return right_; }

  std::vector<int> phys_dims() const {
    std::vector<int> d;
    for (const auto& s : sites_) d.push_back(static_cast<int>(s.size()));
    return d;
  }

  MpsChain with_site(int j, std::vector<Matrix> matrices) const {
    auto sites = sites_;
    sites.at(static_cast<std::size_t>(j)) = std::move(matrices);
    return MpsChain(std::move(sites), left_, right_);
  }

  MpsChain with_boundaries(Vector left, Vector right) const {
    return MpsChain(sites_, std::move(left), std::move(right));
  }

  /// Sites [from, size()) with a new left boundary.
  MpsChain suffix(int from, Vector left) const {
    std::vector<std::vector<Matrix>> sites(sites_.begin() + from, sites_.end());
    return MpsChain(std::move(sites), std::move(left), right_);
  }

 private:
  void validate() const {
    if (sites_.empty()) throw Error(ErrorCode::kInvalidArgument, "chain needs at least one site");
    const auto bond = left_.size();
    if (bond == 0 || right_.size() != bond) {
      throw Error(ErrorCode::kDimensionMismatch, "boundary vectors must share the bond dimension");
    }
    if (left_.norm() == 0 || right_.norm() == 0) {
      throw Error(ErrorCode::kInvalidArgument, "boundary vectors must be nonzero");
    }
    for (const auto& s : sites_) {
      if (s.empty()) throw Error(ErrorCode::kInvalidArgument, "site with no physical states");
      for (const Matrix& m : s) {
        if (m.rows() != bond || m.cols() != bond) {
          throw Error(ErrorCode::kDimensionMismatch, "site matrices must be D x D");
        }
        if (!all_finite(m)) throw Error(ErrorCode::kInvalidArgument, "non-finite site matrix");
      }
    }
  }

  std::vector<std::vector<Matrix>> sites_;
  Vector left_;
  Vector right_;
};

/// <R| A[s_n] ... A[s_1] |L>
inline Complex amplitude(const MpsChain& chain, const std::vector<int>& outcomes) {
  if (static_cast<int>(outcomes.size()) != chain.size()) {
    throw Error(ErrorCode::kInvalidArgument, "amplitude: outcome count must equal site count");
  }
  Vector v = chain.left();
  for (int j = 0; j < chain.size(); ++j) {
    const int s = outcomes[static_cast<std::size_t>(j)];
    if (s < 0 || s >= chain.phys_dim(j)) {
      throw Error(ErrorCode::kInvalidArgument, "amplitude: outcome out of range");
    }
    v = chain.site(j)[static_cast<std::size_t>(s)] * v;
  }
  return chain.right().dot(v);
}

struct ExpandedState {
  PureState state;      // unnormalized unless requested
  double norm = 0.0;    // norm of the unnormalized expansion
};

inline ExpandedState to_statevector(const MpsChain& chain, bool normalize = false) {
  const std::vector<int> dims = chain.phys_dims();
  checked_space_size(dims);
  // Rows: prefix configurations; columns: correlation-space components.
  Matrix prefix = chain.left().transpose();
  for (int j = 0; j < chain.size(); ++j) {
    const auto& mats = chain.site(j);
    const auto d = static_cast<Eigen::Index>(mats.size());
    Matrix next(prefix.rows() * d, prefix.cols());
    for (Eigen::Index p = 0; p < prefix.rows(); ++p) {
      for (Eigen::Index s = 0; s < d; ++s) {
        next.row(p * d + s) = (mats[static_cast<std::size_t>(s)] * prefix.row(p).transpose()).transpose();
      }
    }
    prefix = std::move(next);
  }
  Vector amps = prefix * chain.right().conjugate();
  const double n = amps.norm();
  if (normalize) {
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "chain state vanishes");
    amps /= n;
  }
  return {PureState(dims, std::move(amps)), n};
}

/// A[phi] = sum_s <phi|s> A[s]; phi is supplied as a ket.
inline Matrix project_local(const MpsChain& chain, int site, const Vector& phi) {
  if (site < 0 || site >= chain.size()) throw Error(ErrorCode::kInvalidArgument, "site out of range");
  if (phi.size() != chain.phys_dim(site)) {
    throw Error(ErrorCode::kDimensionMismatch, "project_local: ket dimension");
  }
  if (phi.norm() == 0) throw Error(ErrorCode::kInvalidArgument, "project_local: zero vector");
  Matrix out = Matrix::Zero(chain.bond_dim(), chain.bond_dim());
  for (Eigen::Index s = 0; s < phi.size(); ++s) {
    out += std::conj(phi(s)) * chain.site(site)[static_cast<std::size_t>(s)];
  }
  return out;
}

/// State on the sites not listed in `fixed`, with each fixed site contracted
/// against its ket. Unnormalized.
inline PureState conditional_state(const MpsChain& chain, const std::map<int, Vector>& fixed) {
  MpsChain reduced = chain;
  for (const auto& [site, ket] : fixed) {
    reduced = reduced.with_site(site, {project_local(chain, site, ket)});
  }
  ExpandedState full = to_statevector(reduced);
  std::vector<int> dims;
  for (int j = 0; j < chain.size(); ++j) {
    if (!fixed.count(j)) dims.push_back(chain.phys_dim(j));
  }
  return PureState(std::move(dims), full.state.amps());
}

/// E[j] is the environment of sites j..n-1: E[n] = |R><R| and
/// E[j] = sum_s A_j[s]^dagger E[j+1] A_j[s]. The weight of a correlation
/// vector v entering site j is v^dagger E[j] v.
inline std::vector<Matrix> right_environments(const MpsChain& chain) {
  std::vector<Matrix> env(static_cast<std::size_t>(chain.size() + 1));
  env.back() = chain.right() * chain.right().adjoint();
  for (int j = chain.size() - 1; j >= 0; --j) {
    Matrix e = Matrix::Zero(chain.bond_dim(), chain.bond_dim());
    for (const Matrix& a : chain.site(j)) e += a.adjoint() * env[static_cast<std::size_t>(j + 1)] * a;
    // Keep the scale bounded on long chains; only ratios are used.
    const double scale = e.cwiseAbs().maxCoeff();
    env[static_cast<std::size_t>(j)] = scale > 0 ? Matrix(e / scale) : e;
  }
  return env;
}

namespace detail {

inline void check_observable(const Matrix& obs, int d) {
  if (obs.rows() != d || obs.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "observable must be d x d");
  }
  if (!is_hermitian(obs, 1e-12)) {
    throw Error(ErrorCode::kInvalidArgument, "observable must be Hermitian");
  }
}

inline double expectation(const PureState& psi, const std::vector<std::pair<int, Matrix>>& ops) {
  PureState phi = psi;
  for (const auto& [site, op] : ops) phi = apply_gate(phi, {site}, op);
  return psi.amps().dot(phi.amps()).real();
}

}  // namespace detail

/// Connected correlator <O_i O_{i+r}> - <O_i><O_{i+r}> of the normalized
/// state, evaluated on the dense expansion. Sites are 0-based.
inline double two_point_correlation(const MpsChain& chain, const Matrix& obs, int i, int r) {
  if (i < 0 || r < 1 || i + r >= chain.size()) {
    throw Error(ErrorCode::kInvalidArgument, "two_point_correlation: sites out of range");
  }
  detail::check_observable(obs, chain.phys_dim(i));
  detail::check_observable(obs, chain.phys_dim(i + r));
  const PureState psi = to_statevector(chain, true).state;
  const double oi = detail::expectation(psi, {{i, obs}});
  const double oj = detail::expectation(psi, {{i + r, obs}});
  const double oij = detail::expectation(psi, {{i, obs}, {i + r, obs}});
  return oij - oi * oj;
}

/// Transfer-operator evaluation of <prod_j O_j>: the left density matrix is
/// swept through the chain, with O_j inserted where given.
inline Complex transfer_expectation(const MpsChain& chain, const std::map<int, Matrix>& ops) {
  Matrix rho = chain.left() * chain.left().adjoint();
  Matrix norm_rho = rho;
  for (int j = 0; j < chain.size(); ++j) {
    const auto& a = chain.site(j);
    const auto d = static_cast<int>(a.size());
    Matrix next = Matrix::Zero(rho.rows(), rho.cols());
    Matrix next_norm = Matrix::Zero(rho.rows(), rho.cols());
    auto it = ops.find(j);
    for (int s = 0; s < d; ++s) {
      next_norm += a[static_cast<std::size_t>(s)] * norm_rho * a[static_cast<std::size_t>(s)].adjoint();
      for (int t = 0; t < d; ++t) {
        const Complex w = it == ops.end() ? Complex(s == t ? 1.0 : 0.0) : it->second(s, t);
        if (w == Complex{}) continue;
        next += w * a[static_cast<std::size_t>(t)] * rho * a[static_cast<std::size_t>(s)].adjoint();
      }
    }
    const double scale = next_norm.cwiseAbs().maxCoeff();
    rho = next / scale;
    norm_rho = next_norm / scale;
  }
  const Complex num = chain.right().dot(rho * chain.right());
  const Complex den = chain.right().dot(norm_rho * chain.right());
  return num / den;
}

/// Same correlator as two_point_correlation via transfer operators; usable
/// on chains beyond the dense cap.
inline double two_point_correlation_transfer(const MpsChain& chain, const Matrix& obs, int i, int r) {
  if (i < 0 || r < 1 || i + r >= chain.size()) {
    throw Error(ErrorCode::kInvalidArgument, "two_point_correlation: sites out of range");
  }
  detail::check_observable(obs, chain.phys_dim(i));
  const double oi = transfer_expectation(chain, {{i, obs}}).real();
  const double oj = transfer_expectation(chain, {{i + r, obs}}).real();
  const double oij = transfer_expectation(chain, {{i, obs}, {i + r, obs}}).real();
  return oij - oi * oj;
}

/// Correlation-space state carried along the chain while sites are measured.
struct CorrelationState {
  Vector vec;
  std::vector<Matrix> log;
  bool annihilated = false;
};

inline CorrelationState make_correlation_state(const Vector& v) { return {v, {}, v.norm() == 0}; }

/// vec <- op * vec; the applied operator is appended to the log.
inline CorrelationState evolve(const CorrelationState& state, const Matrix& op) {
  if (op.cols() != state.vec.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "evolve: operator does not match correlation space");
  }
  CorrelationState out = state;
  out.vec = op * state.vec;
  out.log.push_back(op);
  out.annihilated = out.vec.norm() <= 1e-300;
  return out;
}

}  // namespace corrspace
