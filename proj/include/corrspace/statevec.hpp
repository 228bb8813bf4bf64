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

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "corrspace/basis.hpp"
#include "corrspace/linalg.hpp"
#include "corrspace/rng.hpp"

namespace corrspace {

inline constexpr std::size_t kDefaultOracleCap = std::size_t{1} << 20;

/// Amplitude cap for dense states; CORRSPACE_CAP overrides the default.
inline std::size_t oracle_cap() {
  if (const char* env = std::getenv("CORRSPACE_CAP")) {
    try {
      const unsigned long long v = std::stoull(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return kDefaultOracleCap;
}

inline std::size_t checked_space_size(const std::vector<int>& dims) {
  const std::size_t cap = oracle_cap();
  std::size_t total = 1;
  for (int d : dims) {
    if (d <= 0) throw Error(ErrorCode::kInvalidArgument, "site dims must be positive");
    total *= static_cast<std::size_t>(d);
    if (total > cap) {
      throw Error(ErrorCode::kCapExceeded,
                  "state space exceeds oracle cap of " + std::to_string(cap) + " amplitudes");
    }
  }
  return total;
}

/// Dense pure state over sites with the given local dimensions. Site 0 is
/// the most significant digit of the amplitude index.
class PureState {
 public:
  PureState() = default;

  PureState(std::vector<int> dims, Vector amps) : dims_(std::move(dims)), amps_(std::move(amps)) {
    if (checked_space_size(dims_) != static_cast<std::size_t>(amps_.size())) {
      throw Error(ErrorCode::kDimensionMismatch, "amplitude count does not match dims");
    }
  }

  static PureState product(const std::vector<Vector>& kets) {
    std::vector<int> dims;
    Vector amps = Vector::Ones(1);
    for (const Vector& k : kets) {
      dims.push_back(static_cast<int>(k.size()));
      checked_space_size(dims);
      amps = kron(amps, k);
    }
    return PureState(std::move(dims), std::move(amps));
  }

  static PureState uniform_plus(int n) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector plus(2);
    plus << r, r;
    return product(std::vector<Vector>(static_cast<std::size_t>(n), plus));
  }

  const std::vector<int>& dims() const { return dims_; }
  const Vector& amps() const { return amps_; }
  Vector& mutable_amps() { return amps_; }
  int site_count() const { return static_cast<int>(dims_.size()); }
  double norm() const { return amps_.norm(); }

  PureState normalized() const {
    const double n = norm();
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "cannot normalize zero state");
    return PureState(dims_, amps_ / n);
  }

  std::size_t stride(int site) const {
    std::size_t s = 1;
    for (int j = static_cast<int>(dims_.size()) - 1; j > site; --j) s *= static_cast<std::size_t>(dims_[j]);
    return s;
  }

  /// Digits of a flat index, site 0 first.
  std::vector<int> digits(std::size_t flat) const {
    std::vector<int> out(dims_.size());
    for (std::size_t j = dims_.size(); j-- > 0;) {
      out[j] = static_cast<int>(flat % static_cast<std::size_t>(dims_[j]));
      flat /= static_cast<std::size_t>(dims_[j]);
    }
    return out;
  }

  void check_site(int site) const {
    if (site < 0 || site >= site_count()) {
      throw Error(ErrorCode::kInvalidArgument, "site index out of range");
    }
  }

 private:
  std::vector<int> dims_;
  Vector amps_;
};

struct MeasurementResult {
  int outcome = 0;
  double probability = 0.0;
  PureState post_state;  // normalized; the measured site stays in its ket
};

inline double fidelity(const PureState& a, const PureState& b) {
  if (a.dims() != b.dims()) throw Error(ErrorCode::kDimensionMismatch, "fidelity: dims differ");
  const double na = a.amps().squaredNorm();
  const double nb = b.amps().squaredNorm();
  return std::norm(a.amps().dot(b.amps())) / (na * nb);
}

/// Applies gate to the listed sites; the first listed site is the most
/// significant digit of the gate's index.
inline PureState apply_gate(const PureState& state, const std::vector<int>& sites, const Matrix& gate) {
  std::size_t gdim = 1;
  for (int s : sites) {
    state.check_site(s);
    gdim *= static_cast<std::size_t>(state.dims()[s]);
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      if (sites[i] == sites[j]) throw Error(ErrorCode::kInvalidArgument, "apply_gate: repeated site");
    }
  }
  if (static_cast<std::size_t>(gate.rows()) != gdim || gate.rows() != gate.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "apply_gate: gate dimension does not match sites");
  }
  // Offsets of each local sub-index inside the full index.
  std::vector<std::size_t> local_offset(gdim, 0);
  for (std::size_t g = 0; g < gdim; ++g) {
    std::size_t rem = g, off = 0;
    for (std::size_t i = sites.size(); i-- > 0;) {
      const auto d = static_cast<std::size_t>(state.dims()[sites[i]]);
      off += (rem % d) * state.stride(sites[i]);
      rem /= d;
    }
    local_offset[g] = off;
  }
  std::vector<bool> is_target(state.dims().size(), false);
  for (int s : sites) is_target[static_cast<std::size_t>(s)] = true;

  const Vector& in = state.amps();
  Vector out = in;
  Vector buf(static_cast<Eigen::Index>(gdim));
  const std::size_t total = static_cast<std::size_t>(in.size());
  for (std::size_t base = 0; base < total; ++base) {
    // Visit each base index whose target digits are all zero.
    bool zero_targets = true;
    std::size_t rem = base;
    for (std::size_t j = state.dims().size(); j-- > 0;) {
      const auto d = static_cast<std::size_t>(state.dims()[j]);
      if (is_target[j] && rem % d != 0) {
        zero_targets = false;
        break;
      }
      rem /= d;
    }
    if (!zero_targets) continue;
    for (std::size_t g = 0; g < gdim; ++g) buf(static_cast<Eigen::Index>(g)) = in(static_cast<Eigen::Index>(base + local_offset[g]));
    const Vector res = gate * buf;
    for (std::size_t g = 0; g < gdim; ++g) out(static_cast<Eigen::Index>(base + local_offset[g])) = res(static_cast<Eigen::Index>(g));
  }
  return PureState(state.dims(), std::move(out));
}

/// <ket|_site applied to the state; the site is removed.
inline PureState project_out(const PureState& state, int site, const Vector& ket) {
  state.check_site(site);
  const int d = state.dims()[site];
  if (ket.size() != d) throw Error(ErrorCode::kDimensionMismatch, "project_out: ket dimension");
  std::vector<int> dims = state.dims();
  dims.erase(dims.begin() + site);
  const std::size_t stride = state.stride(site);
  const std::size_t outer = static_cast<std::size_t>(state.amps().size()) / (stride * static_cast<std::size_t>(d));
  Vector out = Vector::Zero(static_cast<Eigen::Index>(outer * stride));
  for (std::size_t o = 0; o < outer; ++o) {
    for (int s = 0; s < d; ++s) {
      const Complex c = std::conj(ket(s));
      if (c == Complex{}) continue;
      for (std::size_t i = 0; i < stride; ++i) {
        out(static_cast<Eigen::Index>(o * stride + i)) +=
            c * state.amps()(static_cast<Eigen::Index>((o * d + s) * stride + i));
      }
    }
  }
  if (dims.empty()) return PureState({}, out);
  return PureState(std::move(dims), std::move(out));
}

/// Born probabilities of each basis outcome on one site (normalized state).
inline std::vector<double> outcome_probabilities(const PureState& state, int site, const BasisSpec& basis) {
  state.check_site(site);
  if (basis.site_dim() != state.dims()[site]) {
    throw Error(ErrorCode::kDimensionMismatch, "measurement basis does not match site dimension");
  }
  const double total = state.amps().squaredNorm();
  std::vector<double> probs;
  for (const Vector& k : basis.kets()) {
    probs.push_back(project_out(state, site, k).amps().squaredNorm() / total);
  }
  return probs;
}

/// Projective measurement of one site. With force set, the outcome is fixed
/// and must have nonzero probability; otherwise rng draws it.
inline MeasurementResult measure_site(const PureState& state, int site, const BasisSpec& basis,
                                      std::optional<int> force, Rng* rng = nullptr,
                                      double tol = 1e-14) {
  const std::vector<double> probs = outcome_probabilities(state, site, basis);
  int outcome = 0;
  if (force) {
    if (*force < 0 || *force >= static_cast<int>(probs.size())) {
      throw Error(ErrorCode::kInvalidArgument, "forced outcome out of range");
    }
    outcome = *force;
  } else {
    if (rng == nullptr) throw Error(ErrorCode::kInvalidArgument, "measure_site: sampling needs an rng");
    double u = rng->uniform(), acc = 0.0;
    outcome = static_cast<int>(probs.size()) - 1;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      acc += probs[j];
      if (u < acc) {
        outcome = static_cast<int>(j);
        break;
      }
    }
  }
  if (probs[static_cast<std::size_t>(outcome)] <= tol) {
    throw Error(ErrorCode::kZeroProbability, "measurement outcome has zero probability");
  }
  const Vector ket = basis.kets()[static_cast<std::size_t>(outcome)];
  const PureState post = apply_gate(state, {site}, ket * ket.adjoint());
  return {outcome, probs[static_cast<std::size_t>(outcome)], post.normalized()};
}

/// Reduced density matrix of the listed sites (in listed order) of the
/// normalized state.
inline Matrix reduced_density(const PureState& state, const std::vector<int>& sites) {
  for (int s : sites) state.check_site(s);
  std::size_t sub = 1;
  for (int s : sites) sub *= static_cast<std::size_t>(state.dims()[s]);
  if (sites.size() > 4) throw Error(ErrorCode::kInvalidArgument, "reduced_density: at most 4 sites");
  const double norm2 = state.amps().squaredNorm();
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(sub), static_cast<Eigen::Index>(sub));
  const std::size_t total = static_cast<std::size_t>(state.amps().size());
  // Group amplitudes by environment index.
  std::vector<bool> kept(state.dims().size(), false);
  for (int s : sites) kept[static_cast<std::size_t>(s)] = true;
  std::size_t env_size = total / sub;
  Matrix psi = Matrix::Zero(static_cast<Eigen::Index>(sub), static_cast<Eigen::Index>(env_size));
  for (std::size_t flat = 0; flat < total; ++flat) {
    const std::vector<int> dig = state.digits(flat);
    std::size_t si = 0, ei = 0;
    for (int s : sites) si = si * static_cast<std::size_t>(state.dims()[s]) + static_cast<std::size_t>(dig[s]);
    for (std::size_t j = 0; j < dig.size(); ++j) {
      if (!kept[j]) ei = ei * static_cast<std::size_t>(state.dims()[j]) + static_cast<std::size_t>(dig[j]);
    }
    psi(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(ei)) = state.amps()(static_cast<Eigen::Index>(flat));
  }
  rho = psi * psi.adjoint() / norm2;
  return rho;
}

inline double shannon_bits(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

inline double binary_entropy(double p) { return shannon_bits(p) + shannon_bits(1.0 - p); }

inline double entropy_vn(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig((rho + rho.adjoint()) / 2.0);
  double s = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double l = eig.eigenvalues()(i);
    if (l > 1e-15) s += shannon_bits(l);
  }
  return s;
}

/// Shannon entropy of the computational-basis marginal of one site.
inline double entropy_z(const PureState& state, int site) {
  const Matrix rho = reduced_density(state, {site});
  double s = 0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) s += shannon_bits(rho(i, i).real());
  return s;
}

/// Cyclic translation by `shift` sites: the content of site i moves to
/// site (i + shift) mod n. All sites must share a dimension.
inline PureState translate(const PureState& state, int shift) {
  const int n = state.site_count();
  for (int d : state.dims()) {
    if (d != state.dims()[0]) throw Error(ErrorCode::kInvalidArgument, "translate: mixed site dims");
  }
  shift = ((shift % n) + n) % n;
  Vector out(state.amps().size());
  const auto total = static_cast<std::size_t>(state.amps().size());
  for (std::size_t flat = 0; flat < total; ++flat) {
    const std::vector<int> dig = state.digits(flat);
    std::vector<int> moved(dig.size());
    for (int i = 0; i < n; ++i) moved[static_cast<std::size_t>((i + shift) % n)] = dig[static_cast<std::size_t>(i)];
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(state.dims()[i]) + static_cast<std::size_t>(moved[i]);
    out(static_cast<Eigen::Index>(idx)) = state.amps()(static_cast<Eigen::Index>(flat));
  }
  return PureState(state.dims(), std::move(out));
}

}  // namespace corrspace
