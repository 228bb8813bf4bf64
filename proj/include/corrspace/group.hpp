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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "corrspace/linalg.hpp"
#include "corrspace/rng.hpp"

namespace corrspace {

/// One group element: unit-scale, phase-canonical representative plus a
/// witness word. The word lists generator indices; the representative is
/// gen[w0] * gen[w1] * ... up to phase.
struct ProjectiveElement {
  Matrix rep;
  std::vector<int> word;
};

inline constexpr int kDefaultMaxOrder = 4096;

/// Finite matrix group modulo global phase.
class ProjectiveGroup {
 public:
  ProjectiveGroup() = default;

  const std::vector<Matrix>& generators() const { return generators_; }
  const std::vector<ProjectiveElement>& elements() const { return elements_; }
  const ProjectiveElement& element(int i) const { return elements_.at(static_cast<std::size_t>(i)); }
  int order() const { return static_cast<int>(elements_.size()); }
  int dim() const { return dim_; }
  double tol() const { return tol_; }
  int identity_index() const { return 0; }

  /// cayley()[e][j] = index of element(e) * generator(j).
  const std::vector<std::vector<int>>& cayley() const { return cayley_; }

  /// Index of the element proportional to m, if any.
  std::optional<int> find(const Matrix& m) const {
    if (m.rows() != dim_ || m.cols() != dim_) return std::nullopt;
    if (m.cwiseAbs().maxCoeff() == 0) return std::nullopt;
    const Matrix u = unit_scale(m);
    if (auto it = buckets_.find(key(u)); it != buckets_.end()) {
      for (int i : it->second) {
        if (proportional_up_to_phase(u, elements_[static_cast<std::size_t>(i)].rep, tol_)) return i;
      }
    }
    // Rounding can split near-equal keys; fall back to a scan.
    for (int i = 0; i < order(); ++i) {
      if (proportional_up_to_phase(u, elements_[static_cast<std::size_t>(i)].rep, tol_)) return i;
    }
    return std::nullopt;
  }

  int require(const Matrix& m) const {
    auto i = find(m);
    if (!i) throw Error(ErrorCode::kNotInGroup, "matrix is not an element of the group");
    return *i;
  }

  bool contains(const Matrix& m) const { return find(m).has_value(); }

  int multiply(int a, int b) const { return require(element(a).rep * element(b).rep); }

  int inverse(int a) const { return require(element(a).rep.inverse()); }

  /// Table e -> element(s) * element(e).
  std::vector<int> left_action(int s) const {
    std::vector<int> t(static_cast<std::size_t>(order()));
    for (int e = 0; e < order(); ++e) t[static_cast<std::size_t>(e)] = multiply(s, e);
    return t;
  }

  friend ProjectiveGroup closure(const std::vector<Matrix>& generators, double tol, int max_order);

 private:
  static std::string key(const Matrix& unit) {
    // Moduli are phase independent, so equal elements share a key up to rounding.
    std::string k;
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
      for (Eigen::Index j = 0; j < unit.cols(); ++j) {
        k += std::to_string(std::llround(std::abs(unit(i, j)) * 1e6));
        k += ',';
      }
    }
    return k;
  }

  int insert(const Matrix& unit, std::vector<int> word) {
    const int idx = order();
    elements_.push_back({canonical_phase(unit, tol_), std::move(word)});
    buckets_[key(unit)].push_back(idx);
    return idx;
  }

  std::vector<Matrix> generators_;
  std::vector<ProjectiveElement> elements_;
  std::vector<std::vector<int>> cayley_;
  std::unordered_map<std::string, std::vector<int>> buckets_;
  int dim_ = 0;
  double tol_ = kDefaultTol;
};

/// Breadth-first closure of the generators modulo global phase.
inline ProjectiveGroup closure(const std::vector<Matrix>& generators, double tol = kDefaultTol,
                               int max_order = kDefaultMaxOrder) {
  if (generators.empty()) throw Error(ErrorCode::kInvalidArgument, "closure needs at least one generator");
  const int dim = static_cast<int>(generators.front().rows());
  for (const auto& g : generators) {
    require_square(g, "generator");
    if (g.rows() != dim) throw Error(ErrorCode::kDimensionMismatch, "generators differ in dimension");
    if (!all_finite(g)) throw Error(ErrorCode::kInvalidArgument, "generator has non-finite entries");
    if (std::abs(g.determinant()) < tol) throw Error(ErrorCode::kInvalidArgument, "generator is singular");
  }
  ProjectiveGroup grp;
  grp.dim_ = dim;
  grp.tol_ = tol;
  for (const auto& g : generators) grp.generators_.push_back(unit_scale(g));
  grp.insert(identity(dim), {});
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    const int e = frontier.front();
    frontier.pop_front();
    for (std::size_t j = 0; j < grp.generators_.size(); ++j) {
      const Matrix prod = unit_scale(grp.elements_[static_cast<std::size_t>(e)].rep * grp.generators_[j]);
      if (grp.find(prod)) continue;
      if (grp.order() >= max_order) {
        throw Error(ErrorCode::kGroupTooLarge,
                    "closure exceeded max_order " + std::to_string(max_order) + "; group possibly infinite");
      }
      auto word = grp.elements_[static_cast<std::size_t>(e)].word;
      word.push_back(static_cast<int>(j));
      frontier.push_back(grp.insert(prod, std::move(word)));
    }
  }
  grp.cayley_.assign(static_cast<std::size_t>(grp.order()), std::vector<int>(grp.generators_.size()));
  for (int e = 0; e < grp.order(); ++e) {
    for (std::size_t j = 0; j < grp.generators_.size(); ++j) {
      grp.cayley_[static_cast<std::size_t>(e)][j] = grp.require(grp.element(e).rep * grp.generators_[j]);
    }
  }
  return grp;
}

/// Multiplies a witness word back out.
inline Matrix word_matrix(const ProjectiveGroup& grp, const std::vector<int>& word) {
  Matrix m = identity(grp.dim());
  for (int j : word) m = m * grp.generators().at(static_cast<std::size_t>(j));
  return m;
}

inline ProjectiveGroup clifford_group() { return closure({gates::h(), gates::s()}); }

/// Exponents (k_1, ..., k_n) with target = A B^{k_1} A B^{k_2} ... A B^{k_n}
/// up to phase, k_i in {0, 1}; shortest n found by breadth-first search.
inline std::vector<int> normal_form_word(const ProjectiveGroup& grp, const Matrix& target, const Matrix& a,
                                         const Matrix& b) {
  const int goal = grp.require(target);
  const int ia = grp.require(a);
  const int ib = grp.require(b);
  const std::array<int, 2> unit = {ia, grp.multiply(ia, ib)};
  std::vector<int> parent(static_cast<std::size_t>(grp.order()), -2);
  std::vector<int> via(static_cast<std::size_t>(grp.order()), -1);
  std::deque<int> frontier;
  for (int k = 0; k < 2; ++k) {
    const int e = unit[static_cast<std::size_t>(k)];
    if (parent[static_cast<std::size_t>(e)] != -2) continue;
    parent[static_cast<std::size_t>(e)] = -1;
    via[static_cast<std::size_t>(e)] = k;
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    const int e = frontier.front();
    frontier.pop_front();
    if (e == goal) break;
    for (int k = 0; k < 2; ++k) {
      const int next = grp.multiply(e, unit[static_cast<std::size_t>(k)]);
      if (parent[static_cast<std::size_t>(next)] != -2) continue;
      parent[static_cast<std::size_t>(next)] = e;
      via[static_cast<std::size_t>(next)] = k;
      frontier.push_back(next);
    }
  }
  if (parent[static_cast<std::size_t>(goal)] == -2) {
    throw Error(ErrorCode::kNotInGroup, "target not reachable by words of the form A B^k A B^k ...");
  }
  std::vector<int> exps;
  for (int e = goal; e != -1; e = parent[static_cast<std::size_t>(e)]) exps.push_back(via[static_cast<std::size_t>(e)]);
  std::reverse(exps.begin(), exps.end());
  return exps;
}

inline Matrix normal_form_matrix(const std::vector<int>& exps, const Matrix& a, const Matrix& b) {
  Matrix m = identity(static_cast<int>(a.rows()));
  for (int k : exps) m = m * a * (k ? b : identity(static_cast<int>(a.rows())));
  return m;
}

/// Draws the group element multiplied onto the accumulated by-product per step.
using StepSampler = std::function<int(Rng&)>;

/// Steps G Z^x with x a fair bit, for the correlation-chain group.
inline StepSampler transport_step_sampler(const ProjectiveGroup& grp, int k) {
  const std::array<int, 2> steps = {grp.require(gates::g(k)), grp.require(gates::g(k) * gates::z())};
  return [steps](Rng& rng) { return steps[static_cast<std::size_t>(rng.bit())]; };
}

/// Lazily built left-multiplication tables for repeated walks.
class LeftTables {
 public:
  explicit LeftTables(const ProjectiveGroup& grp) : grp_(grp) {}

  int apply(int s, int e) {
    auto& t = tables_[s];
    if (t.empty()) t = grp_.left_action(s);
    return t[static_cast<std::size_t>(e)];
  }

 private:
  const ProjectiveGroup& grp_;
  std::unordered_map<int, std::vector<int>> tables_;
};

struct WalkResult {
  long steps = 0;
  std::vector<int> trace;  // accumulated element after each step
};

inline constexpr long kDefaultWalkCap = 1000000;

/// Left-multiplies sampled steps onto `start` until the accumulation is the identity.
inline WalkResult compensation_walk(const ProjectiveGroup& grp, int start, const StepSampler& sampler, Rng& rng,
                                    long cap = kDefaultWalkCap, bool keep_trace = false,
                                    LeftTables* tables = nullptr) {
  WalkResult out;
  int acc = start;
  while (acc != grp.identity_index()) {
    if (out.steps >= cap) throw Error(ErrorCode::kStepCapExceeded, "compensation walk hit its step cap");
    const int step = sampler(rng);
    acc = tables ? tables->apply(step, acc) : grp.multiply(step, acc);
    ++out.steps;
    if (keep_trace) out.trace.push_back(acc);
  }
  return out;
}

inline WalkResult compensation_walk(const ProjectiveGroup& grp, int start, const StepSampler& sampler,
                                    std::uint64_t seed, long cap = kDefaultWalkCap) {
  Rng rng(seed);
  return compensation_walk(grp, start, sampler, rng, cap, true);
}

struct WalkStatistics {
  int runs = 0;
  int lines = 1;
  double mean_steps = 0;      // per line
  long max_steps = 0;         // per line
  double mean_ensemble = 0;   // mean over runs of the slowest of `lines` walks
};

/// Runs `runs` trials, each with `lines` independent walks from `start`.
inline WalkStatistics walk_statistics(const ProjectiveGroup& grp, int start, const StepSampler& sampler,
                                      int runs, int lines, std::uint64_t seed, long cap = kDefaultWalkCap) {
  if (runs < 1 || lines < 1) throw Error(ErrorCode::kInvalidArgument, "walk_statistics needs runs, lines >= 1");
  Rng rng(seed);
  LeftTables tables(grp);
  WalkStatistics st;
  st.runs = runs;
  st.lines = lines;
  double total = 0, total_max = 0;
  for (int r = 0; r < runs; ++r) {
    long slowest = 0;
    for (int l = 0; l < lines; ++l) {
      const long s = compensation_walk(grp, start, sampler, rng, cap, false, &tables).steps;
      total += static_cast<double>(s);
      slowest = std::max(slowest, s);
      st.max_steps = std::max(st.max_steps, s);
    }
    total_max += static_cast<double>(slowest);
  }
  st.mean_steps = total / (static_cast<double>(runs) * lines);
  st.mean_ensemble = total_max / runs;
  return st;
}

}  // namespace corrspace
