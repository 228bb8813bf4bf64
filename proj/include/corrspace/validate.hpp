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

// Consistency report between the three ways of reading amplitudes off a
// chain, optionally checked against an externally built state.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrspace/mps.hpp"
#include "corrspace/rng.hpp"
#include "corrspace/statevec.hpp"

namespace corrspace {

struct CrossValidationReport {
  std::size_t outcomes_checked = 0;
  int probes = 0;
  double amplitude_deviation = 0;  // amplitude() against the expanded vector
  double projected_deviation = 0;  // evolved product-ket overlaps against the expanded vector
  std::optional<double> reference_deviation;  // phase-aligned distance of normalized states
  double max_deviation = 0;
  bool consistent = true;
};

/// min over theta of || a/|a| - e^{i theta} b/|b| ||
inline double aligned_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "aligned_distance: size mismatch");
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return na == nb ? 0.0 : std::sqrt(2.0);
  const Complex ov = b.dot(a);
  const Complex phase = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex{1.0};
  return (a / na - phase * b / nb).norm();
}

/// `probes` seeded random product kets are pushed through the correlation
/// space; their overlaps must match the expanded vector.
inline CrossValidationReport cross_validate(const MpsChain& chain, const PureState* reference = nullptr,
                                            double tol = 1e-10, int probes = 16, std::uint64_t seed = 1) {
  CrossValidationReport rep;
  const ExpandedState full = to_statevector(chain);
  const Vector& amps = full.state.amps();
  const std::vector<int> dims = chain.phys_dims();

  std::vector<int> s(dims.size(), 0);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    rep.amplitude_deviation = std::max(rep.amplitude_deviation, std::abs(amplitude(chain, s) - amps(i)));
    ++rep.outcomes_checked;
    for (int j = static_cast<int>(s.size()) - 1; j >= 0; --j) {
      if (++s[static_cast<std::size_t>(j)] < dims[static_cast<std::size_t>(j)]) break;
      s[static_cast<std::size_t>(j)] = 0;
    }
  }

  Rng rng(seed);
  rep.probes = probes;
  for (int p = 0; p < probes; ++p) {
    std::vector<Vector> kets;
    CorrelationState cs = make_correlation_state(chain.left());
    for (int j = 0; j < chain.size(); ++j) {
      kets.push_back(rng.random_state(chain.phys_dim(j)));
      cs = evolve(cs, project_local(chain, j, kets.back()));
    }
    const Complex predicted = chain.right().dot(cs.vec);
    const Complex direct = PureState::product(kets).amps().dot(amps);
    rep.projected_deviation = std::max(rep.projected_deviation, std::abs(predicted - direct));
  }

  rep.max_deviation = std::max(rep.amplitude_deviation, rep.projected_deviation);
  if (reference) {
    if (reference->dims() != dims) throw Error(ErrorCode::kDimensionMismatch, "reference has different sites");
    rep.reference_deviation = aligned_distance(amps, reference->amps());
    rep.max_deviation = std::max(rep.max_deviation, *rep.reference_deviation);
  }
  rep.consistent = rep.max_deviation <= tol;
  return rep;
}

}  // namespace corrspace
