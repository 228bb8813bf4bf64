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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corrspace/basis.hpp"
#include "corrspace/lattice.hpp"
#include "corrspace/mps.hpp"
#include "corrspace/rng.hpp"
#include "corrspace/statevec.hpp"

namespace corrspace {

enum class AdaptAction { kOverride, kRestart };

inline const char* adapt_action_name(AdaptAction a) { return a == AdaptAction::kRestart ? "restart" : "override"; }

inline AdaptAction adapt_action_from_name(const std::string& s) {
  if (s == "restart") return AdaptAction::kRestart;
  if (s == "override") return AdaptAction::kOverride;
  throw Error(ErrorCode::kParse, "unknown adapt action '" + s + "'");
}

/// If variable `on` took value `equals`, either measure in `basis` instead
/// (override) or abandon the remaining steps (restart).
struct AdaptRule {
  std::string on;
  int equals = 1;
  AdaptAction action = AdaptAction::kOverride;
  std::optional<BasisSpec> basis;

  bool operator==(const AdaptRule&) const = default;
};

struct PatternStep {
  SiteCoord site;
  BasisSpec basis;
  std::string var;
  std::vector<AdaptRule> adapt;

  bool operator==(const PatternStep&) const = default;
};

/// By-product word (gate names, applied left to right as a matrix product)
/// picked up when `on` equals `equals`.
struct ByproductRule {
  std::string on;
  int equals = 1;
  std::vector<std::string> word;

  bool operator==(const ByproductRule&) const = default;
};

struct MeasurementPattern {
  std::vector<PatternStep> steps;
  std::vector<std::string> outcome_vars;
  std::vector<ByproductRule> byproduct_rules;

  bool operator==(const MeasurementPattern&) const = default;
};

/// Checks variable bookkeeping, site uniqueness and rule references.
inline void validate(const MeasurementPattern& p) {
  std::set<std::string> declared(p.outcome_vars.begin(), p.outcome_vars.end());
  if (declared.size() != p.outcome_vars.size()) {
    throw Error(ErrorCode::kDuplicateLabel, "pattern declares an outcome variable twice");
  }
  std::set<std::string> seen;
  std::set<SiteCoord> sites;
  for (const auto& st : p.steps) {
    if (!declared.count(st.var)) throw Error(ErrorCode::kUnknownLabel, "undeclared outcome variable '" + st.var + "'");
    if (seen.count(st.var)) throw Error(ErrorCode::kDuplicateLabel, "variable '" + st.var + "' assigned twice");
    if (!sites.insert(st.site).second) throw Error(ErrorCode::kInvalidArgument, "site measured twice in one pattern");
    for (const auto& r : st.adapt) {
      if (!seen.count(r.on)) {
        throw Error(ErrorCode::kInvalidArgument, "adapt rule on '" + r.on + "' does not reference an earlier step");
      }
      if (r.action == AdaptAction::kOverride && !r.basis) {
        throw Error(ErrorCode::kInvalidArgument, "override rule needs a basis");
      }
    }
    seen.insert(st.var);
  }
  for (const auto& r : p.byproduct_rules) {
    if (!declared.count(r.on)) throw Error(ErrorCode::kUnknownLabel, "by-product rule on unknown variable");
    for (const auto& g : r.word) gates::by_name(g);
  }
}

struct ProtocolRecord {
  std::vector<std::pair<std::string, int>> outcomes;  // in measurement order
  double probability = 1.0;
  Matrix realized_op;  // correlation-space operator; empty for state-vector runs
  Matrix byproduct;    // from the pattern's by-product rules
  int attempts = 1;
  bool aborted = false;
  std::optional<PureState> post_state;

  std::optional<int> value(const std::string& var) const {
    for (const auto& [v, o] : outcomes) {
      if (v == var) return o;
    }
    return std::nullopt;
  }
};

struct RunMode {
  enum class Kind { kSample, kForce, kEnumerate };
  Kind kind = Kind::kEnumerate;
  std::uint64_t seed = 0;
  std::map<std::string, int> forced;

  static RunMode sample(std::uint64_t seed) { return {Kind::kSample, seed, {}}; }
  static RunMode force(std::map<std::string, int> outcomes) { return {Kind::kForce, 0, std::move(outcomes)}; }
  static RunMode enumerate() { return {Kind::kEnumerate, 0, {}}; }
};

inline constexpr double kZeroProbability = 1e-14;

namespace detail {

inline BasisSpec effective_basis(const PatternStep& st, const ProtocolRecord& rec, bool& restart) {
  BasisSpec b = st.basis;
  restart = false;
  for (const auto& r : st.adapt) {
    auto v = rec.value(r.on);
    if (!v || *v != r.equals) continue;
    if (r.action == AdaptAction::kRestart) {
      restart = true;
      return b;
    }
    b = *r.basis;
  }
  return b;
}

inline Matrix byproduct_of(const MeasurementPattern& p, const ProtocolRecord& rec, int dim) {
  Matrix b = identity(dim);
  for (const auto& r : p.byproduct_rules) {
    auto v = rec.value(r.on);
    if (!v || *v != r.equals) continue;
    Matrix w = identity(dim);
    for (const auto& g : r.word) w = w * gates::by_name(g);
    if (w.rows() == dim) b = w * b;
  }
  return b;
}

/// Walks the pattern depth first. `branch(state, step, basis)` returns the
/// unnormalized weight and continuation state of every outcome.
template <typename State, typename Branch>
void drive(const MeasurementPattern& p, const RunMode& mode, std::size_t index, State state, ProtocolRecord rec,
           Rng* rng, const Branch& branch, std::vector<std::pair<ProtocolRecord, State>>& out) {
  if (index == p.steps.size()) {
    out.emplace_back(std::move(rec), std::move(state));
    return;
  }
  const PatternStep& st = p.steps[index];
  bool restart = false;
  const BasisSpec basis = effective_basis(st, rec, restart);
  if (restart) {
    rec.aborted = true;
    out.emplace_back(std::move(rec), std::move(state));
    return;
  }
  auto options = branch(state, st, basis);  // vector<pair<double, State>>
  double total = 0;
  for (const auto& o : options) total += o.first;
  if (!(total > 0)) throw Error(ErrorCode::kZeroProbability, "pattern reached a zero-weight configuration");
  auto follow = [&](int o) {
    ProtocolRecord next = rec;
    next.outcomes.emplace_back(st.var, o);
    next.probability *= options[static_cast<std::size_t>(o)].first / total;
    drive(p, mode, index + 1, options[static_cast<std::size_t>(o)].second, std::move(next), rng, branch, out);
  };
  switch (mode.kind) {
    case RunMode::Kind::kEnumerate:
      for (int o = 0; o < static_cast<int>(options.size()); ++o) {
        if (options[static_cast<std::size_t>(o)].first / total > kZeroProbability) follow(o);
      }
      break;
    case RunMode::Kind::kForce: {
      auto it = mode.forced.find(st.var);
      if (it == mode.forced.end()) throw Error(ErrorCode::kInvalidArgument, "no forced outcome for '" + st.var + "'");
      const int o = it->second;
      if (o < 0 || o >= static_cast<int>(options.size())) {
        throw Error(ErrorCode::kInvalidArgument, "forced outcome out of range for '" + st.var + "'");
      }
      if (options[static_cast<std::size_t>(o)].first / total <= kZeroProbability) {
        throw Error(ErrorCode::kZeroProbability, "forced outcome for '" + st.var + "' has zero probability");
      }
      follow(o);
      break;
    }
    case RunMode::Kind::kSample: {
      double u = rng->uniform() * total;
      int o = 0;
      for (; o + 1 < static_cast<int>(options.size()); ++o) {
        if (u < options[static_cast<std::size_t>(o)].first) break;
        u -= options[static_cast<std::size_t>(o)].first;
      }
      while (options[static_cast<std::size_t>(o)].first <= 0) --o;
      follow(o);
      break;
    }
  }
}

}  // namespace detail

/// Runs a pattern on a chain. Steps address sites (0, j); j must increase
/// along the pattern. Unmeasured sites are traced out, so probabilities are
/// the exact Born marginals of the finite chain.
inline std::vector<ProtocolRecord> run_pattern(const MpsChain& chain, const MeasurementPattern& p,
                                               const RunMode& mode) {
  validate(p);
  int last = -1;
  for (const auto& st : p.steps) {
    if (st.site.row != 0 || st.site.col <= last || st.site.col >= chain.size()) {
      throw Error(ErrorCode::kInvalidArgument, "chain pattern sites must be (0, j) with j increasing and in range");
    }
    last = st.site.col;
  }
  const auto env = right_environments(chain);
  struct ChainState {
    Matrix rho;      // left density, rescaled
    Matrix op;       // product of projected site matrices
    int next = 0;    // first site not yet absorbed into rho
  };
  auto branch = [&](const ChainState& s, const PatternStep& st, const BasisSpec& basis) {
    const int j = st.site.col;
    if (basis.site_dim() != chain.phys_dim(j)) {
      throw Error(ErrorCode::kDimensionMismatch, "basis dimension does not match the site");
    }
    Matrix rho = s.rho;
    for (int t = s.next; t < j; ++t) {
      Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
      for (const Matrix& a : chain.site(t)) acc += a * rho * a.adjoint();
      rho = acc / acc.cwiseAbs().maxCoeff();
    }
    std::vector<std::pair<double, ChainState>> opts;
    for (const Vector& ket : basis.kets()) {
      const Matrix a = project_local(chain, j, ket);
      Matrix r = a * rho * a.adjoint();
      const double w = std::max(0.0, (r * env[static_cast<std::size_t>(j + 1)]).trace().real());
      const double scale = r.cwiseAbs().maxCoeff();
      if (scale > 0) r /= scale;
      opts.push_back({w, ChainState{r, a * s.op, j + 1}});
    }
    return opts;
  };
  Rng rng(mode.seed);
  std::vector<std::pair<ProtocolRecord, ChainState>> leaves;
  ProtocolRecord root;
  detail::drive(p, mode, 0,
                ChainState{chain.left() * chain.left().adjoint(), identity(chain.bond_dim()), 0}, root, &rng,
                branch, leaves);
  std::vector<ProtocolRecord> out;
  for (auto& [rec, st] : leaves) {
    rec.realized_op = st.op;
    rec.byproduct = detail::byproduct_of(p, rec, chain.bond_dim());
    out.push_back(std::move(rec));
  }
  return out;
}

/// Runs a pattern on a dense state whose sites are laid out row-major on a
/// grid with `cols` columns. Each branch keeps its normalized post state.
inline std::vector<ProtocolRecord> run_pattern(const PureState& state, int cols, const MeasurementPattern& p,
                                               const RunMode& mode) {
  validate(p);
  if (cols < 1) throw Error(ErrorCode::kInvalidArgument, "layout needs cols >= 1");
  for (const auto& st : p.steps) {
    const int v = st.site.row * cols + st.site.col;
    if (st.site.row < 0 || st.site.col < 0 || st.site.col >= cols || v >= state.site_count()) {
      throw Error(ErrorCode::kInvalidArgument, "pattern site outside the state layout");
    }
  }
  auto branch = [&](const PureState& s, const PatternStep& st, const BasisSpec& basis) {
    const int v = st.site.row * cols + st.site.col;
    if (basis.site_dim() != s.dims()[static_cast<std::size_t>(v)]) {
      throw Error(ErrorCode::kDimensionMismatch, "basis dimension does not match the site");
    }
    std::vector<std::pair<double, PureState>> opts;
    const auto probs = outcome_probabilities(s, v, basis);
    for (int o = 0; o < static_cast<int>(probs.size()); ++o) {
      if (probs[static_cast<std::size_t>(o)] > kZeroProbability) {
        opts.push_back({probs[static_cast<std::size_t>(o)], measure_site(s, v, basis, o).post_state});
      } else {
        opts.push_back({0.0, s});
      }
    }
    return opts;
  };
  Rng rng(mode.seed);
  std::vector<std::pair<ProtocolRecord, PureState>> leaves;
  detail::drive(p, mode, 0, state.normalized(), ProtocolRecord{}, &rng, branch, leaves);
  std::vector<ProtocolRecord> out;
  for (auto& [rec, st] : leaves) {
    rec.byproduct = detail::byproduct_of(p, rec, 2);
    rec.post_state = std::move(st);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace corrspace
