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

// Controlled-Z between the logical rows 0 and 2 of a three-row weighted
// graph lattice.
//
// An attempt at anchor a measures X on (0, a..a+2) and (2, a..a+2) and Z on
// the middle-row sites (1, a-1), (1, a), (1, a+2), (1, a+3). If all of these
// read 0 the centre (1, a+1) is measured in Y and the gate is done;
// otherwise the centre is measured in Z and the next attempt starts at a+3.
// (1, a+2) and (1, a+3) are (1, a'-1) and (1, a') of that next attempt, so
// their outcomes are shared.
//
// Each attempt is a segment operator on the 4-dim logical space (row 0 most
// significant). Z-measured sites only enter through the legs they share
// with X/Y sites; all their other legs contribute outcome-independent
// magnitudes. Branch probabilities are |sqrt(K) M psi|^2 where K normalizes
// sum M^dagger M, which the table builder checks to be a multiple of the
// identity for every value of the shared bits.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corrspace/group.hpp"
#include "corrspace/lattice.hpp"
#include "corrspace/pattern.hpp"
#include "corrspace/rng.hpp"

namespace corrspace {

inline constexpr int kCzRows = 3;

struct CzAttemptGeometry {
  int anchor = 0;
  std::vector<SiteCoord> shared_z;  // measured by the previous attempt
  std::vector<SiteCoord> measured;  // this attempt, column-major, centre excluded
  SiteCoord centre;

  bool is_x(const SiteCoord& s) const { return s.row != 1; }
};

inline std::string cz_var(const SiteCoord& s) {
  return "s" + std::to_string(s.row) + "_" + std::to_string(s.col);
}

/// Sites of the attempt at `anchor`; `first` marks the attempt that starts
/// the protocol (no shared outcomes).
inline CzAttemptGeometry cz_geometry(int cols, int anchor, bool first) {
  if (anchor < 0 || anchor + 2 >= cols) {
    throw Error(ErrorCode::kInvalidArgument, "CZ attempt does not fit the lattice");
  }
  CzAttemptGeometry g;
  g.anchor = anchor;
  g.centre = {1, anchor + 1};
  for (int c = anchor - 1; c <= anchor + 3; ++c) {
    if (c < 0 || c >= cols) continue;
    for (int r = 0; r < kCzRows; ++r) {
      const SiteCoord s{r, c};
      if (s == g.centre) continue;
      const bool x = r != 1 && c >= anchor && c <= anchor + 2;
      const bool z = r == 1;
      if (!x && !z) continue;
      if (z && !first && c <= anchor) {
        g.shared_z.push_back(s);
      } else {
        g.measured.push_back(s);
      }
    }
  }
  return g;
}

struct CzSegment {
  Matrix op;                  // 4x4, rows out0 out2, columns in0 in2
  std::vector<int> outcomes;  // over geometry.measured
  int centre_outcome = 0;
  bool success = false;       // centre measured in Y
  int local = 0;              // index in the local group: op ~ L (success: L CZ)
};

struct CzAttemptTable {
  CzAttemptGeometry geometry;
  std::vector<double> calibration;            // K per shared-bit value
  std::vector<std::vector<CzSegment>> by_shared;
};

/// Local Clifford by-products on the two logical rows (576 elements).
inline std::shared_ptr<const ProjectiveGroup> cz_local_group() {
  static const auto grp = std::make_shared<const ProjectiveGroup>(
      closure({kron(gates::h(), identity(2)), kron(gates::s(), identity(2)), kron(identity(2), gates::h()),
               kron(identity(2), gates::s())}));
  return grp;
}

inline Matrix cz_segment_operator(int cols, const CzAttemptGeometry& g, const std::map<SiteCoord, int>& z_outcomes,
                                  const std::map<SiteCoord, int>& x_outcomes, bool success, int centre) {
  std::map<SiteCoord, Vector> core;
  for (const auto& [s, o] : x_outcomes) core[s] = BasisSpec::x().kets()[static_cast<std::size_t>(o)];
  std::map<SiteCoord, int> halo = z_outcomes;
  if (success) {
    core[g.centre] = BasisSpec::y().kets()[static_cast<std::size_t>(centre)];
    return region_operator(kCzRows, cols, core, halo, {0, 2});
  }
  // A Z-measured centre keeps its bonds to the neighbouring Z sites, which a
  // Y-measured centre contracts as core legs; every branch of an attempt
  // must carry the same set of bonds.
  Complex bonds = 1;
  for (const std::string leg : {"l", "r"}) {
    const auto partner = wgs_leg_partner(kCzRows, cols, g.centre, leg);
    if (!partner) continue;
    const auto it = halo.find(*partner);
    if (it == halo.end()) continue;
    bonds *= wgs_leg_vector(leg, centre).dot(wgs_leg_vector(wgs_opposite_leg(leg), it->second).conjugate());
  }
  halo[g.centre] = centre;
  return bonds * region_operator(kCzRows, cols, core, halo, {0, 2});
}

inline CzAttemptTable build_cz_table(int cols, int anchor, bool first, double tol = 1e-10) {
  CzAttemptTable t;
  t.geometry = cz_geometry(cols, anchor, first);
  const auto& g = t.geometry;
  const auto local = cz_local_group();
  const int ns = static_cast<int>(g.shared_z.size());
  const int nm = static_cast<int>(g.measured.size());
  const Matrix cz_inv = gates::cz().adjoint();
  for (int shared = 0; shared < (1 << ns); ++shared) {
    std::vector<CzSegment> segs;
    Matrix gram = Matrix::Zero(4, 4);
    for (int bits = 0; bits < (1 << nm); ++bits) {
      std::map<SiteCoord, int> z, x;
      bool clean = true;
      for (int j = 0; j < ns; ++j) {
        const int o = (shared >> (ns - 1 - j)) & 1;
        z[g.shared_z[static_cast<std::size_t>(j)]] = o;
        clean = clean && o == 0;
      }
      std::vector<int> outs;
      for (int j = 0; j < nm; ++j) {
        const int o = (bits >> (nm - 1 - j)) & 1;
        const SiteCoord& s = g.measured[static_cast<std::size_t>(j)];
        (g.is_x(s) ? x : z)[s] = o;
        outs.push_back(o);
        clean = clean && o == 0;
      }
      for (int centre = 0; centre < 2; ++centre) {
        CzSegment seg;
        seg.op = cz_segment_operator(cols, g, z, x, clean, centre);
        seg.outcomes = outs;
        seg.centre_outcome = centre;
        seg.success = clean;
        const auto idx = local->find(clean ? Matrix(seg.op * cz_inv) : seg.op);
        if (!idx) {
          throw Error(ErrorCode::kInvalidBranch, clean ? "success segment is not CZ up to local Cliffords"
                                                       : "failure segment is not a local Clifford");
        }
        seg.local = *idx;
        gram += seg.op.adjoint() * seg.op;
        segs.push_back(std::move(seg));
      }
    }
    const double c = gram.trace().real() / 4;
    if ((gram - c * identity(4)).cwiseAbs().maxCoeff() > tol * c) {
      throw Error(ErrorCode::kInvalidBranch, "segment operators do not resolve the identity");
    }
    t.calibration.push_back(1.0 / c);
    t.by_shared.push_back(std::move(segs));
  }
  return t;
}

inline std::vector<int> cz_anchors(int cols, int anchor) {
  std::vector<int> out;
  for (int a = anchor; a + 2 < cols; a += 3) out.push_back(a);
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "lattice too narrow for a CZ attempt");
  return out;
}

/// Bits of the next attempt's shared sites, read off this attempt.
inline int cz_shared_bits(const CzAttemptGeometry& g, const CzSegment& seg, const CzAttemptGeometry& next) {
  int bits = 0;
  for (const SiteCoord& s : next.shared_z) {
    const auto it = std::find(g.measured.begin(), g.measured.end(), s);
    if (it == g.measured.end()) throw Error(ErrorCode::kInvalidArgument, "shared site not measured before");
    bits = (bits << 1) | seg.outcomes[static_cast<std::size_t>(it - g.measured.begin())];
  }
  return bits;
}

struct CzPlan {
  int cols = 0;
  int anchor = 0;
  std::vector<CzAttemptTable> attempts;
};

inline CzPlan plan_logical_cz(int cols, int anchor = 0) {
  CzPlan p{cols, anchor, {}};
  const auto anchors = cz_anchors(cols, anchor);
  for (std::size_t j = 0; j < anchors.size(); ++j) p.attempts.push_back(build_cz_table(cols, anchors[j], j == 0));
  return p;
}

struct CzRecord {
  ProtocolRecord record;  // realized_op: product of segments; byproduct: left factor
  bool success = false;
  int success_anchor = -1;
  Matrix left_byproduct;   // L in realized ~ L CZ R
  Matrix right_byproduct;  // R, accumulated over failed attempts
  double distance = 0;     // phase distance of realized from L CZ R (or L R on exhaustion)
};

inline Vector cz_input() { return kron(ket_plus(), ket_plus()); }

/// One run of the protocol. `pick` receives the branch probabilities of the
/// attempt's segments and returns the chosen segment.
template <typename Pick>
CzRecord run_cz(const CzPlan& plan, const Pick& pick) {
  const auto local = cz_local_group();
  CzRecord out;
  Vector psi = cz_input();
  Matrix realized = identity(4);
  int right = local->identity_index();
  int shared = 0;
  out.record.attempts = 0;
  for (std::size_t t = 0; t < plan.attempts.size(); ++t) {
    const auto& table = plan.attempts[t];
    const auto& segs = table.by_shared[static_cast<std::size_t>(shared)];
    const double k = table.calibration[static_cast<std::size_t>(shared)];
    const double norm = psi.squaredNorm();
    std::vector<double> probs;
    for (const auto& s : segs) probs.push_back(k * (s.op * psi).squaredNorm() / norm);
    const int j = pick(t, probs);
    const CzSegment& seg = segs[static_cast<std::size_t>(j)];
    if (probs[static_cast<std::size_t>(j)] <= kZeroProbability) {
      throw Error(ErrorCode::kZeroProbability, "CZ branch has zero probability");
    }
    ++out.record.attempts;
    out.record.probability *= probs[static_cast<std::size_t>(j)];
    for (std::size_t m = 0; m < seg.outcomes.size(); ++m) {
      out.record.outcomes.emplace_back(cz_var(table.geometry.measured[m]), seg.outcomes[m]);
    }
    out.record.outcomes.emplace_back(cz_var(table.geometry.centre), seg.centre_outcome);
    psi = std::sqrt(k) * seg.op * psi;
    realized = seg.op * realized;
    if (seg.success) {
      out.success = true;
      out.success_anchor = table.geometry.anchor;
      out.left_byproduct = local->element(seg.local).rep;
      out.right_byproduct = local->element(right).rep;
      out.record.realized_op = realized;
      out.record.byproduct = out.left_byproduct;
      out.distance = phase_distance(realized, out.left_byproduct * gates::cz() * out.right_byproduct);
      return out;
    }
    right = local->multiply(seg.local, right);
    if (t + 1 < plan.attempts.size()) shared = cz_shared_bits(table.geometry, seg, plan.attempts[t + 1].geometry);
  }
  throw Error(ErrorCode::kLatticeExhausted,
              "every CZ attempt failed within " + std::to_string(plan.cols) + " columns");
}

inline CzRecord logical_cz_sample(const CzPlan& plan, std::uint64_t seed) {
  Rng rng(seed);
  return run_cz(plan, [&](std::size_t, const std::vector<double>& p) {
    double u = rng.uniform();
    int j = 0;
    for (; j + 1 < static_cast<int>(p.size()); ++j) {
      if (u < p[static_cast<std::size_t>(j)]) break;
      u -= p[static_cast<std::size_t>(j)];
    }
    while (p[static_cast<std::size_t>(j)] <= 0 && j > 0) --j;
    return j;
  });
}

/// Forced outcomes keyed by cz_var names ("s<row>_<col>").
inline CzRecord logical_cz_force(const CzPlan& plan, const std::map<std::string, int>& forced) {
  return run_cz(plan, [&](std::size_t t, const std::vector<double>&) {
    const auto& table = plan.attempts[t];
    const auto& g = table.geometry;
    auto value = [&](const SiteCoord& s) {
      const auto it = forced.find(cz_var(s));
      if (it == forced.end()) throw Error(ErrorCode::kInvalidArgument, "no forced outcome for '" + cz_var(s) + "'");
      if (it->second != 0 && it->second != 1) throw Error(ErrorCode::kInvalidArgument, "forced CZ outcome must be a bit");
      return it->second;
    };
    std::vector<int> outs;
    for (const auto& s : g.measured) outs.push_back(value(s));
    const int centre = value(g.centre);
    const auto& segs = table.by_shared.front();
    // Segments of every shared value list outcomes in the same order.
    for (std::size_t j = 0; j < segs.size(); ++j) {
      if (segs[j].outcomes == outs && segs[j].centre_outcome == centre) return static_cast<int>(j);
    }
    throw Error(ErrorCode::kInvalidArgument, "forced outcomes do not name a CZ branch");
  });
}

struct CzEnumeration {
  long long leaves = 0;
  long long success_leaves = 0;
  long long exhausted_leaves = 0;
  double total_probability = 0;
  double success_probability = 0;
  double exhausted_probability = 0;
  std::vector<double> success_by_attempt;
  double max_success_distance = 0;  // realized vs L CZ R over all success leaves
  double max_prefix_distance = 0;   // failed prefixes vs their local by-product
};

/// Every branch of the protocol. Success leaves are checked by explicit
/// products of their segment operators; exhausted leaves through the
/// by-product group, their segments having been checked when the tables
/// were built.
inline CzEnumeration enumerate_logical_cz(const CzPlan& plan) {
  using M4 = Eigen::Matrix<Complex, 4, 4>;
  using V4 = Eigen::Matrix<Complex, 4, 1>;
  const auto local = cz_local_group();
  CzEnumeration e;
  e.success_by_attempt.assign(plan.attempts.size(), 0.0);
  struct Fast {
    M4 op;
    bool success;
    int local;
    int next_shared;
  };
  std::vector<std::vector<std::vector<Fast>>> fast(plan.attempts.size());
  std::vector<std::vector<double>> root_k(plan.attempts.size());
  for (std::size_t t = 0; t < plan.attempts.size(); ++t) {
    const auto& table = plan.attempts[t];
    for (std::size_t sh = 0; sh < table.by_shared.size(); ++sh) {
      std::vector<Fast> row;
      for (const auto& s : table.by_shared[sh]) {
        const int next = t + 1 < plan.attempts.size() ? cz_shared_bits(table.geometry, s, plan.attempts[t + 1].geometry) : 0;
        row.push_back({M4(s.op), s.success, s.local, next});
      }
      fast[t].push_back(std::move(row));
      root_k[t].push_back(std::sqrt(table.calibration[sh]));
    }
  }
  const M4 cz = gates::cz();
  std::map<std::pair<int, int>, int> products;
  auto multiply = [&](int a, int b) {
    auto [it, fresh] = products.try_emplace({a, b}, 0);
    if (fresh) it->second = local->multiply(a, b);
    return it->second;
  };
  std::map<std::pair<int, int>, M4> expected;
  auto recurse = [&](auto&& self, std::size_t t, const V4& psi, const M4& prefix, int right, int shared) -> void {
    const auto& row = fast[t][static_cast<std::size_t>(shared)];
    const double rk = root_k[t][static_cast<std::size_t>(shared)];
    const bool last = t + 1 == plan.attempts.size();
    for (const Fast& f : row) {
      const V4 next = rk * (f.op * psi);
      const double p = next.squaredNorm();
      if (p <= kZeroProbability) continue;
      if (f.success) {
        ++e.leaves;
        ++e.success_leaves;
        e.success_probability += p;
        e.success_by_attempt[t] += p;
        auto [it, fresh] = expected.try_emplace({f.local, right});
        if (fresh) it->second = M4(local->element(f.local).rep) * cz * M4(local->element(right).rep);
        e.max_success_distance = std::max(e.max_success_distance, phase_distance(f.op * prefix, it->second));
        continue;
      }
      if (last) {
        ++e.leaves;
        ++e.exhausted_leaves;
        e.exhausted_probability += p;
        continue;
      }
      const M4 pre = f.op * prefix;
      const int r = multiply(f.local, right);
      e.max_prefix_distance = std::max(e.max_prefix_distance, phase_distance(pre, local->element(r).rep));
      self(self, t + 1, next, pre, r, f.next_shared);
    }
  };
  recurse(recurse, 0, V4(cz_input()), M4::Identity(), local->identity_index(), 0);
  e.total_probability = e.success_probability + e.exhausted_probability;
  return e;
}

/// Adaptive pattern of the first attempt at `anchor`, for running against a
/// dense simulation: the centre defaults to Y and is overridden to Z when
/// any other outcome of the attempt is 1.
inline MeasurementPattern cz_attempt_pattern(int cols, int anchor) {
  const auto g = cz_geometry(cols, anchor, true);
  MeasurementPattern p;
  PatternStep centre{g.centre, BasisSpec::y(), cz_var(g.centre), {}};
  for (const auto& s : g.measured) {
    p.steps.push_back({s, s.row == 1 ? BasisSpec::z() : BasisSpec::x(), cz_var(s), {}});
    p.outcome_vars.push_back(cz_var(s));
    centre.adapt.push_back({cz_var(s), 1, AdaptAction::kOverride, BasisSpec::z()});
  }
  p.steps.push_back(centre);
  p.outcome_vars.push_back(cz_var(g.centre));
  return p;
}

}  // namespace corrspace
