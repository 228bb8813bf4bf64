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

// Tensor-network form of the weighted graph state. Every site carries
//
//   A[s] = S^s|+>_ru  S^s|+>_lu  Z^s|+>_r  <s|_ld <s|_rd <s|_l
//
// so the outgoing legs (ru, lu, r) hold kets and the incoming legs
// (ld, rd, l) are bras fixed to the physical value s.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corrspace/linalg.hpp"
#include "corrspace/resources.hpp"
#include "corrspace/statevec.hpp"
#include "corrspace/tensor.hpp"

namespace corrspace {

inline const std::vector<std::string>& wgs_outgoing_legs() {
  static const std::vector<std::string> legs = {"ru", "lu", "r"};
  return legs;
}

inline const std::vector<std::string>& wgs_incoming_legs() {
  static const std::vector<std::string> legs = {"ld", "rd", "l"};
  return legs;
}

/// Vector carried by one leg of a site whose physical value is s.
inline Vector wgs_leg_vector(const std::string& leg, int s) {
  if (leg == "ru" || leg == "lu") return (s ? gates::s() : identity(2)) * ket_plus();
  if (leg == "r") return (s ? gates::z() : identity(2)) * ket_plus();
  if (leg == "ld" || leg == "rd" || leg == "l") return basis_ket(2, s);
  throw Error(ErrorCode::kUnknownLabel, "unknown site leg '" + leg + "'");
}

/// A[s] for fixed s, labels (ru, lu, r, ld, rd, l).
inline LabeledTensor wgs_site_tensor(int s) {
  if (s != 0 && s != 1) throw Error(ErrorCode::kInvalidArgument, "site value must be 0 or 1");
  LabeledTensor t;
  for (const auto& leg : wgs_outgoing_legs()) {
    t = contract(t, LabeledTensor::from_vector(leg, wgs_leg_vector(leg, s)), {});
  }
  for (const auto& leg : wgs_incoming_legs()) {
    t = contract(t, LabeledTensor::from_vector(leg, wgs_leg_vector(leg, s)), {});
  }
  return t;
}

/// Full site tensor with the physical index first: labels (s, ru, lu, r, ld, rd, l).
inline LabeledTensor wgs_site_tensor_full() {
  std::vector<Complex> data;
  for (int s = 0; s < 2; ++s) {
    const LabeledTensor t = wgs_site_tensor(s);
    const auto& d = t.data();
    data.insert(data.end(), d.begin(), d.end());
  }
  return LabeledTensor({"s", "ru", "lu", "r", "ld", "rd", "l"}, std::vector<int>(7, 2), std::move(data));
}

/// Boundary vectors: |0> closes ru, lu, r; |+> closes ld, rd, l.
inline std::map<std::string, Vector> wgs_boundary() {
  return {{"ru", basis_ket(2, 0)}, {"lu", basis_ket(2, 0)}, {"r", basis_ket(2, 0)},
          {"ld", ket_plus()},     {"rd", ket_plus()},     {"l", ket_plus()}};
}

struct SiteCoord {
  int row = 0;
  int col = 0;
  auto operator<=>(const SiteCoord&) const = default;
};

/// Neighbor reached through a leg, or nullopt off the lattice.
inline std::optional<SiteCoord> wgs_leg_partner(int rows, int cols, SiteCoord at, const std::string& leg) {
  SiteCoord p = at;
  if (leg == "r") p.col += 1;
  else if (leg == "l") p.col -= 1;
  else if (leg == "ru") { p.row -= 1; p.col += 1; }
  else if (leg == "lu") { p.row -= 1; p.col -= 1; }
  else if (leg == "ld") { p.row += 1; p.col -= 1; }
  else if (leg == "rd") { p.row += 1; p.col += 1; }
  else throw Error(ErrorCode::kUnknownLabel, "unknown site leg '" + leg + "'");
  if (p.row < 0 || p.col < 0 || p.row >= rows || p.col >= cols) return std::nullopt;
  return p;
}

/// Leg on the partner that pairs with `leg`.
inline std::string wgs_opposite_leg(const std::string& leg) {
  if (leg == "r") return "l";
  if (leg == "l") return "r";
  if (leg == "ru") return "ld";
  if (leg == "ld") return "ru";
  if (leg == "lu") return "rd";
  if (leg == "rd") return "lu";
  throw Error(ErrorCode::kUnknownLabel, "unknown site leg '" + leg + "'");
}

/// Name of the bond between `at` and its partner through `leg`.
inline std::string wgs_bond_name(SiteCoord at, const std::string& leg) {
  // Name bonds by the emitting site and its outgoing leg.
  SiteCoord emitter = at;
  std::string out_leg = leg;
  if (leg == "l") {
    emitter.col -= 1;
  } else if (leg == "ld") {
    emitter.row += 1;
    emitter.col -= 1;
  } else if (leg == "rd") {
    emitter.row += 1;
    emitter.col += 1;
  }
  if (leg == "l" || leg == "ld" || leg == "rd") out_leg = wgs_opposite_leg(leg);
  return out_leg + ":" + std::to_string(emitter.row) + "," + std::to_string(emitter.col);
}

inline std::string wgs_phys_label(int index) { return "p" + std::to_string(index); }

/// Contracts the rows x cols network with the stated boundary vectors.
/// Sites listed in `projections` have their physical index contracted
/// against the given ket (<phi|s> convention); the rest stay open with
/// labels p<index>. Rows listed in `open_rows` keep their left and right
/// horizontal legs open as in<row> / out<row> instead of closing them.
inline LabeledTensor contract_wgs_network(int rows, int cols,
                                          const std::map<int, Vector>& projections = {},
                                          const std::vector<int>& open_rows = {}) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::kInvalidArgument, "lattice needs rows, cols >= 1");
  const std::set<int> open(open_rows.begin(), open_rows.end());
  const auto boundary = wgs_boundary();
  const LabeledTensor full = wgs_site_tensor_full();
  LabeledTensor acc;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      LabeledTensor t;
      if (auto it = projections.find(v); it != projections.end()) {
        t = contract(LabeledTensor::from_vector("s", it->second.conjugate()), full, {{"s", "s"}});
      } else {
        t = full.relabeled({{"s", wgs_phys_label(v)}});
      }
      std::map<std::string, std::string> renames;
      for (const std::string leg : {"ru", "lu", "r", "ld", "rd", "l"}) {
        const auto partner = wgs_leg_partner(rows, cols, {r, c}, leg);
        if (partner) {
          renames[leg] = wgs_bond_name({r, c}, leg);
        } else if (open.count(r) && leg == "l") {
          renames[leg] = "in" + std::to_string(r);
        } else if (open.count(r) && leg == "r") {
          renames[leg] = "out" + std::to_string(r);
        } else {
          t = contract(t, LabeledTensor::from_vector(leg, boundary.at(leg)), {{leg, leg}});
        }
      }
      acc = contract_shared(acc, t.relabeled(renames));
    }
  }
  return acc;
}

/// Physical state of the network with every site open, in row-major site order.
inline PureState wgs_network_state(int rows, int cols) {
  const LabeledTensor t = contract_wgs_network(rows, cols);
  std::vector<std::string> order;
  for (int v = 0; v < rows * cols; ++v) order.push_back(wgs_phys_label(v));
  return PureState(std::vector<int>(static_cast<std::size_t>(rows * cols), 2), t.to_vector(order));
}

/// Correlation-space operator of a block of measured sites.
///
/// `core` sites are contracted in full with their kets. `halo` sites must be
/// Z-measured (their kets are computational basis states); they only
/// contribute the legs they share with the core. Horizontal legs of the
/// logical rows crossing the left/right edge of the core stay open as
/// in<row> / out<row>. Any other leg leaving the core must end on a halo
/// site or off the lattice.
inline LabeledTensor region_tensor(int rows, int cols, const std::map<SiteCoord, Vector>& core,
                                   const std::map<SiteCoord, int>& halo_z,
                                   const std::vector<int>& logical_rows) {
  const auto boundary = wgs_boundary();
  const LabeledTensor full = wgs_site_tensor_full();
  const std::set<int> logical(logical_rows.begin(), logical_rows.end());
  LabeledTensor acc;
  for (const auto& [at, ket] : core) {
    LabeledTensor t = contract(LabeledTensor::from_vector("s", ket.conjugate()), full, {{"s", "s"}});
    std::map<std::string, std::string> renames;
    for (const std::string leg : {"ru", "lu", "r", "ld", "rd", "l"}) {
      const auto partner = wgs_leg_partner(rows, cols, at, leg);
      if (!partner) {
        if (logical.count(at.row) && (leg == "l" || leg == "r")) {
          renames[leg] = (leg == "l" ? "in" : "out") + std::to_string(at.row);
        } else {
          t = contract(t, LabeledTensor::from_vector(leg, boundary.at(leg)), {{leg, leg}});
        }
      } else if (core.count(*partner)) {
        renames[leg] = wgs_bond_name(at, leg);
      } else if (auto h = halo_z.find(*partner); h != halo_z.end()) {
        const Vector partner_leg = wgs_leg_vector(wgs_opposite_leg(leg), h->second);
        t = contract(t, LabeledTensor::from_vector(leg, partner_leg), {{leg, leg}});
      } else if (logical.count(at.row) && (leg == "l" || leg == "r")) {
        renames[leg] = (leg == "l" ? "in" : "out") + std::to_string(at.row);
      } else {
        throw Error(ErrorCode::kInvalidArgument, "region leg leaves the core through an unmeasured site");
      }
    }
    acc = contract_shared(acc, t.relabeled(renames));
  }
  return acc;
}

/// region_tensor flattened to a matrix: rows are out<logical_rows...>,
/// columns in<logical_rows...>, first listed row most significant.
inline Matrix region_operator(int rows, int cols, const std::map<SiteCoord, Vector>& core,
                              const std::map<SiteCoord, int>& halo_z, const std::vector<int>& logical_rows) {
  const LabeledTensor t = region_tensor(rows, cols, core, halo_z, logical_rows);
  std::vector<std::string> outs, ins;
  for (int r : logical_rows) {
    outs.push_back("out" + std::to_string(r));
    ins.push_back("in" + std::to_string(r));
  }
  return t.to_matrix(outs, ins);
}

}  // namespace corrspace
