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

// JSON forms of patterns, resource descriptions, states, matrices and
// groups. Doubles are written in shortest round-trip form, so
// parse(dump(x)) == x bit for bit. Objects keep insertion order.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrspace/errors.hpp"
#include "corrspace/group.hpp"
#include "corrspace/mps.hpp"
#include "corrspace/pattern.hpp"
#include "corrspace/resources.hpp"
#include "corrspace/statevec.hpp"

namespace corrspace {

using Json = nlohmann::ordered_json;

namespace detail {

template <class F>
auto parse_guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices and states: interleaved (re, im), row-major
// ---------------------------------------------------------------------------

inline Json complex_array(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v(i).real());
    a.push_back(v(i).imag());
  }
  return a;
}

inline Vector complex_array_from_json(const Json& a) {
  if (!a.is_array() || a.size() % 2) throw Error(ErrorCode::kParse, "complex array must hold (re, im) pairs");
  Vector v(static_cast<Eigen::Index>(a.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = {a.at(static_cast<std::size_t>(2 * i)).get<double>(), a.at(static_cast<std::size_t>(2 * i + 1)).get<double>()};
  }
  return v;
}

inline Json to_json(const Matrix& m) {
  Vector flat(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat(r * m.cols() + c) = m(r, c);
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", complex_array(flat)}};
}

inline Matrix matrix_from_json(const Json& j) {
  return detail::parse_guard("matrix", [&] {
    const auto rows = detail::field(j, "rows").get<Eigen::Index>();
    const auto cols = detail::field(j, "cols").get<Eigen::Index>();
    const Vector flat = complex_array_from_json(detail::field(j, "data"));
    if (rows < 0 || cols < 0 || flat.size() != rows * cols) throw Error(ErrorCode::kParse, "matrix data size");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat(r * cols + c);
    }
    return m;
  });
}

inline Json to_json(const PureState& s) { return Json{{"dims", s.dims()}, {"amps", complex_array(s.amps())}}; }

inline PureState state_from_json(const Json& j) {
  return detail::parse_guard("state", [&] {
    return PureState(detail::field(j, "dims").get<std::vector<int>>(), complex_array_from_json(detail::field(j, "amps")));
  });
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

inline Json to_json(const BasisSpec& b) {
  Json j{{"kind", basis_kind_name(b.kind)}, {"phi", b.phi}};
  if (b.kind == BasisKind::kZ && b.dim != 2) j["dim"] = b.dim;
  return j;
}

inline BasisSpec basis_from_json(const Json& j) {
  return detail::parse_guard("basis", [&] {
    BasisSpec b;
    b.kind = basis_kind_from_name(detail::field(j, "kind").get<std::string>());
    b.phi = j.value("phi", 0.0);
    b.dim = b.kind == BasisKind::kAkltPhase ? 3 : 2;
    if (j.contains("dim")) {
      if (b.kind != BasisKind::kZ) throw Error(ErrorCode::kParse, "only Z bases take a dimension");
      b.dim = j.at("dim").get<int>();
      if (b.dim < 2) throw Error(ErrorCode::kParse, "basis dimension must be at least 2");
    }
    return b;
  });
}

inline Json to_json(const AdaptRule& r) {
  Json j{{"on", r.on}, {"equals", r.equals}, {"action", adapt_action_name(r.action)}};
  if (r.basis) j["basis"] = to_json(*r.basis);
  return j;
}

inline AdaptRule adapt_from_json(const Json& j) {
  return detail::parse_guard("adapt rule", [&] {
    AdaptRule r;
    r.on = detail::field(j, "on").get<std::string>();
    r.equals = detail::field(j, "equals").get<int>();
    r.action = adapt_action_from_name(detail::field(j, "action").get<std::string>());
    if (j.contains("basis")) r.basis = basis_from_json(j.at("basis"));
    return r;
  });
}

inline Json to_json(const MeasurementPattern& p) {
  Json steps = Json::array();
  for (const auto& st : p.steps) {
    Json adapt = Json::array();
    for (const auto& r : st.adapt) adapt.push_back(to_json(r));
    steps.push_back(Json{{"site", {st.site.row, st.site.col}}, {"basis", to_json(st.basis)}, {"var", st.var}, {"adapt", adapt}});
  }
  Json rules = Json::array();
  for (const auto& r : p.byproduct_rules) rules.push_back(Json{{"on", r.on}, {"equals", r.equals}, {"word", r.word}});
  return Json{{"steps", steps}, {"outcome_vars", p.outcome_vars}, {"byproduct_rules", rules}};
}

/// A single adapt rule may be given as an object instead of a list.
inline MeasurementPattern pattern_from_json(const Json& j) {
  MeasurementPattern p = detail::parse_guard("pattern", [&] {
    MeasurementPattern out;
    for (const auto& s : detail::field(j, "steps")) {
      PatternStep st;
      const auto site = detail::field(s, "site").get<std::vector<int>>();
      if (site.size() != 2) throw Error(ErrorCode::kParse, "site must be [row, col]");
      st.site = {site[0], site[1]};
      st.basis = basis_from_json(detail::field(s, "basis"));
      st.var = detail::field(s, "var").get<std::string>();
      if (s.contains("adapt")) {
        const Json& a = s.at("adapt");
        if (a.is_object()) {
          st.adapt.push_back(adapt_from_json(a));
        } else {
          for (const auto& r : a) st.adapt.push_back(adapt_from_json(r));
        }
      }
      out.steps.push_back(std::move(st));
    }
    out.outcome_vars = j.value("outcome_vars", std::vector<std::string>{});
    if (j.contains("byproduct_rules")) {
      for (const auto& r : j.at("byproduct_rules")) {
        out.byproduct_rules.push_back({detail::field(r, "on").get<std::string>(), detail::field(r, "equals").get<int>(),
                                       detail::field(r, "word").get<std::vector<std::string>>()});
      }
    }
    return out;
  });
  validate(p);
  return p;
}

inline Json parse_json_text(const std::string& text) {
  return detail::parse_guard("json", [&] { return Json::parse(text); });
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

inline Json to_json(const ProtocolRecord& r, bool with_state = false) {
  Json outs = Json::object();
  for (const auto& [v, o] : r.outcomes) outs[v] = o;
  Json j{{"outcomes", outs}, {"probability", r.probability}, {"attempts", r.attempts}, {"aborted", r.aborted}};
  if (r.realized_op.size()) j["realized_op"] = to_json(r.realized_op);
  if (r.byproduct.size()) j["byproduct"] = to_json(r.byproduct);
  if (with_state && r.post_state) j["post_state"] = to_json(*r.post_state);
  return j;
}

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

inline Json to_json(const ProjectiveGroup& g, const std::vector<std::string>& generator_names = {}) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    Json e{{"index", i}, {"matrix", to_json(g.generators()[i])}};
    if (i < generator_names.size()) e["name"] = generator_names[i];
    gens.push_back(e);
  }
  Json elems = Json::array();
  for (int i = 0; i < g.order(); ++i) {
    Json word = Json::array();
    for (int w : g.element(i).word) {
      if (static_cast<std::size_t>(w) < generator_names.size()) {
        word.push_back(generator_names[static_cast<std::size_t>(w)]);
      } else {
        word.push_back(w);
      }
    }
    elems.push_back(Json{{"index", i}, {"word", word}, {"rep", to_json(g.element(i).rep)}});
  }
  return Json{{"order", g.order()}, {"dim", g.dim()}, {"generators", gens}, {"elements", elems}};
}

// ---------------------------------------------------------------------------
// Resource descriptions
// ---------------------------------------------------------------------------

/// family is one of correlation (k, n), aklt (n), product (n), cluster (n),
/// lattice (rows, cols) or encoded (k, m, optional logical edges).
struct ResourceSpec {
  std::string family = "correlation";
  int k = 3;
  int n = 8;
  int rows = 3;
  int cols = 4;
  int m = 2;
  std::vector<std::pair<int, int>> edges;

  bool is_chain() const { return family == "correlation" || family == "aklt" || family == "product" || family == "cluster"; }
  bool operator==(const ResourceSpec&) const = default;
};

inline void validate(const ResourceSpec& r) {
  if (r.family == "correlation") {
    if (r.k < 3) throw Error(ErrorCode::kInvalidArgument, "correlation chain needs k >= 3");
  } else if (r.family == "lattice") {
    if (r.rows < 1 || r.cols < 1) throw Error(ErrorCode::kInvalidArgument, "lattice needs rows, cols >= 1");
    return;
  } else if (r.family == "encoded") {
    validate(EncodedResourceSpec{r.k, r.m, r.edges});
    return;
  } else if (r.family != "aklt" && r.family != "product" && r.family != "cluster") {
    throw Error(ErrorCode::kUnknownLabel, "unknown resource family '" + r.family + "'");
  }
  if (r.n < 1) throw Error(ErrorCode::kInvalidArgument, "chain needs n >= 1");
}

inline Json to_json(const ResourceSpec& r) {
  Json j{{"family", r.family}};
  if (r.family == "correlation") j["k"] = r.k;
  if (r.is_chain()) j["n"] = r.n;
  if (r.family == "lattice") {
    j["rows"] = r.rows;
    j["cols"] = r.cols;
  }
  if (r.family == "encoded") {
    j["k"] = r.k;
    j["m"] = r.m;
    if (!r.edges.empty()) j["edges"] = r.edges;
  }
  return j;
}

inline ResourceSpec resource_from_json(const Json& j) {
  ResourceSpec r = detail::parse_guard("resource", [&] {
    ResourceSpec out;
    out.family = detail::field(j, "family").get<std::string>();
    out.k = j.value("k", out.family == "encoded" ? 2 : 3);
    out.n = j.value("n", out.n);
    out.rows = j.value("rows", out.rows);
    out.cols = j.value("cols", out.cols);
    out.m = j.value("m", out.m);
    if (j.contains("edges")) out.edges = j.at("edges").get<std::vector<std::pair<int, int>>>();
    return out;
  });
  validate(r);
  return r;
}

/// "family" or "family:key=value,key=value"; a leading '{' is read as JSON.
inline ResourceSpec parse_resource(const std::string& text) {
  if (!text.empty() && text.front() == '{') return resource_from_json(parse_json_text(text));
  const auto colon = text.find(':');
  Json j{{"family", text.substr(0, colon)}};
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kParse, "resource parameter '" + item + "' lacks '='");
      const std::string key = item.substr(0, eq);
      if (key != "k" && key != "n" && key != "rows" && key != "cols" && key != "m") {
        throw Error(ErrorCode::kParse, "unknown resource parameter '" + key + "'");
      }
      j[key] = detail::parse_guard("resource parameter", [&] { return std::stoi(item.substr(eq + 1)); });
    }
  }
  return resource_from_json(j);
}

inline MpsChain resource_chain(const ResourceSpec& r) {
  validate(r);
  if (r.family == "correlation") return correlation_chain(r.k, r.n);
  if (r.family == "aklt") return aklt_type_chain(r.n);
  if (r.family == "product") return product_chain(r.n);
  if (r.family == "cluster") return cluster_chain(r.n);
  throw Error(ErrorCode::kInvalidArgument, "resource '" + r.family + "' is not a chain");
}

inline PureState resource_state(const ResourceSpec& r) {
  validate(r);
  if (r.is_chain()) return to_statevector(resource_chain(r), true).state;
  if (r.family == "lattice") return weighted_graph_state(weighted_graph(r.rows, r.cols));
  return encoded_resource(EncodedResourceSpec{r.k, r.m, r.edges});
}

}  // namespace corrspace
