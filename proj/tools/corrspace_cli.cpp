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

// corrspace command-line front end. Every command writes one JSON document
// (to stdout or --out). Failures write {"error": {...}} and exit with 1.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrspace/corrspace.hpp"

using namespace corrspace;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "not a number: '" + s + "'");
  }
}

/// Gate names (H, S, X, G5, ...), S(phi), RX(t), RY(t), RZ(t).
Matrix parse_target(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return gates::by_name(text);
  if (text.back() != ')') throw Error(ErrorCode::kParse, "unbalanced target '" + text + "'");
  const std::string name = text.substr(0, open);
  const double arg = parse_double(text.substr(open + 1, text.size() - open - 2));
  if (name == "S") return gates::sphi(arg);
  if (name == "RX") return rotation(gates::x(), arg);
  if (name == "RY") return rotation(gates::y(), arg);
  if (name == "RZ") return rotation(gates::z(), arg);
  throw Error(ErrorCode::kParse, "unknown target '" + text + "'");
}

/// "a=1,b=0" -> map
std::map<std::string, int> parse_assignments(const std::string& text) {
  std::map<std::string, int> out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "expected var=bit in '" + item + "'");
    out[item.substr(0, eq)] = static_cast<int>(parse_double(item.substr(eq + 1)));
  }
  return out;
}

Matrix parse_observable(const std::string& name, int dim) {
  if (dim == 2) return gates::by_name(name);
  if (dim == 3 && name == "Z") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1;
    m(2, 2) = -1;
    return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "observable '" + name + "' is not defined for this site dimension");
}

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
    out << text;
  }
  void write(const Json& j) const { write(j.dump(2) + "\n"); }
};

// ---------------------------------------------------------------------------

struct CorrelationsArgs {
  std::string resource = "correlation:k=3,n=12";
  std::string observable = "Z";
  int max_r = 5;
  int site = -1;
  std::string format = "json";
};

void cmd_correlations(const CorrelationsArgs& a, const Output& out) {
  const ResourceSpec spec = parse_resource(a.resource);
  const MpsChain chain = resource_chain(spec);
  const int i = a.site >= 0 ? a.site : (chain.size() - a.max_r - 1) / 2;
  if (a.max_r < 1 || i < 0 || i + a.max_r >= chain.size()) {
    throw Error(ErrorCode::kInvalidArgument, "chain too short for the requested separations");
  }
  const Matrix obs = parse_observable(a.observable, chain.phys_dim(i));
  Json rows = Json::array();
  std::optional<double> prev;
  for (int r = 1; r <= a.max_r; ++r) {
    double c = two_point_correlation_transfer(chain, obs, i, r);
    if (std::abs(c) < 1e-15) c = 0.0;
    Json row{{"r", r}, {"correlator", c}};
    row["ratio"] = prev && std::abs(*prev) > 1e-12 ? Json(c / *prev) : Json(nullptr);
    rows.push_back(row);
    prev = c;
  }
  const Json j{{"command", "correlations"}, {"resource", to_json(spec)}, {"observable", a.observable}, {"site", i}, {"rows", rows}};
  if (a.format == "json") {
    out.write(j);
    return;
  }
  std::ostringstream text;
  text << std::setw(4) << "r" << std::setw(26) << "correlator" << std::setw(26) << "ratio" << "\n";
  for (const auto& row : rows) {
    text << std::setw(4) << row["r"].get<int>() << std::setw(26) << std::setprecision(17) << row["correlator"].get<double>();
    if (row["ratio"].is_null()) {
      text << std::setw(26) << "-";
    } else {
      text << std::setw(26) << std::setprecision(17) << row["ratio"].get<double>();
    }
    text << "\n";
  }
  out.write(text.str());
}

// ---------------------------------------------------------------------------

void cmd_group(const std::string& generators, int max_order, const Output& out) {
  const auto names = split(generators, ',');
  if (names.empty()) throw Error(ErrorCode::kInvalidArgument, "no generators given");
  std::vector<Matrix> gens;
  for (const auto& n : names) gens.push_back(gates::by_name(n));
  const ProjectiveGroup g = closure(gens, kDefaultTol, max_order);
  Json j = to_json(g, names);
  Json orders = Json::object();
  for (std::size_t a = 0; a < gens.size(); ++a) {
    const int ga = g.require(gens[a]);
    int order = 1;
    for (int e = ga; e != g.identity_index(); e = g.multiply(e, ga)) ++order;
    orders[names[a]] = order;
  }
  // a b a^-1 for each generator pair, with a flag for a b a^-1 = b^-1.
  Json relations = Json::array();
  for (std::size_t a = 0; a < gens.size(); ++a) {
    for (std::size_t b = 0; b < gens.size(); ++b) {
      if (a == b) continue;
      const int ga = g.require(gens[a]), gb = g.require(gens[b]);
      const int conj = g.multiply(g.multiply(ga, gb), g.inverse(ga));
      relations.push_back(Json{{"conjugator", names[a]}, {"of", names[b]}, {"element", conj},
                               {"inverts", conj == g.inverse(gb)}, {"commutes", conj == gb}});
    }
  }
  Json head{{"command", "group"}, {"generator_orders", orders}, {"relations", relations}};
  for (auto& [k, v] : j.items()) head[k] = v;
  out.write(head);
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string resource;
  std::string pattern;
  std::string builtin;
  std::string mode = "enumerate";
  std::optional<std::uint64_t> seed;
  std::string force;
  std::string target = "H";
  std::string family = "aklt";
  int cols = 9;
  int anchor = 0;
  bool states = false;
};

RunMode run_mode(const RunArgs& a) {
  if (a.mode == "enumerate") return RunMode::enumerate();
  if (a.mode == "sample") {
    if (!a.seed) throw Error(ErrorCode::kInvalidArgument, "sample mode requires --seed");
    return RunMode::sample(*a.seed);
  }
  if (a.mode == "force") return RunMode::force(parse_assignments(a.force));
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + a.mode + "'");
}

Json records_json(const std::vector<ProtocolRecord>& recs, bool states) {
  Json branches = Json::array();
  double total = 0;
  for (const auto& r : recs) {
    branches.push_back(to_json(r, states));
    total += r.probability;
  }
  return Json{{"branch_count", recs.size()}, {"total_probability", total}, {"branches", branches}};
}

Json single_qubit(const RunArgs& a) {
  const FamilySpec f = family_from_name(a.family);
  const Matrix target = parse_target(a.target);
  const CompiledGate c = compile_single_qubit(target, f);
  Json rotations = Json::array();
  for (const auto& r : c.plan.rotations) rotations.push_back(Json{{"axis", r.axis}, {"angle", r.angle}});
  Json j{{"command", "run"},
         {"builtin", "single-qubit"},
         {"family", f.name()},
         {"target", a.target},
         {"target_matrix", to_json(target)},
         {"plan", Json{{"rotations", rotations}, {"initial_frame", c.plan.initial_frame}, {"residual", c.plan.residual}}},
         {"pattern", to_json(c.pattern)},
         {"mode", a.mode}};
  if (a.mode == "sample") {
    if (!a.seed) throw Error(ErrorCode::kInvalidArgument, "sample mode requires --seed");
    Rng rng(*a.seed);
    const SingleQubitRun run = execute_single_qubit(c.plan, rng);
    Json steps = Json::array();
    for (const auto& s : run.steps) {
      steps.push_back(Json{{"kind", step_kind_name(s.kind)}, {"basis", to_json(s.basis)}, {"outcome", s.outcome},
                           {"probability", s.probability}, {"frame", s.frame}});
    }
    j["adaptive_run"] = Json{{"steps", steps}, {"realized_op", to_json(run.realized)}, {"frame", run.frame},
                             {"probability", run.probability}, {"residual", run.residual},
                             {"wait_steps", run.wait_steps}, {"compensation_steps", run.compensation_steps}};
    return j;
  }
  const MpsChain chain = family_chain(f, static_cast<int>(c.pattern.steps.size()) + 1);
  RunMode mode = run_mode(a);
  if (mode.kind == RunMode::Kind::kForce && a.force.empty()) mode.forced = c.reference;
  if (c.pattern.steps.empty()) {
    j["result"] = Json{{"branch_count", 0}, {"note", "target realized by the initial frame alone"}};
  } else {
    j["result"] = records_json(run_pattern(chain, c.pattern, mode), a.states);
  }
  j["reference"] = Json{{"outcomes", c.reference}, {"realized_op", to_json(c.reference_op)}, {"byproduct", to_json(c.byproduct)}};
  return j;
}

Json cz_record_json(const CzRecord& rec) {
  Json j{{"success", rec.success}, {"success_anchor", rec.success_anchor}, {"distance", rec.distance}};
  const Json base = to_json(rec.record);
  for (const auto& [k, v] : base.items()) j[k] = v;
  j["left_byproduct"] = to_json(rec.left_byproduct);
  j["right_byproduct"] = to_json(rec.right_byproduct);
  if (rec.success) {
    // c-basis action once the recorded by-products are stripped
    const Matrix core = rec.left_byproduct.inverse() * rec.record.realized_op * rec.right_byproduct.inverse();
    Json diag = Json::array();
    for (int c = 0; c < 4; ++c) {
      const Complex v = core(c, c) / core(0, 0);
      diag.push_back(Json::array({v.real(), v.imag()}));
    }
    j["cz_diagonal"] = diag;
  }
  return j;
}

Json logical_cz(const RunArgs& a) {
  const CzPlan plan = plan_logical_cz(a.cols, a.anchor);
  Json j{{"command", "run"}, {"builtin", "logical-cz"}, {"rows", kCzRows}, {"cols", a.cols}, {"anchor", a.anchor}, {"mode", a.mode}};
  if (a.mode == "sample") {
    if (!a.seed) throw Error(ErrorCode::kInvalidArgument, "sample mode requires --seed");
    j["result"] = cz_record_json(logical_cz_sample(plan, *a.seed));
  } else if (a.mode == "force") {
    // Unlisted outcomes default to 0.
    std::map<std::string, int> forced;
    for (const auto& t : plan.attempts) {
      for (const auto& s : t.geometry.measured) forced[cz_var(s)] = 0;
      forced[cz_var(t.geometry.centre)] = 0;
    }
    for (const auto& [k, v] : parse_assignments(a.force)) {
      if (!forced.count(k)) throw Error(ErrorCode::kUnknownLabel, "no outcome variable '" + k + "'");
      forced[k] = v;
    }
    j["result"] = cz_record_json(logical_cz_force(plan, forced));
  } else if (a.mode == "enumerate") {
    const CzEnumeration e = enumerate_logical_cz(plan);
    j["result"] = Json{{"leaves", e.leaves},
                       {"success_leaves", e.success_leaves},
                       {"exhausted_leaves", e.exhausted_leaves},
                       {"total_probability", e.total_probability},
                       {"success_probability", e.success_probability},
                       {"exhausted_probability", e.exhausted_probability},
                       {"success_by_attempt", e.success_by_attempt},
                       {"max_success_distance", e.max_success_distance},
                       {"max_prefix_distance", e.max_prefix_distance}};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + a.mode + "'");
  }
  return j;
}

void cmd_run(const RunArgs& a, const Output& out) {
  if (!a.builtin.empty() && !a.pattern.empty()) throw Error(ErrorCode::kInvalidArgument, "--builtin and --pattern are exclusive");
  if (a.builtin == "single-qubit") {
    out.write(single_qubit(a));
    return;
  }
  if (a.builtin == "logical-cz") {
    out.write(logical_cz(a));
    return;
  }
  if (!a.builtin.empty()) throw Error(ErrorCode::kUnknownLabel, "unknown builtin '" + a.builtin + "'");
  if (a.pattern.empty()) throw Error(ErrorCode::kInvalidArgument, "run needs --pattern or --builtin");
  if (a.resource.empty()) throw Error(ErrorCode::kInvalidArgument, "run --pattern needs --resource");
  const MeasurementPattern p = pattern_from_json(read_json_file(a.pattern));
  const ResourceSpec spec = parse_resource(a.resource);
  const RunMode mode = run_mode(a);
  std::vector<ProtocolRecord> recs;
  if (spec.is_chain()) {
    recs = run_pattern(resource_chain(spec), p, mode);
  } else {
    const int cols = spec.family == "lattice" ? spec.cols : EncodedResourceSpec{spec.k, spec.m, spec.edges}.qubit_count();
    recs = run_pattern(resource_state(spec), cols, p, mode);
  }
  Json j{{"command", "run"}, {"resource", to_json(spec)}, {"mode", a.mode}, {"pattern", to_json(p)}};
  if (a.seed) j["seed"] = *a.seed;
  j["result"] = records_json(recs, a.states);
  out.write(j);
}

// ---------------------------------------------------------------------------

struct EncodedArgs {
  int k = 2;
  int m = 2;
  std::string analysis = "entropy";
  std::string psi = "plus";
  int block = 0;
  std::optional<std::uint64_t> seed;
  double tol = 1e-9;
};

Vector parse_logical(const std::string& s) {
  Vector v(2);
  if (s == "plus" || s == "+") {
    v << 1, 1;
  } else if (s == "minus" || s == "-") {
    v << 1, -1;
  } else if (s == "0") {
    v << 1, 0;
  } else if (s == "1") {
    v << 0, 1;
  } else {
    // theta,phi on the Bloch sphere
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw Error(ErrorCode::kParse, "logical state must be plus, minus, 0, 1 or theta,phi");
    const double th = parse_double(parts[0]), ph = parse_double(parts[1]);
    v << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
  }
  return v.normalized();
}

void cmd_encoded(const EncodedArgs& a, const Output& out) {
  const EncodedResourceSpec spec{a.k, a.m, {}};
  validate(spec);
  Json j{{"command", "encoded"}, {"k", a.k}, {"m", a.m}, {"analysis", a.analysis}};
  if (a.analysis == "entropy") {
    Json sites = Json::array();
    for (const auto& e : site_entropies(encoded_resource(spec))) {
      sites.push_back(Json{{"site", e.site}, {"s_z", e.s_z}, {"s_vn", e.s_vn}});
    }
    j["prediction_s_z"] = encoded_sz_prediction(a.k);
    j["sites"] = sites;
  } else if (a.analysis == "decode") {
    const PureState phi = encoded_phi(spec);
    const int n = spec.qubit_count(), w = spec.block_length();
    std::map<std::vector<int>, int> owner;
    bool bijective = true;
    Json table = Json::array();
    for (int t = 0; t < w; ++t) {
      const PureState term = translate(phi, t);
      std::map<std::vector<int>, int> windows;
      for (Eigen::Index i = 0; i < term.amps().size(); ++i) {
        if (std::abs(term.amps()(i)) < 1e-12) continue;
        std::vector<int> bits;
        for (int s = 0; s < w; ++s) bits.push_back(static_cast<int>((i >> (n - 1 - s)) & 1));
        windows[bits] = decode_marker(bits, a.k);
      }
      Json rows = Json::array();
      for (const auto& [bits, d] : windows) {
        std::string str;
        for (int b : bits) str += static_cast<char>('0' + b);
        rows.push_back(Json{{"window", str}, {"decoded", d}});
        bijective = bijective && d == t;
        const auto [it, fresh] = owner.emplace(bits, t);
        bijective = bijective && (fresh || it->second == t);
      }
      table.push_back(Json{{"t", t}, {"windows", rows}});
    }
    j["table"] = table;
    j["bijective"] = bijective;
  } else if (a.analysis == "discriminate") {
    if (a.block < 0 || a.block >= a.m) throw Error(ErrorCode::kInvalidArgument, "block out of range");
    const Vector psi = parse_logical(a.psi);
    Vector perp(2);
    perp << -std::conj(psi(1)), std::conj(psi(0));
    std::optional<Rng> rng;
    if (a.seed) rng.emplace(*a.seed);
    const auto branches = walgate_discriminate(encoded_phi(spec), codeword_sites(spec, a.block), psi, rng ? &*rng : nullptr, a.tol);
    double p[2] = {0, 0};
    Json list = Json::array();
    for (const auto& b : branches) {
      p[b.logical] += b.probability;
      Json steps = Json::array();
      for (const auto& s : b.steps) {
        steps.push_back(Json{{"site", s.site}, {"basis", to_json(s.basis)}, {"outcome", s.outcome}, {"probability", s.probability}});
      }
      list.push_back(Json{{"logical", b.logical}, {"probability", b.probability}, {"steps", steps}});
    }
    // logical-level prediction from the unencoded cluster
    const PureState cluster(std::vector<int>(static_cast<std::size_t>(a.m), 2), logical_cluster(spec));
    const double e0 = project_out(cluster, a.block, psi).amps().squaredNorm();
    const double e1 = project_out(cluster, a.block, perp).amps().squaredNorm();
    j["block"] = a.block;
    j["psi"] = complex_array(psi);
    j["probabilities"] = Json::array({p[0], p[1]});
    j["logical_prediction"] = Json::array({e0, e1});
    j["branches"] = list;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown analysis '" + a.analysis + "'");
  }
  out.write(j);
}

// ---------------------------------------------------------------------------

void cmd_validate(const std::string& resource, double tol, const Output& out) {
  const ResourceSpec spec = parse_resource(resource);
  const auto rep = cross_validate(resource_chain(spec), nullptr, tol);
  out.write(Json{{"command", "validate"},
                 {"resource", to_json(spec)},
                 {"outcomes_checked", rep.outcomes_checked},
                 {"probes", rep.probes},
                 {"amplitude_deviation", rep.amplitude_deviation},
                 {"projected_deviation", rep.projected_deviation},
                 {"max_deviation", rep.max_deviation},
                 {"consistent", rep.consistent}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrspace: correlation-space simulations of measurement-based protocols"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write the report to this file instead of stdout");

  CorrelationsArgs corr;
  auto* c = app.add_subcommand("correlations", "connected two-point correlators along a chain");
  c->add_option("--resource", corr.resource, "chain resource, e.g. correlation:k=3,n=12");
  c->add_option("--observable", corr.observable, "X, Y or Z");
  c->add_option("--max-r", corr.max_r, "largest separation");
  c->add_option("--site", corr.site, "first site (default: centred)");
  c->add_option("--format", corr.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  c->add_option("--out", out_path, "output file");

  std::string generators = "H,Z";
  int max_order = kDefaultMaxOrder;
  auto* g = app.add_subcommand("group", "closure of named generators modulo phase");
  g->add_option("--generators", generators, "comma-separated gate names, e.g. G3,Z");
  g->add_option("--max-order", max_order, "closure size limit");
  g->add_option("--out", out_path, "output file");

  RunArgs run;
  auto* r = app.add_subcommand("run", "execute a measurement pattern or a built-in protocol");
  r->add_option("--resource", run.resource, "resource spec (compact or JSON)");
  r->add_option("--pattern", run.pattern, "pattern JSON file");
  r->add_option("--builtin", run.builtin, "single-qubit or logical-cz")->check(CLI::IsMember({"single-qubit", "logical-cz"}));
  r->add_option("--mode", run.mode, "sample, force or enumerate")->check(CLI::IsMember({"sample", "force", "enumerate"}));
  r->add_option("--seed", run.seed, "64-bit seed for sample mode");
  r->add_option("--force", run.force, "forced outcomes var=bit,...");
  r->add_option("--target", run.target, "single-qubit target: H, S(0.7), RX(0.3), G5, ...");
  r->add_option("--family", run.family, "aklt or correlation:k");
  r->add_option("--cols", run.cols, "lattice columns for logical-cz");
  r->add_option("--anchor", run.anchor, "first anchor column for logical-cz");
  r->add_flag("--states", run.states, "include post-measurement states");
  r->add_option("--out", out_path, "output file");

  EncodedArgs enc;
  auto* e = app.add_subcommand("encoded", "analyses of the translation-invariant encoded resource");
  e->add_option("--k", enc.k, "codeword length");
  e->add_option("--m", enc.m, "logical qubits");
  e->add_option("--analysis", enc.analysis, "entropy, decode or discriminate")
      ->check(CLI::IsMember({"entropy", "decode", "discriminate"}));
  e->add_option("--psi", enc.psi, "logical state: plus, minus, 0, 1 or theta,phi");
  e->add_option("--block", enc.block, "logical qubit to discriminate");
  e->add_option("--seed", enc.seed, "sample one branch instead of enumerating");
  e->add_option("--tol", enc.tol, "orthogonality tolerance");
  e->add_option("--out", out_path, "output file");

  std::string val_resource = "correlation:k=3,n=8";
  double val_tol = 1e-10;
  auto* v = app.add_subcommand("validate", "cross-check amplitude evaluations of a chain");
  v->add_option("--resource", val_resource, "chain resource");
  v->add_option("--tol", val_tol, "deviation tolerance");
  v->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  const Output out{out_path};
  try {
    if (c->parsed()) cmd_correlations(corr, out);
    if (g->parsed()) cmd_group(generators, max_order, out);
    if (r->parsed()) cmd_run(run, out);
    if (e->parsed()) cmd_encoded(enc, out);
    if (v->parsed()) cmd_validate(val_resource, val_tol, out);
  } catch (const Error& err) {
    const Json j{{"error", Json{{"code", error_code_name(err.code())}, {"message", err.what()}}}};
    std::cout << j.dump(2) << "\n";
    return 1;
  } catch (const std::exception& err) {
    const Json j{{"error", Json{{"code", "internal"}, {"message", err.what()}}}};
    std::cout << j.dump(2) << "\n";
    return 1;
  }
  return 0;
}
