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

// Gate protocols on one-dimensional resources and the line reduction of
// the weighted graph lattice.
//
// Frame bookkeeping for the single-qubit compiler: the correlation vector
// is always B V |in>, with B a by-product group element and V the logical
// operation done so far. A step that applies M with M ~ W S(alpha) (W in
// the group) realizes the logical rotation R = B^-1 S(alpha) B, so the new
// frame is M B R^-1. R is a rotation about B^-1 Z B, which is why a rotation
// about a given axis waits for a frame that maps Z onto that axis.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corrspace/basis.hpp"
#include "corrspace/group.hpp"
#include "corrspace/lattice.hpp"
#include "corrspace/mps.hpp"
#include "corrspace/pattern.hpp"
#include "corrspace/resources.hpp"
#include "corrspace/rng.hpp"

namespace corrspace {

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

enum class ChainFamily { kCorrelation, kAklt };

struct FamilySpec {
  ChainFamily family = ChainFamily::kCorrelation;
  int k = 3;

  static FamilySpec correlation(int k) {
    if (k <= 2) throw Error(ErrorCode::kInvalidArgument, "correlation chain needs k > 2");
    return {ChainFamily::kCorrelation, k};
  }
  static FamilySpec aklt() { return {ChainFamily::kAklt, 0}; }

  std::string name() const {
    return family == ChainFamily::kAklt ? "aklt" : "correlation:" + std::to_string(k);
  }
  bool operator==(const FamilySpec&) const = default;
};

inline FamilySpec family_from_name(const std::string& s) {
  if (s == "aklt") return FamilySpec::aklt();
  const std::string prefix = "correlation:";
  if (s.rfind(prefix, 0) == 0) {
    try {
      return FamilySpec::correlation(std::stoi(s.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::kParse, "unknown family '" + s + "' (expected aklt or correlation:<k>)");
}

inline MpsChain family_chain(const FamilySpec& f, int n) {
  return f.family == ChainFamily::kAklt ? aklt_type_chain(n) : correlation_chain(f.k, n);
}

/// By-product group: <G, Z> for the correlation chain, <H, Z> for AKLT.
inline ProjectiveGroup family_group(const FamilySpec& f) {
  return f.family == ChainFamily::kAklt ? closure({gates::h(), gates::z()})
                                        : closure({gates::g(f.k), gates::z()});
}

/// The two rotation axes the compiler uses: Z and G Z G^-1, or Z and X.
inline std::array<Matrix, 2> family_axes(const FamilySpec& f) {
  if (f.family == ChainFamily::kAklt) return {gates::z(), gates::x()};
  const Matrix g = gates::g(f.k);
  return {gates::z(), g * gates::z() * g.adjoint()};
}

/// Measurement basis whose rotating branches carry S(alpha).
inline BasisSpec rotation_basis(const FamilySpec& f, double alpha) {
  return f.family == ChainFamily::kAklt ? aklt_basis_inducing_sphi(alpha) : qubit_basis_inducing_sphi(alpha);
}

/// Whether an outcome of rotation_basis applies S(alpha).
inline bool outcome_rotates(const FamilySpec& f, int outcome) {
  return f.family == ChainFamily::kCorrelation || outcome != 0;
}

/// Exact branch operators of one bulk site measured in `basis`.
inline std::vector<Matrix> branch_operators(const FamilySpec& f, const BasisSpec& basis) {
  const MpsChain one = family_chain(f, 1);
  std::vector<Matrix> out;
  for (const Vector& ket : basis.kets()) out.push_back(project_local(one, 0, ket));
  return out;
}

// ---------------------------------------------------------------------------
// Elementary steps
// ---------------------------------------------------------------------------

/// ... G Z^{x_2} G Z^{x_1}
inline Matrix transport_op(int k, const std::vector<int>& xs) {
  const Matrix g = gates::g(k);
  Matrix b = identity(2);
  for (int x : xs) b = g * (x ? gates::z() : identity(2)) * b;
  return b;
}

/// sqrt2 A[ket] for the outcome of the basis that induces S(phi) on the
/// correlation chain: outcome 0 gives G S(phi), outcome 1 gives G Z S(phi).
inline Matrix phase_gate_step(int k, double phi, int outcome) {
  const BasisSpec b = qubit_basis_inducing_sphi(phi);
  if (outcome < 0 || outcome > 1) throw Error(ErrorCode::kInvalidArgument, "qubit outcome must be 0 or 1");
  return std::sqrt(2.0) * project_local(correlation_chain(k, 1), 0, b.kets()[static_cast<std::size_t>(outcome)]);
}

/// A[ket] on the AKLT chain for the basis inducing S(phi): outcome 0 gives H,
/// 1 gives X S(phi), 2 gives X Z S(phi).
inline Matrix aklt_phase_step(double phi, int outcome) {
  const BasisSpec b = aklt_basis_inducing_sphi(phi);
  if (outcome < 0 || outcome > 2) throw Error(ErrorCode::kInvalidArgument, "qutrit outcome must be 0, 1 or 2");
  return project_local(aklt_type_chain(1), 0, b.kets()[static_cast<std::size_t>(outcome)]);
}

// ---------------------------------------------------------------------------
// Line reduction on the weighted graph lattice
// ---------------------------------------------------------------------------

/// H S^{2x + z}, z the sum of the four diagonal Z outcomes.
inline Matrix reduce_line_formula(int x, const std::array<int, 4>& z) {
  const int power = 2 * x + z[0] + z[1] + z[2] + z[3];
  Matrix s = identity(2);
  for (int j = 0; j < power % 4; ++j) s = s * gates::s();
  return gates::h() * s;
}

/// Correlation-space operator of an X-measured site at the centre of a 3x3
/// patch whose diagonal neighbours are Z-measured with outcomes z = (upper
/// left, upper right, lower left, lower right).
inline Matrix reduce_line_contraction(int x, const std::array<int, 4>& z) {
  const std::map<SiteCoord, Vector> core = {{{1, 1}, BasisSpec::x().kets()[static_cast<std::size_t>(x)]}};
  const std::map<SiteCoord, int> halo = {{{0, 0}, z[0]}, {{0, 2}, z[1]}, {{2, 0}, z[2]}, {{2, 2}, z[3]}};
  return region_operator(3, 3, core, halo, {1});
}

struct LineReduction {
  Matrix formula;
  Matrix contraction;
  double distance = 0;
};

inline LineReduction reduce_line(int x, const std::array<int, 4>& z, double tol = 1e-10) {
  if (x < 0 || x > 1) throw Error(ErrorCode::kInvalidArgument, "outcome bits must be 0 or 1");
  for (int b : z) {
    if (b < 0 || b > 1) throw Error(ErrorCode::kInvalidArgument, "outcome bits must be 0 or 1");
  }
  LineReduction r{reduce_line_formula(x, z), reduce_line_contraction(x, z), 0};
  r.distance = phase_distance(r.contraction, r.formula);
  if (r.distance > tol) {
    throw Error(ErrorCode::kContractionMismatch, "patch contraction disagrees with H S^(2x+z)");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Readout
// ---------------------------------------------------------------------------

struct ReadoutResult {
  int outcome = 0;
  double probability = 0;
  CorrelationState state;
};

/// Z measurement of `site` while the correlation vector entering it is
/// st.vec; probabilities use the exact right environment of the chain.
inline ReadoutResult readout(const MpsChain& chain, int site, const CorrelationState& st, Rng* rng,
                             std::optional<int> force = std::nullopt) {
  if (site < 0 || site >= chain.size()) throw Error(ErrorCode::kInvalidArgument, "readout site out of range");
  const auto env = right_environments(chain);
  std::vector<double> w;
  double total = 0;
  for (const Matrix& a : chain.site(site)) {
    const Vector v = a * st.vec;
    w.push_back(std::max(0.0, v.dot(env[static_cast<std::size_t>(site + 1)] * v).real()));
    total += w.back();
  }
  if (!(total > 0)) throw Error(ErrorCode::kZeroProbability, "correlation state has zero weight");
  int o = 0;
  if (force) {
    o = *force;
    if (o < 0 || o >= static_cast<int>(w.size())) throw Error(ErrorCode::kInvalidArgument, "forced outcome out of range");
  } else {
    if (!rng) throw Error(ErrorCode::kInvalidArgument, "readout sampling needs an rng");
    double u = rng->uniform() * total;
    for (o = 0; o + 1 < static_cast<int>(w.size()) && u >= w[static_cast<std::size_t>(o)]; ++o) {
      u -= w[static_cast<std::size_t>(o)];
    }
  }
  if (w[static_cast<std::size_t>(o)] / total <= kZeroProbability) {
    throw Error(ErrorCode::kZeroProbability, "readout outcome has zero probability");
  }
  return {o, w[static_cast<std::size_t>(o)] / total, evolve(st, chain.site(site)[static_cast<std::size_t>(o)])};
}

/// Z measurement of one site of a dense simulation.
inline MeasurementResult readout(const PureState& state, int site, Rng* rng, std::optional<int> force = std::nullopt) {
  return measure_site(state.normalized(), site, BasisSpec::z(state.dims().at(static_cast<std::size_t>(site))), force,
                      rng);
}

// ---------------------------------------------------------------------------
// Single-qubit compilation
// ---------------------------------------------------------------------------

struct PlannedRotation {
  int axis = 0;  // index into family_axes
  double angle = 0;
};

struct SingleQubitPlan {
  FamilySpec family;
  Matrix target;
  std::vector<PlannedRotation> rotations;  // applied first to last
  int initial_frame = 0;                   // group index; nonzero for in-group targets
  double residual = 0;
  std::shared_ptr<const ProjectiveGroup> group;
};

inline Matrix plan_matrix(const SingleQubitPlan& plan) {
  const auto axes = family_axes(plan.family);
  Matrix v = plan.rotations.empty() ? Matrix(plan.group->element(plan.group->inverse(plan.initial_frame)).rep)
                                    : identity(2);
  for (const auto& r : plan.rotations) v = rotation(axes[static_cast<std::size_t>(r.axis)], r.angle) * v;
  return v;
}

namespace detail {

/// Pauli components of U^dagger P for U, P in SU(2); zero iff P = +-U.
inline Eigen::Vector3d su2_residual(const Matrix& u, const Matrix& p) {
  const Matrix w = u.adjoint() * p;
  const std::array<Matrix, 3> paulis = {gates::x(), gates::y(), gates::z()};
  Eigen::Vector3d r;
  for (int k = 0; k < 3; ++k) r(k) = (kI * (w * paulis[static_cast<std::size_t>(k)]).trace() / 2.0).real();
  return r;
}

/// Angles with rot(a_{m-1}, t_{m-1}) ... rot(a_0, t_0) ~ u for alternating
/// axes a_j = axes[j % 2]: Gauss-Newton with a finite-difference Jacobian
/// and minimum-norm steps, restarted from seeded random points.
inline std::optional<std::vector<double>> solve_alternating(const Matrix& u, const std::array<Matrix, 2>& axes, int m,
                                                            std::uint64_t seed, double& residual) {
  auto product = [&](const Eigen::VectorXd& t) {
    Matrix p = identity(2);
    for (int j = 0; j < m; ++j) p = rotation(axes[static_cast<std::size_t>(j % 2)], t(j)) * p;
    return p;
  };
  // Scale into SU(2) once: a per-call square root of det(U^dagger P) would
  // jump sign across its branch cut and stall the iteration.
  const Matrix su = u / std::sqrt(u.determinant());
  Rng rng(seed);
  residual = 1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::VectorXd t(m);
    for (int j = 0; j < m; ++j) t(j) = (2 * rng.uniform() - 1) * kPi;
    Eigen::Vector3d r = su2_residual(su, product(t));
    for (int it = 0; it < 200 && r.norm() > 1e-15; ++it) {
      Eigen::MatrixXd jac(3, m);
      const double h = 1e-7;
      for (int j = 0; j < m; ++j) {
        Eigen::VectorXd tp = t, tm = t;
        tp(j) += h;
        tm(j) -= h;
        jac.col(j) = (su2_residual(su, product(tp)) - su2_residual(su, product(tm))) / (2 * h);
      }
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
      double lambda = 1;
      bool improved = false;
      for (int ls = 0; ls < 40; ++ls, lambda /= 2) {
        const Eigen::VectorXd cand = t + lambda * step;
        const Eigen::Vector3d rc = su2_residual(su, product(cand));
        if (rc.norm() < r.norm()) {
          t = cand;
          r = rc;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    const double d = phase_distance(product(t), u);
    residual = std::min(residual, d);
    if (d < 1e-12) {
      std::vector<double> out(t.data(), t.data() + m);
      residual = d;
      return out;
    }
  }
  return std::nullopt;
}

inline double wrap_angle(double a) {
  a = std::remainder(a, 4 * kPi);
  return a;
}

}  // namespace detail

/// Euler-type decomposition of a unitary into rotations the family can
/// perform. In-group targets need no rotations at all: they are produced by
/// starting from the inverse frame and compensating.
inline SingleQubitPlan plan_single_qubit(const Matrix& target, const FamilySpec& family) {
  if (target.rows() != 2 || target.cols() != 2 || !is_unitary(target, 1e-9)) {
    throw Error(ErrorCode::kInvalidArgument, "target must be a 2x2 unitary");
  }
  SingleQubitPlan plan;
  plan.family = family;
  plan.target = target;
  plan.group = std::make_shared<const ProjectiveGroup>(family_group(family));
  if (auto idx = plan.group->find(target)) {
    plan.initial_frame = plan.group->inverse(*idx);
    return plan;
  }
  const Matrix u = unit_scale(target);
  if (std::abs(u(0, 1)) < 1e-14 && std::abs(u(1, 0)) < 1e-14) {
    plan.rotations.push_back({0, std::arg(u(1, 1) / u(0, 0))});
  } else if (family.family == ChainFamily::kAklt) {
    // ZYZ angles of the SU(2) representative, then Ry(b) = Rz(pi/2) Rx(b) Rz(-pi/2).
    const Matrix v = u / std::sqrt(u.determinant());
    const double b = 2 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
    const double sum = std::abs(v(1, 1)) > 1e-14 ? 2 * std::arg(v(1, 1)) : 0.0;
    const double diff = std::abs(v(1, 0)) > 1e-14 ? 2 * std::arg(v(1, 0)) : 0.0;
    const double a = (sum + diff) / 2, c = (sum - diff) / 2;
    plan.rotations = {{0, detail::wrap_angle(c - kPi / 2)}, {1, b}, {0, detail::wrap_angle(a + kPi / 2)}};
  } else {
    const auto axes = family_axes(family);
    const double between = std::acos(std::clamp(std::abs((axes[0] * axes[1]).trace().real()) / 2, 0.0, 1.0));
    const int m0 = 2 * static_cast<int>(std::ceil(kPi / (2 * between) - 1e-12)) + 1;
    double residual = 1;
    std::optional<std::vector<double>> angles;
    for (int m = m0; m <= m0 + 6 && !angles; m += 2) {
      angles = detail::solve_alternating(u, axes, m, 0x5eedULL + static_cast<std::uint64_t>(m), residual);
    }
    if (!angles) {
      throw Error(ErrorCode::kNonConvergence,
                  "rotation sequence solver did not converge (residual " + std::to_string(residual) + ")");
    }
    for (std::size_t j = 0; j < angles->size(); ++j) plan.rotations.push_back({static_cast<int>(j % 2), (*angles)[j]});
  }
  plan.residual = phase_distance(plan_matrix(plan), u);
  if (plan.residual > 1e-10) {
    throw Error(ErrorCode::kNonConvergence,
                "decomposition check failed (residual " + std::to_string(plan.residual) + ")");
  }
  return plan;
}

enum class StepKind { kRotation, kWait, kCompensation };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::kRotation: return "rotation";
    case StepKind::kWait: return "wait";
    case StepKind::kCompensation: return "compensation";
  }
  return "?";
}

struct ExecutedStep {
  StepKind kind = StepKind::kWait;
  BasisSpec basis;
  int outcome = 0;
  double probability = 1;
  Matrix op;       // exact A[ket]
  int frame = 0;   // frame after the step
};

struct SingleQubitRun {
  std::vector<ExecutedStep> steps;
  Matrix realized;  // product of all applied A[ket]
  int frame = 0;    // final by-product (group index)
  double probability = 1;
  double residual = 0;  // distance of realized from frame * target, up to phase and scale
  long wait_steps = 0;
  long compensation_steps = 0;
};

/// Picks an outcome given the Born probabilities and the step being taken.
using OutcomeChooser = std::function<int(const std::vector<double>&, StepKind)>;

inline OutcomeChooser sampling_chooser(Rng& rng) {
  return [&rng](const std::vector<double>& p, StepKind) {
    double u = rng.uniform();
    for (int o = 0; o + 1 < static_cast<int>(p.size()); ++o) {
      if (u < p[static_cast<std::size_t>(o)]) return o;
      u -= p[static_cast<std::size_t>(o)];
    }
    return static_cast<int>(p.size()) - 1;
  };
}

/// Reference branch: outcome 0 on the correlation chain; on AKLT the first
/// rotating outcome for rotations and the H outcome for transport.
inline OutcomeChooser reference_chooser(const FamilySpec& f) {
  return [f](const std::vector<double>&, StepKind kind) {
    return f.family == ChainFamily::kAklt && kind == StepKind::kRotation ? 1 : 0;
  };
}

/// Runs the adaptive protocol for a plan. Branch probabilities use the bulk
/// environment, which is proportional to the identity for both families
/// (sum_s A[s]^dagger A[s] ~ 1), so p(o) = |A_o v|^2 / sum_o' |A_o' v|^2.
inline SingleQubitRun execute_single_qubit(const SingleQubitPlan& plan, const OutcomeChooser& choose,
                                           bool compensate = true, const Vector& input = ket_plus()) {
  const ProjectiveGroup& grp = *plan.group;
  const auto axes = family_axes(plan.family);
  const long cap = 64L * grp.order();
  SingleQubitRun run;
  run.realized = identity(2);
  run.frame = plan.initial_frame;
  auto measure = [&](const BasisSpec& basis, StepKind kind) {
    const auto ops = branch_operators(plan.family, basis);
    const Vector v = run.realized * input;
    std::vector<double> p;
    double total = 0;
    for (const Matrix& a : ops) {
      p.push_back((a * v).squaredNorm());
      total += p.back();
    }
    for (double& x : p) x /= total;
    const int o = choose(p, kind);
    if (o < 0 || o >= static_cast<int>(p.size()) || p[static_cast<std::size_t>(o)] <= kZeroProbability) {
      throw Error(ErrorCode::kZeroProbability, "chosen outcome has zero probability");
    }
    run.realized = ops[static_cast<std::size_t>(o)] * run.realized;
    run.probability *= p[static_cast<std::size_t>(o)];
    ExecutedStep st{kind, basis, o, p[static_cast<std::size_t>(o)], ops[static_cast<std::size_t>(o)], 0};
    return st;
  };
  auto transport = [&](StepKind kind) {
    ExecutedStep st = measure(rotation_basis(plan.family, 0.0), kind);
    run.frame = grp.require(st.op * grp.element(run.frame).rep);
    st.frame = run.frame;
    run.steps.push_back(st);
  };
  for (const auto& rot : plan.rotations) {
    const Matrix& axis = axes[static_cast<std::size_t>(rot.axis)];
    const Matrix r = rotation(axis, rot.angle);
    for (long n = 0;; ++n) {
      if (n >= cap) throw Error(ErrorCode::kStepCapExceeded, "rotation waited longer than the per-gate step cap");
      const Matrix& b = grp.element(run.frame).rep;
      const Matrix seen = b.adjoint() * gates::z() * b / (b.adjoint() * b).trace() * 2.0;
      int sign = 0;
      if ((seen - axis).cwiseAbs().maxCoeff() < 1e-9) sign = 1;
      if ((seen + axis).cwiseAbs().maxCoeff() < 1e-9) sign = -1;
      if (sign == 0) {
        transport(StepKind::kWait);
        ++run.wait_steps;
        continue;
      }
      ExecutedStep st = measure(rotation_basis(plan.family, sign * rot.angle), StepKind::kRotation);
      if (outcome_rotates(plan.family, st.outcome)) {
        run.frame = grp.require(st.op * b * r.adjoint());
        st.frame = run.frame;
        run.steps.push_back(st);
        break;
      }
      run.frame = grp.require(st.op * b);
      st.frame = run.frame;
      st.kind = StepKind::kWait;
      run.steps.push_back(st);
      ++run.wait_steps;
    }
  }
  if (compensate) {
    for (long n = 0; run.frame != grp.identity_index(); ++n) {
      if (n >= cap) throw Error(ErrorCode::kStepCapExceeded, "compensation exceeded the per-gate step cap");
      transport(StepKind::kCompensation);
      ++run.compensation_steps;
    }
  }
  run.residual = phase_distance(run.realized, grp.element(run.frame).rep * plan.target);
  return run;
}

inline SingleQubitRun execute_single_qubit(const SingleQubitPlan& plan, Rng& rng, bool compensate = true) {
  return execute_single_qubit(plan, sampling_chooser(rng), compensate);
}

struct CompiledGate {
  SingleQubitPlan plan;
  MeasurementPattern pattern;               // sites (0, 0), (0, 1), ...
  std::map<std::string, int> reference;     // outcomes of the reference branch
  Matrix reference_op;                      // A[ket] product on that branch
  Matrix byproduct;                         // group element left on that branch
};

/// Static pattern of the reference branch. Rotations only, unless the
/// target lies in the by-product group, in which case the pattern is the
/// compensation that produces it.
inline CompiledGate compile_single_qubit(const Matrix& target, const FamilySpec& family) {
  CompiledGate out;
  out.plan = plan_single_qubit(target, family);
  const bool in_group = out.plan.rotations.empty();
  const SingleQubitRun run = execute_single_qubit(out.plan, reference_chooser(family), in_group);
  for (std::size_t j = 0; j < run.steps.size(); ++j) {
    const std::string var = "m" + std::to_string(j);
    out.pattern.outcome_vars.push_back(var);
    out.pattern.steps.push_back({{0, static_cast<int>(j)}, run.steps[j].basis, var, {}});
    out.reference[var] = run.steps[j].outcome;
  }
  out.reference_op = run.realized;
  out.byproduct = out.plan.group->element(run.frame).rep;
  return out;
}

}  // namespace corrspace
