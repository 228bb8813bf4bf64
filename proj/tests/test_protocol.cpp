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

#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "corrspace/protocol.hpp"

using namespace corrspace;

namespace {

Matrix power(const Matrix& m, int n) {
  Matrix out = identity(static_cast<int>(m.rows()));
  for (int j = 0; j < n; ++j) out = m * out;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Elementary steps
// ---------------------------------------------------------------------------

TEST(Transport, ClosedForms) {
  for (int k : {3, 4, 6}) {
    const Matrix g = gates::g(k);
    EXPECT_TRUE((transport_op(k, {0}) - g).norm() < 1e-15);
    EXPECT_TRUE((transport_op(k, {1}) - g * gates::z()).norm() < 1e-15);
    EXPECT_TRUE((transport_op(k, {1, 1}) - g * gates::z() * g * gates::z()).norm() < 1e-15);
    EXPECT_TRUE((transport_op(k, {0, 1, 1}) - transport_op(k, {1, 1}) * transport_op(k, {0})).norm() < 1e-15);
    EXPECT_TRUE((transport_op(k, {}) - identity(2)).norm() < 1e-15);
  }
}

TEST(PhaseGateStep, BranchOperators) {
  for (int k : {3, 5}) {
    for (double phi : {0.0, 0.37, -1.9, kPi / 2}) {
      EXPECT_TRUE((phase_gate_step(k, phi, 0) - gates::g(k) * gates::sphi(phi)).norm() < 1e-14);
      EXPECT_TRUE((phase_gate_step(k, phi, 1) - gates::g(k) * gates::z() * gates::sphi(phi)).norm() < 1e-14);
    }
    // phi = 0 is plain X-basis transport
    EXPECT_TRUE(equal_up_to_scale(phase_gate_step(k, 0, 0), transport_op(k, {0}), 1e-14));
    EXPECT_TRUE(equal_up_to_scale(phase_gate_step(k, 0, 1), transport_op(k, {1}), 1e-14));
  }
  EXPECT_THROW(phase_gate_step(3, 0.1, 2), Error);
}

TEST(PhaseGateStep, AgreesWithPatternEnumeration) {
  const int k = 4;
  const double phi = 0.81;
  MeasurementPattern p;
  p.steps = {{{0, 1}, qubit_basis_inducing_sphi(phi), "a", {}}};
  p.outcome_vars = {"a"};
  const auto recs = run_pattern(correlation_chain(k, 3), p, RunMode::enumerate());
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) {
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
    EXPECT_TRUE(equal_up_to_scale(r.realized_op, phase_gate_step(k, phi, *r.value("a")), 1e-12));
  }
}

TEST(AkltPhaseStep, BranchOperators) {
  for (double phi : {0.0, 0.6, -2.2}) {
    EXPECT_TRUE((aklt_phase_step(phi, 0) - gates::h()).norm() < 1e-14);
    EXPECT_TRUE((aklt_phase_step(phi, 1) - gates::x() * gates::sphi(phi)).norm() < 1e-14);
    EXPECT_TRUE((aklt_phase_step(phi, 2) - gates::x() * gates::z() * gates::sphi(phi)).norm() < 1e-14);
  }
}

// ---------------------------------------------------------------------------
// Line reduction
// ---------------------------------------------------------------------------

TEST(ReduceLine, ZeroOutcomesGiveHadamard) {
  const auto r = reduce_line(0, {0, 0, 0, 0});
  EXPECT_TRUE(equal_up_to_scale(r.contraction, gates::h(), 1e-12));
}

TEST(ReduceLine, TwoZOnesGiveHZ) {
  EXPECT_TRUE(equal_up_to_scale(reduce_line(0, {1, 0, 0, 1}).contraction, gates::h() * gates::z(), 1e-12));
  EXPECT_TRUE(equal_up_to_scale(reduce_line(0, {0, 1, 1, 0}).formula, gates::h() * gates::z(), 1e-14));
}

TEST(ReduceLine, AllOutcomeCombinations) {
  for (int bits = 0; bits < 32; ++bits) {
    const int x = bits >> 4;
    const std::array<int, 4> z = {(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
    const auto r = reduce_line(x, z);
    EXPECT_LT(r.distance, 1e-10) << "bits=" << bits;
    EXPECT_TRUE(is_scaled_unitary(r.contraction, 1e-10));
  }
  EXPECT_THROW(reduce_line(2, {0, 0, 0, 0}), Error);
}

// ---------------------------------------------------------------------------
// Readout
// ---------------------------------------------------------------------------

TEST(Readout, BasisStateIsCertain) {
  const MpsChain chain = correlation_chain(3, 3);
  const auto r = readout(chain, 1, make_correlation_state(basis_ket(2, 0)), nullptr, 0);
  EXPECT_NEAR(r.probability, 1.0, 1e-14);
  EXPECT_THROW(readout(chain, 1, make_correlation_state(basis_ket(2, 0)), nullptr, 1), Error);
}

TEST(Readout, StatisticsFollowAmplitudes) {
  const MpsChain chain = correlation_chain(5, 4);
  Vector v(2);
  v << Complex(0.6, 0), Complex(0, 0.8);
  const auto st = make_correlation_state(v);
  Rng rng(7);
  const int runs = 20000;
  int ones = 0;
  for (int j = 0; j < runs; ++j) ones += readout(chain, 1, st, &rng).outcome;
  const double p1 = 0.64;
  EXPECT_NEAR(readout(chain, 1, st, nullptr, 1).probability, p1, 1e-12);
  EXPECT_LT(std::abs(ones / double(runs) - p1), 4 * std::sqrt(p1 * (1 - p1) / runs));
}

TEST(Readout, PostStateMatchesConditionalState) {
  const MpsChain chain = correlation_chain(3, 5);
  const Vector ket0 = BasisSpec::phase(0.5).kets()[1];
  const auto before = evolve(make_correlation_state(chain.left()), project_local(chain, 0, ket0));
  for (int s = 0; s < 2; ++s) {
    const auto r = readout(chain, 1, before, nullptr, s);
    const PureState predicted = to_statevector(chain.suffix(2, r.state.vec)).state;
    const PureState oracle = conditional_state(chain, {{0, ket0}, {1, basis_ket(2, s)}});
    EXPECT_GT(fidelity(predicted, oracle), 1 - 1e-10);
  }
}

TEST(Readout, DenseSimulation) {
  const PureState psi = PureState::product({basis_ket(2, 1), ket_plus()});
  const auto r = readout(psi, 0, nullptr, 1);
  EXPECT_NEAR(r.probability, 1.0, 1e-14);
}

// ---------------------------------------------------------------------------
// Single-qubit compilation
// ---------------------------------------------------------------------------

TEST(Families, AxesAreNonParallel) {
  for (int k = 3; k <= 12; ++k) {
    const auto axes = family_axes(FamilySpec::correlation(k));
    EXPECT_LT(std::abs((axes[0] * axes[1]).trace().real()) / 2, 1 - 1e-6) << k;
  }
  EXPECT_THROW(FamilySpec::correlation(2), Error);
  EXPECT_EQ(family_from_name("correlation:5"), FamilySpec::correlation(5));
  EXPECT_EQ(family_from_name("aklt"), FamilySpec::aklt());
  EXPECT_THROW(family_from_name("cluster"), Error);
}

TEST(Compile, PhaseTargetIsOneStep) {
  for (const FamilySpec& f : {FamilySpec::correlation(3), FamilySpec::correlation(4), FamilySpec::aklt()}) {
    const double phi = 0.73;
    const auto c = compile_single_qubit(gates::sphi(phi), f);
    ASSERT_EQ(c.pattern.steps.size(), 1u) << f.name();
    EXPECT_EQ(c.pattern.steps[0].basis, rotation_basis(f, phi));
    EXPECT_TRUE(equal_up_to_scale(c.reference_op, c.byproduct * gates::sphi(phi), 1e-12));
  }
}

TEST(Compile, AkltHadamardIsTheZeroBranch) {
  const auto c = compile_single_qubit(gates::h(), FamilySpec::aklt());
  ASSERT_EQ(c.pattern.steps.size(), 1u);
  EXPECT_EQ(c.reference.at("m0"), 0);
  EXPECT_TRUE(equal_up_to_scale(c.reference_op, gates::h(), 1e-14));
  EXPECT_TRUE((c.byproduct - identity(2)).norm() < 1e-14);
}

TEST(Compile, RejectsNonUnitary) {
  EXPECT_THROW(compile_single_qubit(2.0 * gates::h(), FamilySpec::aklt()), Error);
  EXPECT_THROW(plan_single_qubit(identity(3), FamilySpec::correlation(3)), Error);
}

// The reference branch of the compiled pattern, replayed on a finite chain.
TEST(Compile, PatternReplaysOnTheChain) {
  Rng rng(11);
  for (const FamilySpec& f : {FamilySpec::correlation(3), FamilySpec::correlation(5), FamilySpec::aklt()}) {
    for (int t = 0; t < 5; ++t) {
      const Matrix u = rng.haar_unitary(2);
      const auto c = compile_single_qubit(u, f);
      const int n = static_cast<int>(c.pattern.steps.size()) + 1;
      const auto recs = run_pattern(family_chain(f, n), c.pattern, RunMode::force(c.reference));
      ASSERT_EQ(recs.size(), 1u);
      EXPECT_TRUE(equal_up_to_scale(recs[0].realized_op, c.byproduct * u, 1e-8)) << f.name();
    }
  }
}

TEST(Compile, HaarTargetsAreDeterministicAfterCompensation) {
  Rng targets(2024);
  for (const FamilySpec& f : {FamilySpec::correlation(3), FamilySpec::correlation(4), FamilySpec::aklt()}) {
    for (int t = 0; t < 100; ++t) {
      const Matrix u = targets.haar_unitary(2);
      const auto plan = plan_single_qubit(u, f);
      EXPECT_LT(plan.residual, 1e-10);
      Rng rng(1000 + static_cast<std::uint64_t>(t));
      const auto run = execute_single_qubit(plan, rng);
      EXPECT_EQ(run.frame, plan.group->identity_index());
      EXPECT_LT(run.residual, 1e-8) << f.name() << " target " << t;
      EXPECT_LT(phase_distance(run.realized, u), 1e-8);
    }
  }
}

TEST(Compile, InGroupTargetsNeedNoRotation) {
  Rng rng(5);
  const FamilySpec f = FamilySpec::correlation(3);
  const Matrix target = gates::g(3) * gates::z() * gates::g(3);
  const auto plan = plan_single_qubit(target, f);
  EXPECT_TRUE(plan.rotations.empty());
  const auto run = execute_single_qubit(plan, rng);
  EXPECT_LT(phase_distance(run.realized, target), 1e-10);
  EXPECT_EQ(run.wait_steps, 0);
}

TEST(Compile, IdentityIsEmpty) {
  const auto c = compile_single_qubit(identity(2), FamilySpec::correlation(3));
  EXPECT_TRUE(c.pattern.steps.empty());
}

TEST(Compile, EveryBranchOfShortProgramIsCorrect) {
  // First six outcomes enumerated, the rest sampled. A constant tail would
  // never leave the coset of the frame and compensation could not finish.
  const FamilySpec f = FamilySpec::correlation(3);
  const Matrix target = gates::h();
  const auto plan = plan_single_qubit(target, f);
  for (int code = 0; code < 64; ++code) {
    int step = 0;
    Rng tail(static_cast<std::uint64_t>(code) + 1);
    OutcomeChooser pick = [&](const std::vector<double>& p, StepKind) {
      const int o = step < 6 ? (code >> step) & 1 : tail.bit();
      ++step;
      return p[static_cast<std::size_t>(o)] > 0 ? o : 1 - o;
    };
    const auto run = execute_single_qubit(plan, pick);
    EXPECT_LT(run.residual, 1e-8) << code;
    EXPECT_LT(phase_distance(run.realized, target), 1e-8) << code;
  }
}

TEST(Compile, PowersOfGAreTransport) {
  for (int n = 1; n < 6; ++n) {
    const auto plan = plan_single_qubit(power(gates::g(3), n), FamilySpec::correlation(3));
    EXPECT_TRUE(plan.rotations.empty());
  }
}
