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

#include <algorithm>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "corrspace/lattice.hpp"
#include "corrspace/pattern.hpp"
#include "corrspace/resources.hpp"

using namespace corrspace;

namespace {

MeasurementPattern chain_pattern(const std::vector<BasisSpec>& bases, int stride = 1) {
  MeasurementPattern p;
  for (std::size_t j = 0; j < bases.size(); ++j) {
    const std::string var = "m" + std::to_string(j);
    p.steps.push_back({{0, static_cast<int>(j) * stride}, bases[j], var, {}});
    p.outcome_vars.push_back(var);
  }
  return p;
}

std::string key(const ProtocolRecord& r) {
  std::string s;
  for (const auto& [v, o] : r.outcomes) s += std::to_string(o);
  return s;
}

double total_probability(const std::vector<ProtocolRecord>& recs) {
  double t = 0;
  for (const auto& r : recs) t += r.probability;
  return t;
}

}  // namespace

TEST(Pattern, ForcedTransportIsPowerOfG) {
  for (int k : {3, 4, 7}) {
    const int m = 5;
    const auto recs = run_pattern(correlation_chain(k, m + 1), chain_pattern(std::vector<BasisSpec>(m, BasisSpec::x())),
                                  RunMode::force({{"m0", 0}, {"m1", 0}, {"m2", 0}, {"m3", 0}, {"m4", 0}}));
    ASSERT_EQ(recs.size(), 1u);
    Matrix gm = identity(2);
    for (int j = 0; j < m; ++j) gm = gates::g(k) * gm;
    EXPECT_TRUE(equal_up_to_scale(recs[0].realized_op, gm, 1e-12)) << "k=" << k;
  }
}

TEST(Pattern, EnumerationIsComplete) {
  const auto p = chain_pattern({BasisSpec::x(), BasisSpec::phase(0.3), BasisSpec::y(), BasisSpec::z()});
  EXPECT_NEAR(total_probability(run_pattern(correlation_chain(5, 6), p, RunMode::enumerate())), 1.0, 1e-10);

  const auto q = chain_pattern({BasisSpec::aklt_phase(0.7), BasisSpec::z(3), BasisSpec::aklt_phase(-1.1)});
  const auto recs = run_pattern(aklt_type_chain(5), q, RunMode::enumerate());
  EXPECT_NEAR(total_probability(recs), 1.0, 1e-10);
  for (const auto& r : recs) {
    EXPECT_GT(r.probability, 0.0);
    EXPECT_GT(r.realized_op.cwiseAbs().maxCoeff(), 0.0);
  }
}

// Chain marginals with unmeasured sites traced out, against the dense state.
TEST(Pattern, ChainProbabilitiesMatchStateVector) {
  struct Case {
    MpsChain chain;
    MeasurementPattern p;
  };
  std::vector<Case> cases = {
      {correlation_chain(3, 6), chain_pattern({BasisSpec::x(), BasisSpec::phase(1.2), BasisSpec::y()}, 2)},
      {aklt_type_chain(5), chain_pattern({BasisSpec::aklt_phase(0.4), BasisSpec::z(3)}, 2)},
      {cluster_chain(5), chain_pattern({BasisSpec::x(), BasisSpec::y(), BasisSpec::x()}, 2)},
  };
  for (const auto& c : cases) {
    const auto dense = to_statevector(c.chain, true).state;
    const auto a = run_pattern(c.chain, c.p, RunMode::enumerate());
    const auto b = run_pattern(dense, c.chain.size(), c.p, RunMode::enumerate());
    std::map<std::string, double> pb;
    for (const auto& r : b) pb[key(r)] = r.probability;
    double covered = 0;
    for (const auto& r : a) {
      EXPECT_NEAR(r.probability, pb[key(r)], 1e-10) << key(r);
      covered += pb[key(r)];
    }
    EXPECT_NEAR(covered, 1.0, 1e-10);
  }
}

TEST(Pattern, SamplingMatchesEnumeration) {
  const auto p = chain_pattern({BasisSpec::phase(0.9), BasisSpec::x(), BasisSpec::phase(-0.4)});
  const MpsChain chain = correlation_chain(5, 4);
  std::map<std::string, double> expected;
  for (const auto& r : run_pattern(chain, p, RunMode::enumerate())) expected[key(r)] = r.probability;
  ASSERT_EQ(expected.size(), 8u);
  const int runs = 10000;
  std::map<std::string, int> counts;
  for (int s = 1; s <= runs; ++s) ++counts[key(run_pattern(chain, p, RunMode::sample(s)).at(0))];
  double chi2 = 0;
  for (const auto& [k, prob] : expected) {
    const double e = prob * runs;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // 0.99 quantile of chi-square with 7 degrees of freedom.
  EXPECT_LT(chi2, 18.475);
}

TEST(Pattern, SampleIsDeterministicPerSeed) {
  const auto p = chain_pattern({BasisSpec::x(), BasisSpec::x(), BasisSpec::x(), BasisSpec::x()});
  const MpsChain chain = correlation_chain(3, 5);
  for (std::uint64_t s : {1u, 2u, 99u}) {
    EXPECT_EQ(key(run_pattern(chain, p, RunMode::sample(s))[0]), key(run_pattern(chain, p, RunMode::sample(s))[0]));
  }
}

TEST(Pattern, ForcedZeroProbabilityIsRejected) {
  const PureState zero = PureState::product({basis_ket(2, 0), basis_ket(2, 0)});
  const auto p = chain_pattern({BasisSpec::z()});
  EXPECT_NO_THROW(run_pattern(zero, 2, p, RunMode::force({{"m0", 0}})));
  try {
    run_pattern(zero, 2, p, RunMode::force({{"m0", 1}}));
    FAIL() << "expected zero-probability error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroProbability);
  }
  EXPECT_THROW(run_pattern(zero, 2, p, RunMode::force({})), Error);
  EXPECT_THROW(run_pattern(zero, 2, p, RunMode::force({{"m0", 2}})), Error);
}

TEST(Pattern, ValidationRejectsMalformedPatterns) {
  auto p = chain_pattern({BasisSpec::x(), BasisSpec::x()});
  auto dup_site = p;
  dup_site.steps[1].site = dup_site.steps[0].site;
  EXPECT_THROW(validate(dup_site), Error);

  auto forward = p;
  forward.steps[0].adapt.push_back({"m1", 1, AdaptAction::kRestart, std::nullopt});
  EXPECT_THROW(validate(forward), Error);

  auto undeclared = p;
  undeclared.outcome_vars.pop_back();
  EXPECT_THROW(validate(undeclared), Error);

  auto bad_word = p;
  bad_word.byproduct_rules.push_back({"m0", 1, {"Q"}});
  EXPECT_THROW(validate(bad_word), Error);

  auto backwards = p;
  backwards.steps[0].site = {0, 3};
  EXPECT_THROW(run_pattern(correlation_chain(3, 4), backwards, RunMode::enumerate()), Error);
}

TEST(Pattern, AdaptOverrideChangesTheBasis) {
  // m1 is measured in Z unless m0 = 1, in which case it is measured in X.
  auto p = chain_pattern({BasisSpec::x(), BasisSpec::z()});
  p.steps[1].adapt.push_back({"m0", 1, AdaptAction::kOverride, BasisSpec::x()});
  const MpsChain chain = correlation_chain(4, 3);
  for (const auto& r : run_pattern(chain, p, RunMode::enumerate())) {
    const auto ref = run_pattern(chain, chain_pattern({BasisSpec::x(), *r.value("m0") ? BasisSpec::x() : BasisSpec::z()}),
                                 RunMode::force({{"m0", *r.value("m0")}, {"m1", *r.value("m1")}}));
    EXPECT_TRUE(equal_up_to_scale(r.realized_op, ref[0].realized_op, 1e-12));
  }
}

TEST(Pattern, AdaptRestartAborts) {
  auto p = chain_pattern({BasisSpec::x(), BasisSpec::x(), BasisSpec::x()});
  p.steps[1].adapt.push_back({"m0", 1, AdaptAction::kRestart, std::nullopt});
  const auto recs = run_pattern(correlation_chain(3, 4), p, RunMode::enumerate());
  EXPECT_NEAR(total_probability(recs), 1.0, 1e-10);
  int aborted = 0;
  for (const auto& r : recs) {
    if (r.aborted) {
      ++aborted;
      EXPECT_EQ(r.outcomes.size(), 1u);
      EXPECT_EQ(*r.value("m0"), 1);
    } else {
      EXPECT_EQ(r.outcomes.size(), 3u);
    }
  }
  EXPECT_EQ(aborted, 1);
}

TEST(Pattern, ByproductRulesComposeWords) {
  auto p = chain_pattern({BasisSpec::x(), BasisSpec::x()});
  p.byproduct_rules.push_back({"m0", 1, {"Z"}});
  p.byproduct_rules.push_back({"m1", 1, {"H", "S"}});
  for (const auto& r : run_pattern(correlation_chain(3, 3), p, RunMode::enumerate())) {
    Matrix expect = identity(2);
    if (*r.value("m0")) expect = gates::z() * expect;
    if (*r.value("m1")) expect = gates::h() * gates::s() * expect;
    EXPECT_TRUE((r.byproduct - expect).norm() < 1e-14) << key(r);
  }
}

// Each branch of a dense run agrees with the network contracted against the
// same projectors.
TEST(Pattern, StateVectorBranchesMatchNetworkProjection) {
  const int rows = 2, cols = 3;
  const PureState psi = weighted_graph_state(weighted_graph(rows, cols));
  MeasurementPattern p;
  p.steps = {{{0, 0}, BasisSpec::x(), "a", {}}, {{1, 1}, BasisSpec::y(), "b", {}}, {{0, 2}, BasisSpec::phase(0.6), "c", {}}};
  p.outcome_vars = {"a", "b", "c"};
  const auto recs = run_pattern(psi, cols, p, RunMode::enumerate());
  EXPECT_NEAR(total_probability(recs), 1.0, 1e-10);
  for (const auto& r : recs) {
    std::map<int, Vector> proj;
    PureState reduced = *r.post_state;
    std::vector<int> sites;
    for (std::size_t j = 0; j < p.steps.size(); ++j) {
      const int v = p.steps[j].site.row * cols + p.steps[j].site.col;
      proj[v] = p.steps[j].basis.kets()[static_cast<std::size_t>(*r.value(p.steps[j].var))];
      sites.push_back(v);
    }
    std::sort(sites.rbegin(), sites.rend());
    for (int v : sites) reduced = project_out(reduced, v, proj[v]);
    const LabeledTensor t = contract_wgs_network(rows, cols, proj);
    std::vector<std::string> order;
    std::vector<int> dims;
    for (int v = 0; v < rows * cols; ++v) {
      if (!proj.count(v)) {
        order.push_back(wgs_phys_label(v));
        dims.push_back(2);
      }
    }
    const PureState predicted(dims, t.to_vector(order));
    EXPECT_NEAR(fidelity(reduced, predicted), 1.0, 1e-10) << key(r);
  }
}
