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

#include <cstring>
#include <limits>

#include <gtest/gtest.h>

#include "corrspace/json_io.hpp"

using namespace corrspace;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

MeasurementPattern awkward_pattern() {
  MeasurementPattern p;
  const double phis[] = {0.1, 1.0 / 3.0, kPi, -0.0, std::numeric_limits<double>::denorm_min(), -2.718281828459045e-300};
  for (int j = 0; j < 6; ++j) {
    const std::string var = "m" + std::to_string(j);
    p.steps.push_back({{j % 2, j}, j % 2 ? BasisSpec::aklt_phase(phis[j]) : BasisSpec::phase(phis[j]), var, {}});
    p.outcome_vars.push_back(var);
  }
  p.steps[2].adapt.push_back({"m0", 1, AdaptAction::kOverride, BasisSpec::phase(0.7000000000000001)});
  p.steps[3].adapt.push_back({"m1", 2, AdaptAction::kRestart, std::nullopt});
  p.steps[4].basis = BasisSpec::z(3);
  p.byproduct_rules.push_back({"m0", 1, {"Z", "G5"}});
  return p;
}

}  // namespace

TEST(JsonPattern, RoundTripIsBitExact) {
  const MeasurementPattern p = awkward_pattern();
  const std::string text = to_json(p).dump();
  const MeasurementPattern q = pattern_from_json(parse_json_text(text));
  EXPECT_EQ(p, q);
  for (std::size_t j = 0; j < p.steps.size(); ++j) EXPECT_TRUE(same_bits(p.steps[j].basis.phi, q.steps[j].basis.phi)) << j;
  EXPECT_TRUE(same_bits(p.steps[2].adapt[0].basis->phi, q.steps[2].adapt[0].basis->phi));
  EXPECT_EQ(to_json(q).dump(), text);
}

TEST(JsonPattern, AcceptsSingleAdaptObject) {
  const auto j = parse_json_text(R"({"steps":[
      {"site":[0,0],"basis":{"kind":"X"},"var":"a"},
      {"site":[0,1],"basis":{"kind":"Phase","phi":0.5},"var":"b",
       "adapt":{"on":"a","equals":1,"action":"override","basis":{"kind":"Y"}}}],
    "outcome_vars":["a","b"]})");
  const auto p = pattern_from_json(j);
  ASSERT_EQ(p.steps[1].adapt.size(), 1u);
  EXPECT_EQ(p.steps[1].adapt[0].basis->kind, BasisKind::kY);
  EXPECT_TRUE(p.byproduct_rules.empty());
}

TEST(JsonPattern, MalformedInputIsAParseError) {
  const auto code_of = [](const std::string& text) {
    try {
      pattern_from_json(parse_json_text(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code_of("{not json"), ErrorCode::kParse);
  EXPECT_EQ(code_of(R"({"outcome_vars":[]})"), ErrorCode::kParse);
  EXPECT_EQ(code_of(R"({"steps":[{"site":[0],"basis":{"kind":"X"},"var":"a"}]})"), ErrorCode::kParse);
  EXPECT_EQ(code_of(R"({"steps":[{"site":[0,0],"basis":{"kind":"Q"},"var":"a"}]})"), ErrorCode::kParse);
  EXPECT_EQ(code_of(R"({"steps":[{"site":[0,0],"basis":{"kind":"X","dim":3},"var":"a"}]})"), ErrorCode::kParse);
  EXPECT_EQ(code_of(R"({"steps":[{"site":[0,0],"basis":{"kind":"X"},"var":"a","adapt":{"on":"a","equals":1,"action":"jump"}}]})"),
            ErrorCode::kParse);
  // Well-formed JSON that fails pattern validation.
  EXPECT_THROW(pattern_from_json(parse_json_text(
                   R"({"steps":[{"site":[0,0],"basis":{"kind":"X"},"var":"a"},{"site":[0,0],"basis":{"kind":"X"},"var":"b"}],
                       "outcome_vars":["a","b"]})")),
               Error);
}

TEST(JsonState, RoundTripIsBitExact) {
  Rng rng(12);
  const PureState s({2, 3, 2}, rng.random_state(12));
  const PureState t = state_from_json(parse_json_text(to_json(s).dump()));
  EXPECT_EQ(s.dims(), t.dims());
  for (Eigen::Index i = 0; i < s.amps().size(); ++i) {
    EXPECT_TRUE(same_bits(s.amps()(i).real(), t.amps()(i).real()));
    EXPECT_TRUE(same_bits(s.amps()(i).imag(), t.amps()(i).imag()));
  }
  const Json j = to_json(PureState({2}, basis_ket(2, 1)));
  EXPECT_EQ(j.dump(), R"({"dims":[2],"amps":[0.0,0.0,1.0,0.0]})");
}

TEST(JsonMatrix, RowMajorInterleaved) {
  Matrix m(2, 3);
  m << 1, Complex(0, 2), 3, 4, 5, Complex(-6, 0.5);
  const Json j = to_json(m);
  EXPECT_EQ(j["data"][2].get<double>(), 0.0);
  EXPECT_EQ(j["data"][3].get<double>(), 2.0);
  EXPECT_EQ(matrix_from_json(j), m);
  EXPECT_THROW(matrix_from_json(parse_json_text(R"({"rows":2,"cols":2,"data":[1,0]})")), Error);
}

TEST(JsonGroup, DumpListsEveryElement) {
  const ProjectiveGroup g = closure({gates::h(), gates::z()});
  const Json j = to_json(g, {"H", "Z"});
  EXPECT_EQ(j["order"].get<int>(), 8);
  ASSERT_EQ(j["elements"].size(), 8u);
  for (const auto& e : j["elements"]) {
    Matrix w = identity(2);
    for (const auto& name : e["word"]) w = w * gates::by_name(name.get<std::string>());
    EXPECT_LT(phase_distance(w, matrix_from_json(e["rep"])), 1e-9);
  }
}

TEST(JsonResource, CompactAndJsonForms) {
  const ResourceSpec a = parse_resource("correlation:k=5,n=6");
  EXPECT_EQ(a.family, "correlation");
  EXPECT_EQ(a.k, 5);
  EXPECT_EQ(a.n, 6);
  EXPECT_EQ(resource_from_json(to_json(a)), a);
  EXPECT_EQ(parse_resource(R"({"family":"aklt","n":4})").n, 4);
  const ResourceSpec enc = parse_resource("encoded:k=2,m=2");
  EXPECT_EQ(resource_state(enc).site_count(), 10);
  EXPECT_EQ(resource_state(parse_resource("lattice:rows=2,cols=3")).site_count(), 6);
  EXPECT_EQ(resource_chain(parse_resource("cluster:n=3")).size(), 3);
  EXPECT_THROW(parse_resource("torus:n=3"), Error);
  EXPECT_THROW(parse_resource("correlation:k=2"), Error);
  EXPECT_THROW(parse_resource("aklt:n"), Error);
  EXPECT_THROW(parse_resource("aklt:q=3"), Error);
  EXPECT_THROW(resource_chain(enc), Error);
}

TEST(JsonRecord, PatternRunSerializes) {
  MeasurementPattern p;
  p.steps.push_back({{0, 0}, BasisSpec::x(), "a", {}});
  p.outcome_vars = {"a"};
  const auto recs = run_pattern(correlation_chain(3, 2), p, RunMode::force({{"a", 1}}));
  const Json j = to_json(recs.at(0));
  EXPECT_EQ(j["outcomes"]["a"].get<int>(), 1);
  EXPECT_TRUE(j.contains("realized_op"));
  EXPECT_EQ(j.dump(), to_json(recs.at(0)).dump());
}
