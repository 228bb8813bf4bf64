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

#include <gtest/gtest.h>

#include "corrspace/basis.hpp"
#include "corrspace/mps.hpp"
#include "corrspace/resources.hpp"
#include "oracles.hpp"

using namespace corrspace;

namespace {

double max_amplitude_deviation(const MpsChain& chain) {
  const auto expanded = to_statevector(chain);
  std::vector<int> s(static_cast<std::size_t>(chain.size()), 0);
  double worst = 0;
  std::size_t flat = 0;
  do {
    const Complex a = amplitude(chain, s);
    worst = std::max(worst, std::abs(a - oracle::sum_over_paths(chain, s)));
    worst = std::max(worst, std::abs(a - expanded.state.amps()(static_cast<Eigen::Index>(flat))));
    ++flat;
  } while (oracle::next_outcome(s, chain.phys_dims()));
  return worst;
}

}  // namespace

TEST(Amplitude, ProjectorChain) {
  std::vector<Matrix> site;
  for (int s = 0; s < 2; ++s) site.push_back(basis_ket(2, s) * basis_ket(2, s).adjoint());
  const MpsChain chain = MpsChain::uniform(4, site, basis_ket(2, 0), basis_ket(2, 0));
  EXPECT_NEAR(std::abs(amplitude(chain, {0, 0, 0, 0}) - Complex{1, 0}), 0, 1e-15);
  EXPECT_NEAR(std::abs(amplitude(chain, {0, 1, 0, 0})), 0, 1e-15);
  EXPECT_NEAR(std::abs(amplitude(chain, {1, 1, 1, 1})), 0, 1e-15);
}

TEST(Amplitude, TwoSiteCorrelationChainByHand) {
  const MpsChain chain = correlation_chain(3, 2);
  const Matrix g = gates::g(3);
  const Vector plus = ket_plus();
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      const Vector e1 = basis_ket(2, s1), e2 = basis_ket(2, s2);
      // <R| = (G^{-1}|+>)^dagger = <+| G for unitary G.
      const Complex expect = (plus.adjoint() * g * g * e2)(0) * (e2.adjoint() * g * e1)(0) * (e1.adjoint() * plus)(0);
      EXPECT_NEAR(std::abs(amplitude(chain, {s1, s2}) - expect), 0, 1e-15);
    }
  }
}

TEST(Amplitude, RangeErrors) {
  const MpsChain chain = correlation_chain(3, 3);
  EXPECT_THROW(amplitude(chain, {0, 0}), Error);
  EXPECT_THROW(amplitude(chain, {0, 2, 0}), Error);
  EXPECT_THROW(amplitude(chain, {0, -1, 0}), Error);
}

TEST(Amplitude, MatchesOraclesExhaustively) {
  for (int k : {3, 5, 6}) EXPECT_LT(max_amplitude_deviation(correlation_chain(k, 8)), 1e-12) << k;
  EXPECT_LT(max_amplitude_deviation(aklt_type_chain(5)), 1e-12);
  EXPECT_LT(max_amplitude_deviation(aklt_type_chain(6)), 1e-12);
}

TEST(ToStatevector, BornClosure) {
  for (const MpsChain& chain : {correlation_chain(3, 6), aklt_type_chain(4), cluster_chain(5)}) {
    const auto expanded = to_statevector(chain);
    double total = 0;
    std::vector<int> s(static_cast<std::size_t>(chain.size()), 0);
    do total += std::norm(amplitude(chain, s));
    while (oracle::next_outcome(s, chain.phys_dims()));
    EXPECT_NEAR(total, expanded.state.amps().squaredNorm(), 1e-10);
    EXPECT_NEAR(expanded.norm, std::sqrt(total), 1e-10);
    EXPECT_NEAR(to_statevector(chain, true).state.norm(), 1.0, 1e-12);
  }
}

TEST(ToStatevector, SingleSite) {
  const MpsChain chain = correlation_chain(4, 1);
  const auto psi = to_statevector(chain).state;
  const Matrix g = gates::g(4);
  for (int s = 0; s < 2; ++s) {
    const Complex direct = chain.right().dot(g * basis_ket(2, s) * basis_ket(2, s).dot(ket_plus()));
    EXPECT_NEAR(std::abs(psi.amps()(s) - direct), 0, 1e-15);
  }
}

TEST(ToStatevector, CapIsEnforced) {
  EXPECT_THROW(to_statevector(aklt_type_chain(13)), Error);
}

TEST(ProjectLocal, CorrelationChainTransport) {
  const MpsChain chain = correlation_chain(3, 2);
  const Matrix g = gates::g(3);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LT((project_local(chain, 0, ket_plus()) - r * g).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((project_local(chain, 0, ket_minus()) - r * g * gates::z()).cwiseAbs().maxCoeff(), 1e-15);
  Matrix sum = Matrix::Zero(2, 2);
  for (const Matrix& a : chain.site(0)) sum += a;
  EXPECT_LT((sum - g).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(project_local(chain, 0, Vector::Zero(2)), Error);
}

TEST(ProjectLocal, AkltBranches) {
  const MpsChain chain = aklt_type_chain(2);
  EXPECT_LT((project_local(chain, 0, basis_ket(3, 0)) - gates::h()).cwiseAbs().maxCoeff(), 1e-15);
  Matrix a1 = Matrix::Zero(2, 2), a2 = Matrix::Zero(2, 2);
  a1(1, 0) = std::sqrt(2.0);
  a2(0, 1) = std::sqrt(2.0);
  // X - iY = 2|1><0| and X + iY = 2|0><1|.
  EXPECT_LT((chain.site(0)[1] - a1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((chain.site(0)[2] - a2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Correlations, ProductChainVanishes) {
  const MpsChain chain = product_chain(6);
  for (int r = 1; r < 5; ++r) EXPECT_NEAR(two_point_correlation(chain, gates::z(), 0, r), 0, 1e-12);
  EXPECT_NEAR(two_point_correlation(chain, gates::x(), 1, 2), 0, 1e-12);
}

TEST(Correlations, DenseAndTransferAgreeWithBruteForce) {
  const MpsChain chain = correlation_chain(5, 8);
  for (int r = 1; r <= 4; ++r) {
    const double brute = oracle::z_correlator_bruteforce(chain, 2, r);
    EXPECT_NEAR(two_point_correlation(chain, gates::z(), 2, r), brute, 1e-12);
    EXPECT_NEAR(two_point_correlation_transfer(chain, gates::z(), 2, r), brute, 1e-12);
  }
}

TEST(Correlations, KFourVanishesBeyondNeighbors) {
  const MpsChain chain = correlation_chain(4, 12);
  for (int r = 2; r <= 6; ++r) EXPECT_LT(std::abs(two_point_correlation(chain, gates::z(), 3, r)), 1e-9);
}

// The Z record of the correlation chain is a symmetric two-state Markov chain
// that flips with probability sin^2(pi/k): the connected correlator at
// separation r equals (1 - 2 sin^2(pi/k))^r = cos(2 pi/k)^r. The successive
// ratio is therefore cos(2 pi/k), whose modulus is |2 sin^2(pi/k) - 1|.
TEST(Correlations, GeometricDecayRatio) {
  for (int k : {3, 5, 6, 8}) {
    const MpsChain chain = correlation_chain(k, 12);
    const double expect = std::cos(2 * kPi / k);
    const double xi = 2 * std::pow(std::sin(kPi / k), 2) - 1;
    for (int r = 1; r <= 5; ++r) {
      const double c0 = two_point_correlation(chain, gates::z(), 3, r);
      const double c1 = two_point_correlation(chain, gates::z(), 3, r + 1);
      EXPECT_NEAR(c0, std::pow(expect, r), 1e-12);
      EXPECT_NEAR(c1 / c0, expect, 1e-9) << "k=" << k << " r=" << r;
      EXPECT_NEAR(std::abs(c1 / c0), std::abs(xi), 1e-9);
    }
  }
}

TEST(Correlations, RejectsBadArguments) {
  const MpsChain chain = correlation_chain(3, 4);
  EXPECT_THROW(two_point_correlation(chain, gates::s(), 0, 1), Error);
  EXPECT_THROW(two_point_correlation(chain, gates::z(), 2, 3), Error);
}

TEST(Evolve, InversePairReturnsStart) {
  const Matrix g = gates::g(3);
  auto st = make_correlation_state(ket_plus());
  st = evolve(st, g * gates::z());
  st = evolve(st, gates::z() * g.inverse());
  EXPECT_TRUE(equal_up_to_scale(st.vec, ket_plus(), 1e-12));
  EXPECT_EQ(st.log.size(), 2u);
}

TEST(Evolve, ProjectedContractionMatchesOverlap) {
  Rng rng(21);
  for (const MpsChain& chain : {correlation_chain(3, 6), aklt_type_chain(5)}) {
    auto st = make_correlation_state(chain.left());
    std::vector<Vector> kets;
    for (int j = 0; j < chain.size(); ++j) {
      kets.push_back(rng.random_state(chain.phys_dim(j)));
      st = evolve(st, project_local(chain, j, kets.back()));
    }
    const Complex via_evolve = chain.right().dot(st.vec);
    const Complex overlap = PureState::product(kets).amps().dot(to_statevector(chain).state.amps());
    EXPECT_NEAR(std::abs(via_evolve - overlap), 0, 1e-12);
  }
}

TEST(Evolve, ZProjectorPreparesKnownState) {
  const MpsChain chain = correlation_chain(3, 2);
  auto st = make_correlation_state(ket_plus());
  for (int s = 0; s < 2; ++s) {
    const auto out = evolve(st, chain.site(0)[static_cast<std::size_t>(s)]);
    EXPECT_TRUE(equal_up_to_scale(out.vec, gates::g(3) * basis_ket(2, s), 1e-12));
  }
  const auto dead = evolve(make_correlation_state(basis_ket(2, 0)), chain.site(0)[1]);
  EXPECT_TRUE(dead.annihilated);
}
