// Copyright 2026 The EvoLeague Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "evoleague/gametheory.h"
#include "test_util.h"

namespace evoleague {
namespace {

using testing::KindOf;
using testing::RandomSimplex;

SquareMatrix RandomMatrix(int n, std::uint64_t seed) {
  return SquareMatrix::FromGame(MakeRandomAntisymmetric(n, seed));
}

oracle::Matrix ToOracle(const SquareMatrix& a) {
  oracle::Matrix m(a.size(), std::vector<double>(a.size()));
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) m[i][j] = a(i, j);
  }
  return m;
}

TEST_CASE("best response examples") {
  const SquareMatrix rps = SquareMatrix::FromGame(MakeRps(3));
  const BestResponseResult vs_rock = BestResponse(rps, Pure(3, 0).probs);
  CHECK(vs_rock.index == 1);
  CHECK(vs_rock.value == 1.0);
  CHECK(BestResponse(rps, Uniform(3).probs).value == 0.0);
  // Uniform tie is broken towards the lowest index.
  CHECK(BestResponse(rps, Uniform(3).probs).index == 0);

  const SquareMatrix a = RandomMatrix(4, 42);
  const std::vector<double> u = Uniform(4).probs;
  const BestResponseResult br = BestResponse(a, u);
  CHECK(br.value == doctest::Approx(oracle::BestResponseValue(ToOracle(a), u)).epsilon(1e-15));
  CHECK(KindOf([&] { BestResponse(a, Uniform(3).probs); }) == ErrorKind::kInvalidInput);
}

TEST_CASE("exploitability examples and nonnegativity") {
  const SquareMatrix rps = SquareMatrix::FromGame(MakeRps(3));
  CHECK(Exploitability(rps, Uniform(3).probs) == 0.0);
  CHECK(Exploitability(rps, Pure(3, 0).probs) == 1.0);
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 9;
    const SquareMatrix a = RandomMatrix(n, 7000 + trial);
    CHECK(Exploitability(a, RandomSimplex(n, rng).probs) >= -1e-12);
  }
}

TEST_CASE("fictitious play on rps converges to uniform") {
  const NashDistribution d = FictitiousPlay(SquareMatrix::FromGame(MakeRps(3)), 100000, 0.01);
  for (double p : d.probs) CHECK(std::abs(p - 1.0 / 3.0) <= 0.01);
  CHECK(d.exploitability <= 0.01);
  CHECK(d.iterations_used <= 100000);
}

TEST_CASE("strictly dominant strategy gets all the mass") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 5;
    SquareMatrix a = RandomMatrix(n, 300 + trial);
    const int dom = trial % n;
    for (int j = 0; j < n; ++j) {
      if (j == dom) continue;
      a(dom, j) = 0.1 + 0.9 * Uniform01(rng);
      a(j, dom) = -a(dom, j);
    }
    // Only the first few plays can go elsewhere, so the average approaches
    // the point mass at rate 1/t.
    const NashDistribution d = FictitiousPlay(a, 100000, 1e-12);
    CHECK(1.0 - d.probs[dom] <= 10.0 / d.iterations_used);
    CHECK(d.probs[dom] == *std::max_element(d.probs.begin(), d.probs.end()));
  }
}

TEST_CASE("fictitious play rejects non-antisymmetric input") {
  SquareMatrix a(2);
  a(0, 1) = 0.5;
  a(1, 0) = 0.4;
  CHECK(KindOf([&] { FictitiousPlay(a, 10, 0.1); }) == ErrorKind::kInvalidInput);
  CHECK(KindOf([&] { FictitiousPlay(SquareMatrix::FromGame(MakeRps(3)), 0, 0.1); }) ==
        ErrorKind::kInvalidInput);
  CHECK(KindOf([&] { FictitiousPlay(SquareMatrix::FromGame(MakeRps(3)), 10, 0.0); }) ==
        ErrorKind::kInvalidInput);
}

TEST_CASE("support enumeration oracle certifies itself") {
  const auto rps = oracle::SupportEnumNash(ToOracle(SquareMatrix::FromGame(MakeRps(3))));
  REQUIRE(rps.has_value());
  for (double p : rps->row) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto two = oracle::SupportEnumNash({{0.0, 0.7}, {-0.7, 0.0}});
  REQUIRE(two.has_value());
  CHECK(two->row[0] == 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const SquareMatrix a = RandomMatrix(n, 10000 + trial);
    const auto eq = oracle::SupportEnumNash(ToOracle(a));
    REQUIRE(eq.has_value());
    CHECK(Exploitability(a, eq->row) <= 1e-9);
  }
}

TEST_CASE("fictitious play agrees with the oracle on 4x4 fixtures") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SquareMatrix a = RandomMatrix(4, seed);
    const NashDistribution d = FictitiousPlay(a, 100000, 0.01);
    const auto eq = oracle::SupportEnumNash(ToOracle(a));
    REQUIRE(eq.has_value());
    CHECK(d.exploitability <= 0.02);
    CHECK(std::abs(d.exploitability - Exploitability(a, eq->row)) <= 0.02);
    CHECK(d.exploitability == Exploitability(a, d.probs));
  }
}

TEST_CASE("fictitious play improves in the long run") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SquareMatrix a = RandomMatrix(3 + static_cast<int>(seed % 6), 50000 + seed);
    const double early = FictitiousPlay(a, 100, 1e-15).exploitability;
    const double late = FictitiousPlay(a, 10000, 1e-15).exploitability;
    // A run that already reached an exact equilibrium by step 100 stops there.
    if (early == 0.0) continue;
    CHECK(late < early);
  }
}

TEST_CASE("fictitious play is scale equivariant") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SquareMatrix a = RandomMatrix(5, 600 + seed);
    const NashDistribution base = FictitiousPlay(a, 2000, 1e-3);
    for (double c : {0.25, 2.0, 8.0}) {
      // Powers of two scale every payoff exactly, so argmax sequences match.
      const NashDistribution scaled = FictitiousPlay(a.Scaled(c), 2000, 1e-3 * c);
      CHECK(scaled.probs == base.probs);
      CHECK(scaled.iterations_used == base.iterations_used);
    }
  }
}

TEST_CASE("nash support examples") {
  const std::vector<AgentId> ids{10, 20, 30, 40};
  NashDistribution d;
  d.probs = {0.15, 0.5, 0.05, 0.3};
  const SupportSet s = NashSupport(d, ids, 0.1);
  CHECK(s.ids == std::vector<AgentId>{20, 40, 10});
  CHECK_FALSE(s.below_threshold);

  NashDistribution uniform;
  uniform.probs = Uniform(3).probs;
  CHECK(NashSupport(uniform, {1, 2, 3}, 0.1).ids.size() == 3);

  NashDistribution point;
  point.probs = {0.0, 1.0, 0.0};
  CHECK(NashSupport(point, {1, 2, 3}, 0.1).ids == std::vector<AgentId>{2});

  NashDistribution flat;
  flat.probs = {0.2, 0.3, 0.5};
  const SupportSet none = NashSupport(flat, {1, 2, 3}, 0.6);
  CHECK(none.ids == std::vector<AgentId>{3});
  CHECK(none.below_threshold);
  CHECK(KindOf([&] { NashSupport(flat, {1, 2, 3}, 1.0); }) == ErrorKind::kInvalidInput);
  CHECK(DefaultSupportThreshold(5) == 0.05);
}

TEST_CASE("empirical game imputes and flags missing pairs") {
  PayoffTable t;
  t.Add(1, 2, 0.6, 2);
  t.Add(2, 3, -0.2, 1);
  const EmpiricalGame g = BuildEmpiricalGame(t, {1, 2, 3});
  CHECK(g.payoff(0, 1) == doctest::Approx(0.3));
  CHECK(g.payoff(1, 0) == doctest::Approx(-0.3));
  CHECK(g.payoff(0, 2) == 0.0);
  CHECK_FALSE(g.observed[0 * 3 + 2]);
  CHECK(g.observed[0 * 3 + 1]);
  CHECK(g.coverage == doctest::Approx(2.0 / 3.0));
  CHECK_NOTHROW(CheckAntisymmetric(g.payoff));
}

TEST_CASE("empirical league nash is coverage gated") {
  PopulationConfig config;
  config.size = 3;
  Rng rng(1);
  const League league = League::SpawnInitial(config, 3, rng);
  PayoffTable t;
  t.Add(league.active_agent(0).id, league.active_agent(1).id, 0.1, 1);
  LeagueNashOptions opts;
  opts.source = NashSource::kEmpirical;
  CHECK(KindOf([&] { ComputeLeagueNash(league.Snapshot(0), t, MakeRps(3), opts); }) ==
        ErrorKind::kState);
  opts.source = NashSource::kExact;
  const LeagueNash n = ComputeLeagueNash(league.Snapshot(0), t, MakeRps(3), opts);
  CHECK(n.game.ids.size() == 3);
  CHECK(n.game_exploitability == doctest::Approx(GameExploitability(MakeRps(3), n.mixture)));
  CHECK(n.theta == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("source and population names round trip") {
  for (NashSource s : {NashSource::kEmpirical, NashSource::kHybrid, NashSource::kExact}) {
    CHECK(ParseNashSource(NashSourceName(s)) == s);
  }
  for (NashPopulation p : {NashPopulation::kAll, NashPopulation::kActive}) {
    CHECK(ParseNashPopulation(NashPopulationName(p)) == p);
  }
  CHECK(KindOf([] { ParseNashSource("guess"); }) == ErrorKind::kConfig);
}

}  // namespace
}  // namespace evoleague
