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

#include <cmath>

#include "doctest.h"
#include "evoleague/qd.h"
#include "test_util.h"

namespace evoleague {
namespace {

using testing::KindOf;
using testing::RandomSimplex;

AgentPtr MakeAgent(AgentId id, double rating, std::optional<BdVector> bd = std::nullopt) {
  auto a = std::make_shared<Agent>();
  a->id = id;
  a->rating = rating;
  a->bd = std::move(bd);
  a->params.logits = {0.0, 0.0, 0.0};
  return a;
}

LeagueView ViewOf(std::vector<AgentPtr> active) {
  return LeagueView(std::move(active), std::make_shared<const std::vector<AgentPtr>>(), 0);
}

TEST_CASE("descriptor from a single one-hot match") {
  MatchResult r;
  r.a = 1;
  r.b = 2;
  r.bd_a = {0.0, 1.0, 0.0};
  r.bd_b = {0.0, 0.0, 1.0};
  const std::vector<MatchResult> results{r};
  CHECK(*ComputeBd(results, 1, 8) == BdVector{0.0, 1.0, 0.0});
  CHECK(*ComputeBd(results, 2, 8) == BdVector{0.0, 0.0, 1.0});
  CHECK_FALSE(ComputeBd(results, 3, 8).has_value());
  CHECK_FALSE(ComputeBd(std::span<const BdVector>{}, 8).has_value());
}

TEST_CASE("descriptor of a pure rock agent") {
  const GameSpec rps = MakeRps(3);
  Agent rock;
  rock.id = 1;
  rock.params.logits = {60.0, 0.0, 0.0};
  Agent other;
  other.id = 2;
  other.params.logits = {0.0, 0.0, 0.0};
  Rng rng(1);
  std::vector<BdVector> bds;
  for (int i = 0; i < 20; ++i) bds.push_back(PlayMatch(rps, rock, other, 32, rng).bd_a);
  CHECK(*ComputeBd(bds, 8) == BdVector{1.0, 0.0, 0.0});
}

TEST_CASE("descriptor of a uniform agent concentrates near uniform") {
  const GameSpec rps = MakeRps(3);
  Agent a;
  a.id = 1;
  a.params.logits = {0.0, 0.0, 0.0};
  Agent b = a;
  b.id = 2;
  Rng rng(2);
  std::vector<MatchResult> results;
  for (int i = 0; i < 1000; ++i) results.push_back(PlayMatch(rps, a, b, 32, rng));
  const BdVector bd = *ComputeBd(results, 1, 1000);
  for (double x : bd) CHECK(std::abs(x - 1.0 / 3.0) < 0.05);
}

TEST_CASE("descriptor window keeps only the latest matches") {
  std::vector<BdVector> bds{{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const BdVector bd = *ComputeBd(bds, 2);
  CHECK(bd == BdVector{0.0, 0.5, 0.5});
}

TEST_CASE("discretize examples") {
  CHECK(Discretize({1.0, 0.0, 0.0}, 10) == Cell{9, 0, 0});
  CHECK(Discretize({1.0 / 3, 1.0 / 3, 1.0 / 3}, 10) == Cell{3, 3, 3});
  CHECK(Discretize({0.25, 0.25, 0.5}, 10) == Discretize({0.25, 0.25, 0.5}, 10));
  CHECK(Discretize({0.0, 0.05, 0.95}, 10) == Cell{0, 0, 9});
}

TEST_CASE("reachable cell count matches the brute force oracle") {
  for (int d = 2; d <= 5; ++d) {
    for (int r = 1; r <= 12; ++r) {
      CHECK(ReachableCellCount(d, r) == oracle::BruteForceReachableCells(d, r));
    }
  }
  CHECK(ReachableCellCount(3, 10) == 163);
}

TEST_CASE("every discretized simplex point is reachable") {
  Rng rng(3);
  for (int trial = 0; trial < 5000; ++trial) {
    const int k = 2 + trial % 5;
    const MixedStrategy p = RandomSimplex(k, rng);
    CHECK(IsReachable(Discretize(p.probs, 10), 10));
  }
  for (int k = 2; k <= 5; ++k) {
    for (int i = 0; i < k; ++i) CHECK(IsReachable(Discretize(Pure(k, i).probs, 10), 10));
  }
}

TEST_CASE("archive insertion rules") {
  Archive archive(3, 10);
  CHECK(archive.Coverage() == 0.0);
  CHECK(archive.QdScore() == 0.0);
  const BdVector bd{0.5, 0.25, 0.25};
  CHECK(archive.Insert(*MakeAgent(1, 1000.0), bd, 1000.0));
  CHECK(archive.QdScore() == 1000.0);
  CHECK(archive.Coverage() == doctest::Approx(1.0 / 163.0));
  CHECK_FALSE(archive.Insert(*MakeAgent(2, 1000.0), bd, 1000.0));
  CHECK(archive.cells().begin()->second.agent->id == 1);
  const auto before = archive.cells();
  CHECK_FALSE(archive.Insert(*MakeAgent(3, 900.0), bd, 900.0));
  CHECK(archive.cells().size() == before.size());
  CHECK(archive.cells().begin()->second.agent == before.begin()->second.agent);
  CHECK(archive.cells().begin()->second.quality == before.begin()->second.quality);
  CHECK(archive.Insert(*MakeAgent(4, 1040.0), bd, 1040.0));
  CHECK(archive.QdScore() == 1040.0);
}

TEST_CASE("coverage and qd score never decrease") {
  Archive archive(4, 6);
  Rng rng(4);
  double coverage = 0.0, score = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const double quality = 800.0 + 400.0 * Uniform01(rng);
    const double before = archive.QdScore();
    const bool inserted =
        archive.Insert(*MakeAgent(i + 1, quality), RandomSimplex(4, rng).probs, quality);
    CHECK(archive.Coverage() >= coverage);
    CHECK(archive.QdScore() >= score);
    if (!inserted) CHECK(archive.QdScore() == before);
    coverage = archive.Coverage();
    score = archive.QdScore();
  }
  CHECK(coverage <= 1.0);
}

TEST_CASE("satisfaction examples") {
  PayoffTable table;
  table.Add(1, 2, 0.1, 1);
  table.Add(1, 3, 0.5, 1);
  table.Add(1, 4, -0.2, 1);
  const AgentPtr me = MakeAgent(1, 1000.0, BdVector{0.95, 0.05, 0.0});
  const LeagueView view = ViewOf(
      {me, MakeAgent(2, 1000.0), MakeAgent(3, 1000.0), MakeAgent(4, 1000.0), MakeAgent(5, 1000.0)});

  CHECK(CriterionSatisfaction(*me, {BeatAgent{2, 0.1}}, table, view, 10) == 1.0);
  CHECK(CriterionSatisfaction(*me, {BeatAgent{2, 0.11}}, table, view, 10) == 0.0);
  CHECK(CriterionSatisfaction(*me, {BeatAgent{5, -1.0}}, table, view, 10) == 0.0);

  Mixture m;
  m.parts = {NicheCriterion{BeatAgent{3, 0.1}}, NicheCriterion{BeatAgent{4, 0.1}}};
  m.weights = {0.5, 0.5};
  CHECK(CriterionSatisfaction(*me, {m}, table, view, 10) == 0.5);

  // Only target 3 of four is beaten: 0.25 / 0.5.
  PayoffTable set_table;
  set_table.Add(1, 3, 0.5, 1);
  set_table.Add(1, 4, -0.5, 1);
  const BeatSet set{{2, 3, 4, 5}, 0.5};
  CHECK(CriterionSatisfaction(*me, {set}, set_table, view, 10) == 0.5);

  CHECK(CriterionSatisfaction(*me, {BdTarget{{{9, 0, 0}, 0}}}, table, view, 10) == 1.0);
  CHECK(CriterionSatisfaction(*me, {BdTarget{{{7, 2, 0}, 1}}}, table, view, 10) == 0.0);
  CHECK(CriterionSatisfaction(*me, {BdTarget{{{8, 1, 0}, 1}}}, table, view, 10) == 1.0);
  CHECK(CriterionSatisfaction(*MakeAgent(2, 1000.0), {BdTarget{{{8, 1, 0}, 9}}}, table, view,
                              10) == 0.0);

  CHECK(KindOf([&] { CriterionSatisfaction(*me, {BeatAgent{99, 0.0}}, table, view, 10); }) ==
        ErrorKind::kNotFound);
}

NicheCriterion RandomCriterion(Rng& rng, int depth) {
  const double u = Uniform01(rng);
  auto id = [&] { return static_cast<AgentId>(2 + Uniform01(rng) * 5); };
  if (u < 0.25) {
    return {BdTarget{{{static_cast<int>(Uniform01(rng) * 5), static_cast<int>(Uniform01(rng) * 5),
                       static_cast<int>(Uniform01(rng) * 5)},
                      static_cast<int>(Uniform01(rng) * 3)}}};
  }
  if (u < 0.5) return {BeatAgent{id(), 2.0 * Uniform01(rng) - 1.0}};
  if (u < 0.75 || depth > 1) {
    BeatSet s;
    const int n = 1 + static_cast<int>(Uniform01(rng) * 4);
    for (int i = 0; i < n; ++i) s.targets.push_back(id());
    s.required_fraction = 0.05 + 0.95 * Uniform01(rng);
    return {s};
  }
  Mixture m;
  const int n = 1 + static_cast<int>(Uniform01(rng) * 3);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    m.parts.push_back(RandomCriterion(rng, depth + 1));
    m.weights.push_back(Uniform01(rng) + 1e-3);
    total += m.weights.back();
  }
  for (double& w : m.weights) w /= total;
  return {m};
}

TEST_CASE("satisfaction stays in the unit interval") {
  Rng rng(5);
  std::vector<AgentPtr> agents;
  for (int i = 1; i <= 6; ++i) {
    agents.push_back(MakeAgent(i, 1000.0, RandomSimplex(3, rng).probs));
  }
  const LeagueView view = ViewOf(agents);
  PayoffTable table;
  for (int i = 0; i < 40; ++i) {
    MatchResult r;
    r.a = 1 + static_cast<AgentId>(Uniform01(rng) * 6);
    r.b = r.a % 6 + 1;
    r.payoff_a = 2.0 * Uniform01(rng) - 1.0;
    table.Record(r);
  }
  for (int trial = 0; trial < 2000; ++trial) {
    const NicheCriterion c = RandomCriterion(rng, 0);
    CHECK_NOTHROW(ValidateCriterion(c));
    const double s = CriterionSatisfaction(*agents[0], c, table, view, 5);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("shaped fitness examples") {
  PayoffTable table;
  table.Add(1, 2, 0.5, 1);
  const AgentPtr a = MakeAgent(1, 1000.0);
  const AgentPtr b = MakeAgent(2, 1000.0);
  const LeagueView view = ViewOf({a, b});
  const NicheCriterion beat{BeatAgent{2, 0.1}};
  CHECK(ShapedFitness(*a, beat, table, view, 0.0, 10) == 1000.0);
  CHECK(ShapedFitness(*a, beat, table, view, 100.0, 10) == 1100.0);
  const NicheCriterion beat_a{BeatAgent{1, 0.1}};
  CHECK(ShapedFitness(*a, beat, table, view, 50.0, 10) >
        ShapedFitness(*b, beat_a, table, view, 50.0, 10));
}

Agent WithHistory(const Agent& base, NicheCriterion c, std::vector<double> history) {
  Agent a = base;
  a.criterion = std::move(c);
  a.satisfaction_history = std::move(history);
  return a;
}

TEST_CASE("criterion adaptation examples") {
  std::vector<AgentPtr> agents;
  for (int i = 1; i <= 6; ++i) agents.push_back(MakeAgent(i, 900.0 + 30.0 * i));
  const LeagueView view = ViewOf(agents);
  const Archive archive(3, 10);
  const PayoffTable table;
  const QdConfig config;
  Rng rng(6);
  const Agent& me = *agents[2];

  const AdaptedCriterion up = AdaptCriterion(
      WithHistory(me, {BeatAgent{2, 0.1}}, {1, 1, 1, 1, 1}), view, table, archive, rng, config);
  CHECK(up.change == Adaptation::kEscalate);
  const auto* set = std::get_if<BeatSet>(&up.criterion.value);
  REQUIRE(set != nullptr);
  CHECK(set->targets.size() == 3);
  for (AgentId t : set->targets) {
    CHECK(t != me.id);
    CHECK(view.Find(t) != nullptr);
  }

  const AdaptedCriterion down = AdaptCriterion(
      WithHistory(me, {BeatSet{{1, 2, 4}, 0.75}}, {0, 0, 0, 0, 0}), view, table, archive, rng,
      config);
  CHECK(down.change == Adaptation::kRelax);
  CHECK(std::get<BeatSet>(down.criterion.value).required_fraction == 0.5);

  const NicheCriterion kept{BeatSet{{1, 2, 4}, 0.75}};
  const AdaptedCriterion same = AdaptCriterion(
      WithHistory(me, kept, {0.5, 0.5, 0.5, 0.5, 0.5}), view, table, archive, rng, config);
  CHECK(same.change == Adaptation::kNone);
  CHECK(same.criterion == kept);

  const AdaptedCriterion short_history = AdaptCriterion(
      WithHistory(me, kept, {1, 1, 1, 1}), view, table, archive, rng, config);
  CHECK(short_history.change == Adaptation::kNone);
}

TEST_CASE("escalated bd targets move to unexplored cells") {
  Archive archive(3, 10);
  Rng rng(7);
  const AgentPtr me = MakeAgent(1, 1000.0, BdVector{0.35, 0.35, 0.3});
  const LeagueView view = ViewOf({me, MakeAgent(2, 1000.0)});
  archive.Insert(*me, *me->bd, 1000.0);
  const QdConfig config;
  const Cell here = Discretize(*me->bd, 10);
  for (int i = 0; i < 50; ++i) {
    const AdaptedCriterion out = AdaptCriterion(
        WithHistory(*me, {BdTarget{{here, 1}}}, {1, 1, 1, 1, 1}), view, PayoffTable{}, archive,
        rng, config);
    const auto& region = std::get<BdTarget>(out.criterion.value).region;
    CHECK(region.radius == config.target_radius);
    CHECK_FALSE(archive.Occupied(region.center));
    CHECK(IsReachable(region.center, 10));
    CHECK_FALSE(region.Contains(here));
  }
}

TEST_CASE("adaptation never produces dangling targets") {
  Rng rng(8);
  std::vector<AgentPtr> agents;
  for (int i = 1; i <= 7; ++i) agents.push_back(MakeAgent(i, 800.0 + 50.0 * i));
  const LeagueView view = ViewOf(agents);
  const Archive archive(3, 10);
  const QdConfig config;
  for (int trial = 0; trial < 2000; ++trial) {
    const Agent& me = *agents[trial % 7];
    std::vector<double> history(5, trial % 2 == 0 ? 1.0 : 0.0);
    NicheCriterion c = RandomCriterion(rng, 0);
    RepairCriterion(c, me, view);
    const AdaptedCriterion out =
        AdaptCriterion(WithHistory(me, c, history), view, PayoffTable{}, archive, rng, config);
    for (AgentId t : ReferencedTargets(out.criterion)) CHECK(view.Find(t) != nullptr);
    CHECK_NOTHROW(ValidateCriterion(out.criterion));
  }
}

TEST_CASE("repair replaces missing targets with the nearest rated agent") {
  const AgentPtr me = MakeAgent(1, 1000.0);
  const LeagueView view = ViewOf({me, MakeAgent(2, 1500.0), MakeAgent(3, 1010.0)});
  NicheCriterion c{BeatSet{{2, 42}, 0.5}};
  CHECK(RepairCriterion(c, *me, view));
  CHECK(std::get<BeatSet>(c.value).targets == std::vector<AgentId>{2, 3});
  CHECK_FALSE(RepairCriterion(c, *me, view));
}

TEST_CASE("criterion validation") {
  CHECK(KindOf([] { ValidateCriterion({BeatSet{{}, 0.5}}); }) == ErrorKind::kInvalidInput);
  Mixture empty;
  CHECK(KindOf([&] { ValidateCriterion({empty}); }) == ErrorKind::kInvalidInput);
  Mixture skewed;
  skewed.parts = {NicheCriterion{BeatAgent{1, 0.0}}};
  skewed.weights = {0.7};
  CHECK(KindOf([&] { ValidateCriterion({skewed}); }) == ErrorKind::kInvalidInput);
}

TEST_CASE("qd config validation") {
  QdConfig c;
  CHECK_NOTHROW(ValidateQdConfig(c));
  c.s_lo = 0.9;
  CHECK(KindOf([&] { ValidateQdConfig(c); }) == ErrorKind::kConfig);
  c = {};
  c.resolution = 0;
  CHECK(KindOf([&] { ValidateQdConfig(c); }) == ErrorKind::kConfig);
}

}  // namespace
}  // namespace evoleague
