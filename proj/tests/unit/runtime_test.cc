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
#include <map>
#include <set>

#include "doctest.h"
#include "evoleague/checkpoint.h"
#include "evoleague/runtime.h"
#include "test_util.h"

namespace evoleague {
namespace {

// Upper 0.001 quantile of the chi-square distribution with 9 degrees of
// freedom.
constexpr double kChiSquare9 = 27.88;

ExperimentConfig Rps5Config(std::uint64_t seed, int n = 20) {
  ExperimentConfig c;
  c.game.name = "rps";
  c.game.k = 5;
  c.population.size = n;
  c.runtime.seed = seed;
  return c;
}

LeagueView ViewOf(const std::vector<double>& ratings) {
  std::vector<AgentPtr> active;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    auto a = std::make_shared<Agent>();
    a->id = static_cast<AgentId>(i + 1);
    a->rating = ratings[i];
    active.push_back(a);
  }
  return LeagueView(active, std::make_shared<const std::vector<AgentPtr>>(), 0);
}

std::int64_t TotalMatches(const PayoffTable& t) {
  std::int64_t n = 0;
  for (const auto& [key, e] : t.entries()) n += e.count;
  return n;
}

// Everything that the QD layer could perturb apart from its own bookkeeping
// (criteria and satisfaction histories).
void CheckSameTrajectory(const LeagueState& a, const LeagueState& b) {
  CHECK(a.clock == b.clock);
  CHECK(a.table == b.table);
  REQUIRE(a.league.active().size() == b.league.active().size());
  for (std::size_t i = 0; i < a.league.active().size(); ++i) {
    const Agent& x = *a.league.active()[i];
    const Agent& y = *b.league.active()[i];
    CHECK(x.id == y.id);
    CHECK(x.params.logits == y.params.logits);
    CHECK(x.rating == y.rating);
    CHECK(x.hypers == y.hypers);
    CHECK(x.matches_played == y.matches_played);
    CHECK(x.units == y.units);
  }
  REQUIRE(a.league.hall().size() == b.league.hall().size());
  for (std::size_t i = 0; i < a.league.hall().size(); ++i) {
    CHECK(a.league.hall()[i]->id == b.league.hall()[i]->id);
  }
  CHECK(a.archive.cells().size() == b.archive.cells().size());
}

TEST_CASE("zero gamma schedules uniformly") {
  const LeagueView view = ViewOf({900, 950, 1000, 1010, 1020, 1100, 1200, 1300, 1400, 1500});
  Rng rng(1);
  std::map<AgentId, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[PickNextAgent(view, rng, 0.0)];
  double chi2 = 0.0;
  for (const auto& [id, c] : counts) chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
  CHECK(counts.size() == 10);
  CHECK(chi2 < kChiSquare9);
}

TEST_CASE("gamma two gives e squared odds between best and worst") {
  const LeagueView view = ViewOf({1000.0, 1200.0});
  Rng rng(2);
  int best = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) best += PickNextAgent(view, rng, 2.0) == 2;
  const double odds = static_cast<double>(best) / (draws - best);
  CHECK(std::abs(odds / std::exp(2.0) - 1.0) < 0.05);
}

TEST_CASE("a single agent is always scheduled") {
  const LeagueView view = ViewOf({1000.0});
  Rng rng(3);
  for (int i = 0; i < 10; ++i) CHECK(PickNextAgent(view, rng, 5.0) == 1);
}

TEST_CASE("each unit advances the clock once and plays one match") {
  const ExperimentConfig config = Rps5Config(4, 6);
  const GameSpec game = MakeGame(config.game);
  LeagueState state = InitialState(config, game);
  Rng rng(4);
  for (int u = 0; u < 500; ++u) {
    const LogicalTime clock = state.clock;
    const std::int64_t matches = TotalMatches(state.table);
    const AgentId id = PickNextAgent(state.league.Snapshot(clock), rng, 1.0);
    RunUnit(state, config, game, id);
    CHECK(state.clock == clock + 1);
    CHECK(TotalMatches(state.table) == matches + 1);
  }
}

TEST_CASE("without pbt the active ids never change") {
  ExperimentConfig config = Rps5Config(5, 6);
  config.pbt.enabled = false;
  const GameSpec game = MakeGame(config.game);
  LeagueState state = InitialState(config, game);
  std::vector<AgentId> ids;
  for (const auto& a : state.league.active()) ids.push_back(a->id);
  std::int64_t matches = 0;
  RunLeague(state, config, game, 2000,
            {.on_checkpoint = {}, .on_match = [&](const MatchResult&) { ++matches; }});
  std::vector<AgentId> after;
  std::int64_t played = 0;
  for (const auto& a : state.league.active()) {
    after.push_back(a->id);
    played += a->matches_played;
  }
  CHECK(after == ids);
  CHECK(state.league.hall().empty());
  CHECK(matches == 2000);
  // Every match is between two active agents here.
  CHECK(played == 2 * 2000);
}

TEST_CASE("single worker runs are reproducible") {
  const ExperimentConfig config = Rps5Config(6, 8);
  const GameSpec game = MakeGame(config.game);
  LeagueState a = InitialState(config, game);
  LeagueState b = InitialState(config, game);
  RunLeague(a, config, game, 3000);
  RunLeague(b, config, game, 3000);
  CHECK(StateDigest(config, a) == StateDigest(config, b));
  LeagueState c = InitialState(Rps5Config(7, 8), game);
  RunLeague(c, Rps5Config(7, 8), game, 3000);
  CHECK(StateDigest(config, a) != StateDigest(config, c));
}

TEST_CASE("zero units leave the state unchanged") {
  const ExperimentConfig config = Rps5Config(8, 8);
  const GameSpec game = MakeGame(config.game);
  LeagueState state = InitialState(config, game);
  const std::string before = SerializeCheckpoint(config, state);
  int hooks = 0;
  const RunResult r = RunLeague(state, config, game, 0,
                                {.on_checkpoint = [&](const LeagueState&) { ++hooks; }});
  CHECK(r.units == 0);
  CHECK(hooks == 0);
  CHECK(SerializeCheckpoint(config, state) == before);
}

TEST_CASE("qd layer is conservative when switched off") {
  ExperimentConfig on = Rps5Config(9, 10);
  on.qd.beta_f = 0.0;
  on.qd.adapt = false;
  ExperimentConfig off = on;
  off.qd.enabled = false;
  const GameSpec game = MakeGame(on.game);
  LeagueState a = InitialState(on, game);
  LeagueState b = InitialState(off, game);
  RunLeague(a, on, game, 5000);
  RunLeague(b, off, game, 5000);
  CHECK_FALSE(a.league.hall().empty());
  CheckSameTrajectory(a, b);
}

TEST_CASE("fixed opponent mode plays the pseudo agent") {
  ExperimentConfig config;
  config.population.size = 4;
  config.league.opponent = OpponentMode::kFixed;
  config.league.fixed_strategy = 1;
  config.pbt.enabled = false;
  const GameSpec game = MakeGame(config.game);
  LeagueState state = InitialState(config, game);
  std::set<AgentId> opponents;
  RunLeague(state, config, game, 200,
            {.on_checkpoint = {}, .on_match = [&](const MatchResult& m) { opponents.insert(m.b); }});
  CHECK(opponents == std::set<AgentId>{kFixedOpponentId});
  const Agent fixed = FixedOpponent(config, game);
  CHECK(PolicyToMixed(fixed.params).probs[1] == 1.0);
}

TEST_CASE("units for inactive agents report the unit") {
  const ExperimentConfig config = Rps5Config(10, 4);
  const GameSpec game = MakeGame(config.game);
  const LeagueState state = InitialState(config, game);
  try {
    ComputeUnit(config, game, state.league.Snapshot(0), 999, 17);
    FAIL("expected an error");
  } catch (const LeagueError& e) {
    CHECK(e.kind() == ErrorKind::kState);
    CHECK(std::string(e.what()).find("unit 17") != std::string::npos);
  }
}

struct InvariantChecker {
  const ExperimentConfig& config;
  int checks = 0;
  std::size_t hall = 0;
  double coverage = 0.0;
  double qd_score = -1e300;
  std::map<Cell, double> cells;
  std::int64_t max_spread = 0;

  void operator()(const LeagueState& s) {
    ++checks;
    CHECK(static_cast<int>(s.league.active().size()) == config.population.size);
    std::set<AgentId> ids;
    for (const auto& a : s.league.active()) {
      CHECK(WithinBounds(a->hypers, config.population.bounds));
      CHECK(std::isfinite(a->rating));
      ids.insert(a->id);
    }
    for (const auto& a : s.league.hall()) ids.insert(a->id);
    CHECK(ids.size() == s.league.active().size() + s.league.hall().size());
    CHECK(s.league.hall().size() >= hall);
    hall = s.league.hall().size();

    const nlohmann::json m = PayoffMatrixDocument(s);
    const auto& payoff = m["payoff"];
    bool antisymmetric = true;
    for (std::size_t i = 0; i < payoff.size(); ++i) {
      for (std::size_t j = 0; j < payoff.size(); ++j) {
        antisymmetric &= payoff[i][j].get<double>() == -payoff[j][i].get<double>();
      }
    }
    CHECK(antisymmetric);

    CHECK(s.archive.Coverage() >= coverage);
    CHECK(s.archive.QdScore() >= qd_score);
    coverage = s.archive.Coverage();
    qd_score = s.archive.QdScore();
    for (const auto& [cell, entry] : cells) {
      const auto it = s.archive.cells().find(cell);
      REQUIRE(it != s.archive.cells().end());
      CHECK(it->second.quality >= entry);
    }
    cells.clear();
    for (const auto& [cell, entry] : s.archive.cells()) cells[cell] = entry.quality;

    std::int64_t lo = s.league.active().front()->units, hi = lo;
    for (const auto& a : s.league.active()) {
      lo = std::min(lo, a->units);
      hi = std::max(hi, a->units);
    }
    max_spread = std::max(max_spread, hi - lo);
  }
};

TEST_CASE("eight workers keep every invariant over 50k units") {
  ExperimentConfig config = Rps5Config(11);
  config.runtime.workers = 8;
  config.runtime.checkpoint_every = 1000;
  const GameSpec game = MakeGame(config.game);
  LeagueState state = InitialState(config, game);
  InvariantChecker checker{config};
  const RunResult r = RunLeague(state, config, game, 50000,
                                {.on_checkpoint = [&](const LeagueState& s) { checker(s); }});
  CHECK(r.units == 50000);
  CHECK(state.clock == 50000);
  CHECK(checker.checks == 50);
  CHECK(checker.max_spread > 1);
}

TEST_CASE("replaying the commit log reproduces a multi-worker run") {
  ExperimentConfig config = Rps5Config(12, 10);
  config.runtime.workers = 4;
  const GameSpec game = MakeGame(config.game);
  const LeagueState initial = InitialState(config, game);
  LeagueState state = initial;
  const RunResult r = RunLeague(state, config, game, 5000);
  REQUIRE(r.commit_log.size() == 5000);
  const LeagueState replayed = Replay(initial, config, game, r.commit_log);
  CHECK(SerializeCheckpoint(config, replayed) == SerializeCheckpoint(config, state));
}

TEST_CASE("metrics summarise the state") {
  const ExperimentConfig config = Rps5Config(13, 6);
  const GameSpec game = MakeGame(config.game);
  LeagueState state = InitialState(config, game);
  RunLeague(state, config, game, 1000);
  const Metrics m = ComputeMetrics(state, config, game);
  CHECK(m.at == 1000);
  CHECK(m.rating_min <= m.rating_mean);
  CHECK(m.rating_mean <= m.rating_max);
  CHECK(m.coverage == state.archive.Coverage());
  CHECK(m.qd_score == state.archive.QdScore());
  CHECK(m.hall_size == static_cast<int>(state.league.hall().size()));
  REQUIRE(m.exploitability.has_value());
  CHECK(*m.exploitability >= 0.0);
}

}  // namespace
}  // namespace evoleague
