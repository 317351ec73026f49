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

#ifndef EVOLEAGUE_RUNTIME_H_
#define EVOLEAGUE_RUNTIME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "evoleague/config.h"
#include "evoleague/gametheory.h"
#include "evoleague/games.h"
#include "evoleague/league.h"
#include "evoleague/population.h"
#include "evoleague/qd.h"

namespace evoleague {

// Id of the pseudo-agent used in fixed-opponent mode. Real ids start at 1.
inline constexpr AgentId kFixedOpponentId = 0;

// Everything a run mutates. The logical clock counts committed scheduling
// units; it is also the next unit's ticket, which keys that unit's random
// streams, so (config, state) fully determines the continuation of a run.
struct LeagueState {
  LogicalTime clock = 0;
  League league;
  PayoffTable table;
  Archive archive;
};

// Result of the off-store part of a unit: a learner burst and a match,
// computed against a snapshot. Committing it is deterministic.
struct UnitProposal {
  std::int64_t ticket = 0;
  AgentId agent = 0;
  std::vector<double> logits_before;
  std::vector<double> logits_after;
  std::vector<AgentId> burst_opponents;
  MatchResult match;
  // Ratings seen in the snapshot, used if a side has left the league by
  // commit time.
  double rating_a = 0.0;
  double rating_b = 0.0;
  LogicalTime snapshot_time = 0;
};

// Fresh league with initial niche criteria and an empty archive.
LeagueState InitialState(const ExperimentConfig& config, const GameSpec& game);

// Samples an active agent with probability proportional to
// exp(gamma * rank_score), rank_score being the rating percentile (best = 1,
// worst = 0, tied ratings share the mean percentile).
AgentId PickNextAgent(const LeagueView& view, Rng& rng, double gamma);

// Stand-in agent playing the configured fixed pure strategy.
Agent FixedOpponent(const ExperimentConfig& config, const GameSpec& game);

UnitProposal ComputeUnit(const ExperimentConfig& config, const GameSpec& game,
                         const LeagueView& view, AgentId agent, std::int64_t ticket);

struct CommitEvents {
  bool stale = false;
  std::optional<AgentId> exploited_loser;
  std::optional<AgentId> child;
};

// Serialized-writer step: applies the proposal's logits delta, records the
// match, updates ratings and behaviour descriptors, runs the QD bookkeeping
// and the PBT step, then advances the clock by one.
CommitEvents CommitUnit(LeagueState& state, const ExperimentConfig& config,
                        const GameSpec& game, const UnitProposal& proposal);

// One full scheduling unit for `agent` on the current state.
CommitEvents RunUnit(LeagueState& state, const ExperimentConfig& config,
                     const GameSpec& game, AgentId agent);

struct RunHooks {
  // Called under the writer lock every `checkpoint_every` units and once at
  // the end of the run.
  std::function<void(const LeagueState&)> on_checkpoint;
  std::function<void(const MatchResult&)> on_match;
};

struct RunResult {
  std::int64_t units = 0;
  std::int64_t stale_units = 0;
  std::vector<UnitProposal> commit_log;
};

// Executes `units` scheduling units over `config.runtime.workers` workers.
// Workers claim tickets, compute against snapshots and commit through one
// mutex; there is no other synchronisation. With one worker everything runs
// on the calling thread and the result is bit-reproducible.
RunResult RunLeague(LeagueState& state, const ExperimentConfig& config,
                    const GameSpec& game, std::int64_t units, const RunHooks& hooks = {});

// Re-applies a commit log to `initial` in order.
LeagueState Replay(LeagueState initial, const ExperimentConfig& config,
                   const GameSpec& game, const std::vector<UnitProposal>& log);

struct Metrics {
  LogicalTime at = 0;
  double rating_min = 0.0;
  double rating_max = 0.0;
  double rating_mean = 0.0;
  std::optional<double> exploitability;
  double nash_coverage = 0.0;
  double coverage = 0.0;
  double qd_score = 0.0;
  int hall_size = 0;
  std::int64_t unit_spread = 0;
};

Metrics ComputeMetrics(const LeagueState& state, const ExperimentConfig& config,
                       const GameSpec& game);

}  // namespace evoleague

#endif  // EVOLEAGUE_RUNTIME_H_
