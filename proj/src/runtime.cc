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

#include "evoleague/runtime.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "evoleague/error.h"
#include "evoleague/learner.h"
#include "evoleague/pbt.h"

namespace evoleague {
namespace {

constexpr double kSaturatedLogit = -1000.0;

void PushBounded(std::vector<BdVector>& window, BdVector bd, int cap) {
  window.push_back(std::move(bd));
  if (static_cast<int>(window.size()) > cap) {
    window.erase(window.begin(), window.end() - cap);
  }
}

void PushBounded(std::vector<double>& window, double x, int cap) {
  window.push_back(x);
  if (static_cast<int>(window.size()) > cap) {
    window.erase(window.begin(), window.end() - cap);
  }
}

void RepairAllCriteria(League& league, LogicalTime now) {
  const LeagueView view = league.Snapshot(now);
  for (int i = 0; i < league.capacity(); ++i) {
    NicheCriterion c = league.active_agent(i).criterion;
    if (!RepairCriterion(c, league.active_agent(i), view)) continue;
    const AgentId id = league.active_agent(i).id;
    league.Update(i, [&](Agent& a) {
      a.criterion = std::move(c);
      a.satisfaction_history.clear();
    });
    league.AddLineage({id, std::nullopt, "criterion_repair", now});
  }
}

FitnessFn SelectionFitness(const ExperimentConfig& config, const PayoffTable& table,
                           const LeagueView& view) {
  if (!config.qd.enabled) return RatingFitness;
  return [&config, &table, &view](const Agent& a) {
    return ShapedFitness(a, a.criterion, table, view, config.qd.beta_f,
                         config.qd.resolution);
  };
}

void QdStep(LeagueState& state, const ExperimentConfig& config, int index,
            LogicalTime now, std::int64_t ticket) {
  League& league = state.league;
  const QdConfig& qd = config.qd;
  if (qd.enabled) {
    const LeagueView view = league.Snapshot(now);
    const Agent& agent = league.active_agent(index);
    NicheCriterion criterion = agent.criterion;
    const bool repaired = RepairCriterion(criterion, agent, view);
    const double sat =
        CriterionSatisfaction(agent, criterion, state.table, view, qd.resolution);
    if (repaired) league.AddLineage({agent.id, std::nullopt, "criterion_repair", now});
    league.Update(index, [&](Agent& a) {
      if (repaired) a.satisfaction_history.clear();
      a.criterion = std::move(criterion);
      PushBounded(a.satisfaction_history, sat, qd.adapt_window);
    });
  }

  const AgentPtr& current = league.active()[index];
  if (current->bd.has_value()) {
    state.archive.Insert(current, *current->bd, current->rating);
  }

  if (qd.enabled && qd.adapt) {
    const LeagueView view = league.Snapshot(now);
    Rng rng = MakeRng(config.runtime.seed, static_cast<std::uint64_t>(ticket), Stream::kQd);
    const Agent& agent = league.active_agent(index);
    AdaptedCriterion adapted =
        AdaptCriterion(agent, view, state.table, state.archive, rng, qd);
    if (adapted.change != Adaptation::kNone) {
      league.AddLineage({agent.id, std::nullopt,
                         adapted.change == Adaptation::kEscalate ? "criterion_escalate"
                                                                 : "criterion_relax",
                         now});
      league.Update(index, [&](Agent& a) {
        a.criterion = std::move(adapted.criterion);
        a.satisfaction_history.clear();
      });
    }
  }
}

}  // namespace

LeagueState InitialState(const ExperimentConfig& config, const GameSpec& game) {
  Rng rng = MakeRng(config.runtime.seed, 0, Stream::kSpawn);
  LeagueState state{0, League::SpawnInitial(config.population, game.k(), rng), PayoffTable(),
                    Archive(game.feature_dim(), config.qd.resolution)};
  Rng qd_rng = MakeRng(config.runtime.seed, 1, Stream::kSpawn);
  const LeagueView view = state.league.Snapshot(0);
  for (int i = 0; i < state.league.capacity(); ++i) {
    NicheCriterion c = InitialCriterion(i, state.league.active_agent(i), view,
                                        state.archive, qd_rng, config.qd);
    state.league.Update(i, [&](Agent& a) { a.criterion = std::move(c); });
  }
  return state;
}

AgentId PickNextAgent(const LeagueView& view, Rng& rng, double gamma) {
  const auto& active = view.active();
  const int n = static_cast<int>(active.size());
  if (n == 0) Fail(ErrorKind::kState, "no active agents to schedule");
  if (n == 1) return active.front()->id;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return active[x]->rating < active[y]->rating; });
  std::vector<double> weights(n);
  for (int lo = 0; lo < n;) {
    int hi = lo;
    while (hi + 1 < n && active[order[hi + 1]]->rating == active[order[lo]]->rating) ++hi;
    const double score = 0.5 * (lo + hi) / (n - 1);
    for (int r = lo; r <= hi; ++r) weights[order[r]] = std::exp(gamma * score);
    lo = hi + 1;
  }
  return active[SampleIndex(weights, rng)]->id;
}

Agent FixedOpponent(const ExperimentConfig& config, const GameSpec& game) {
  Agent a;
  a.id = kFixedOpponentId;
  a.params.logits.assign(game.k(), kSaturatedLogit);
  a.params.logits.at(config.league.fixed_strategy) = 0.0;
  a.rating = config.population.initial_rating;
  a.active = false;
  return a;
}

UnitProposal ComputeUnit(const ExperimentConfig& config, const GameSpec& game,
                         const LeagueView& view, AgentId agent_id, std::int64_t ticket) {
  const Agent* agent = view.FindActive(agent_id);
  if (agent == nullptr) {
    Fail(ErrorKind::kState, "unit " + std::to_string(ticket) + ": agent " +
                                std::to_string(agent_id) + " is not active");
  }
  Rng rng = MakeRng(config.runtime.seed, static_cast<std::uint64_t>(ticket), Stream::kCompute);
  UnitProposal p;
  p.ticket = ticket;
  p.agent = agent_id;
  p.snapshot_time = view.time();
  p.logits_before = agent->params.logits;

  MixedStrategy mix;
  Agent fixed;
  const Agent* opponent = nullptr;
  if (config.league.opponent == OpponentMode::kFixed) {
    fixed = FixedOpponent(config, game);
    mix = Pure(game.k(), config.league.fixed_strategy);
    p.burst_opponents = {kFixedOpponentId};
    opponent = &fixed;
  } else {
    const OpponentSampler sampler(view, *agent, config.league.sigma_match);
    mix.probs.assign(game.k(), 0.0);
    const int n = config.learner.opponents_per_burst;
    for (int o = 0; o < n; ++o) {
      const AgentId id = sampler.Sample(rng);
      p.burst_opponents.push_back(id);
      const MixedStrategy q = PolicyToMixed(view.Find(id)->params);
      for (int s = 0; s < game.k(); ++s) mix.probs[s] += q.probs[s] / n;
    }
    opponent = view.Find(sampler.Sample(rng));
  }

  try {
    const Agent updated = LocalUpdate(*agent, mix, game, config.learner.steps_per_burst);
    p.logits_after = updated.params.logits;
    const std::uint64_t match_seed =
        DeriveSeed(config.runtime.seed, static_cast<std::uint64_t>(ticket), Stream::kMatch);
    Rng match_rng(match_seed);
    p.match = PlayMatch(game, updated, *opponent, config.league.episodes, match_rng,
                        config.league.exact_payoff);
    p.match.seed = match_seed;
    p.match.at = view.time();
  } catch (const LeagueError& e) {
    throw LeagueError(e.kind(), "unit " + std::to_string(ticket) + ": " + e.what());
  }
  p.rating_a = agent->rating;
  p.rating_b = opponent->rating;
  return p;
}

CommitEvents CommitUnit(LeagueState& state, const ExperimentConfig& config,
                        const GameSpec& /*game*/, const UnitProposal& p) {
  CommitEvents events;
  League& league = state.league;
  const LogicalTime now = state.clock;
  const int index = league.ActiveIndex(p.agent);
  events.stale = index < 0;

  if (!events.stale) {
    league.Update(index, [&](Agent& a) {
      if (a.params.logits == p.logits_before) {
        a.params.logits = p.logits_after;
      } else {
        // Another commit moved this agent since the snapshot: apply the
        // burst as a delta.
        for (std::size_t j = 0; j < a.params.logits.size(); ++j) {
          a.params.logits[j] += p.logits_after[j] - p.logits_before[j];
        }
      }
      ++a.units;
    });
  }

  MatchResult match = p.match;
  match.at = now;
  state.table.Record(match);
  const Agent* a = league.Find(match.a);
  const Agent* b = league.Find(match.b);
  const RatingDeltas d = EloDeltas(a != nullptr ? a->rating : p.rating_a,
                                   b != nullptr ? b->rating : p.rating_b,
                                   ScoreFromPayoff(match.payoff_a), config.league.elo);
  auto apply_side = [&](AgentId id, double delta, const BdVector& bd) {
    const int i = league.ActiveIndex(id);
    if (i < 0) return;
    league.Update(i, [&](Agent& x) {
      x.rating += delta;
      ++x.matches_played;
      PushBounded(x.recent_bds, bd, config.qd.bd_window);
      x.bd = ComputeBd(x.recent_bds, config.qd.bd_window);
    });
  };
  apply_side(match.a, d.a, match.bd_a);
  apply_side(match.b, d.b, match.bd_b);

  if (!events.stale) {
    QdStep(state, config, index, now, p.ticket);

    if (config.pbt.enabled && Ready(league.active_agent(index), now, config.pbt)) {
      Rng rng = MakeRng(config.runtime.seed, static_cast<std::uint64_t>(p.ticket),
                        Stream::kCommit);
      const LeagueView view = league.Snapshot(now);
      const TournamentOutcome t =
          TournamentSelect(view, rng, SelectionFitness(config, state.table, view));
      if (Ready(*view.FindActive(t.loser), now, config.pbt)) {
        const AgentId child = Exploit(league, t.winner, t.loser, now, rng);
        const int ci = league.ActiveIndex(child);
        const HyperparamVector hypers =
            Explore(league.active_agent(ci).hypers, config.pbt, config.population.bounds, rng);
        league.Update(ci, [&](Agent& x) { x.hypers = hypers; });
        RepairAllCriteria(league, now);
        events.exploited_loser = t.loser;
        events.child = child;
      }
    }
  }
  ++state.clock;
  return events;
}

CommitEvents RunUnit(LeagueState& state, const ExperimentConfig& config,
                     const GameSpec& game, AgentId agent) {
  const LeagueView view = state.league.Snapshot(state.clock);
  const UnitProposal p = ComputeUnit(config, game, view, agent, state.clock);
  return CommitUnit(state, config, game, p);
}

RunResult RunLeague(LeagueState& state, const ExperimentConfig& config,
                    const GameSpec& game, std::int64_t units, const RunHooks& hooks) {
  RunResult result;
  if (units <= 0) return result;
  const std::int64_t end = state.clock + units;
  const std::int64_t every = config.runtime.checkpoint_every;
  std::mutex mu;
  std::atomic<std::int64_t> next_ticket{state.clock};
  std::atomic<bool> stop{false};
  std::exception_ptr error;

  auto work = [&] {
    try {
      while (!stop.load()) {
        const std::int64_t ticket = next_ticket.fetch_add(1);
        if (ticket >= end) break;
        LeagueView view;
        {
          std::lock_guard<std::mutex> lock(mu);
          view = state.league.Snapshot(state.clock);
        }
        Rng rng = MakeRng(config.runtime.seed, static_cast<std::uint64_t>(ticket),
                          Stream::kSchedule);
        const AgentId agent = PickNextAgent(view, rng, config.runtime.preemption_gamma);
        UnitProposal p = ComputeUnit(config, game, view, agent, ticket);

        std::lock_guard<std::mutex> lock(mu);
        p.match.at = state.clock;
        const CommitEvents events = CommitUnit(state, config, game, p);
        ++result.units;
        result.stale_units += events.stale;
        if (hooks.on_match) hooks.on_match(p.match);
        result.commit_log.push_back(std::move(p));
        if (hooks.on_checkpoint && state.clock % every == 0) hooks.on_checkpoint(state);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };

  if (config.runtime.workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < config.runtime.workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  if (hooks.on_checkpoint && state.clock % every != 0) hooks.on_checkpoint(state);
  return result;
}

LeagueState Replay(LeagueState initial, const ExperimentConfig& config,
                   const GameSpec& game, const std::vector<UnitProposal>& log) {
  for (const auto& p : log) CommitUnit(initial, config, game, p);
  return initial;
}

Metrics ComputeMetrics(const LeagueState& state, const ExperimentConfig& config,
                       const GameSpec& game) {
  Metrics m;
  m.at = state.clock;
  const auto& active = state.league.active();
  m.rating_min = active.front()->rating;
  m.rating_max = active.front()->rating;
  std::int64_t units_min = active.front()->units;
  std::int64_t units_max = active.front()->units;
  double total = 0.0;
  for (const auto& a : active) {
    m.rating_min = std::min(m.rating_min, a->rating);
    m.rating_max = std::max(m.rating_max, a->rating);
    total += a->rating;
    units_min = std::min(units_min, a->units);
    units_max = std::max(units_max, a->units);
  }
  m.rating_mean = total / active.size();
  m.unit_spread = units_max - units_min;
  m.coverage = state.archive.Coverage();
  m.qd_score = state.archive.QdScore();
  m.hall_size = static_cast<int>(state.league.hall().size());
  try {
    const LeagueNash nash = ComputeLeagueNash(state.league.Snapshot(state.clock), state.table,
                                              game, config.nash);
    m.exploitability = nash.game_exploitability;
    m.nash_coverage = nash.game.coverage;
  } catch (const LeagueError& e) {
    if (e.kind() != ErrorKind::kState) throw;
  }
  return m;
}

}  // namespace evoleague
