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

#include "evoleague/pbt.h"

#include <algorithm>

#include "evoleague/error.h"

namespace evoleague {

std::string SelectionName(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kBinaryTournament: return "binary_tournament";
  }
  return "unknown";
}

SelectionMethod ParseSelection(const std::string& name) {
  if (name == "binary_tournament") return SelectionMethod::kBinaryTournament;
  Fail(ErrorKind::kConfig, "unknown selection method '" + name + "'");
}

void ValidatePbtConfig(const PbtConfig& config) {
  if (config.ready_interval < 1) {
    Fail(ErrorKind::kConfig, "pbt.ready_interval must be >= 1");
  }
  if (config.min_matches < 0) Fail(ErrorKind::kConfig, "pbt.min_matches must be >= 0");
  if (!(config.perturb_factors.first > 0.0 && config.perturb_factors.second > 0.0)) {
    Fail(ErrorKind::kConfig, "pbt.perturb_factors must be positive");
  }
  if (!(config.resample_prob >= 0.0 && config.resample_prob <= 1.0)) {
    Fail(ErrorKind::kConfig, "pbt.resample_prob must lie in [0, 1]");
  }
}

bool Ready(const Agent& agent, LogicalTime now, const PbtConfig& config) {
  return now - agent.last_exploit_at >= config.ready_interval &&
         agent.matches_played - agent.matches_at_last_exploit >= config.min_matches;
}

double RatingFitness(const Agent& agent) { return agent.rating; }

TournamentOutcome TournamentSelect(const LeagueView& view, Rng& rng,
                                   const FitnessFn& fitness) {
  const auto& active = view.active();
  const int n = static_cast<int>(active.size());
  if (n < 2) Fail(ErrorKind::kState, "tournament selection needs >= 2 active agents");
  std::uniform_int_distribution<int> first(0, n - 1);
  std::uniform_int_distribution<int> second(0, n - 2);
  const int i = first(rng);
  int j = second(rng);
  if (j >= i) ++j;
  const Agent& a = *active[i];
  const Agent& b = *active[j];
  const double fa = fitness(a);
  const double fb = fitness(b);
  bool a_wins;
  if (fa != fb) {
    a_wins = fa > fb;
  } else if (a.matches_played != b.matches_played) {
    a_wins = a.matches_played < b.matches_played;
  } else {
    a_wins = a.id < b.id;
  }
  return a_wins ? TournamentOutcome{a.id, b.id} : TournamentOutcome{b.id, a.id};
}

AgentId Exploit(League& league, AgentId winner, AgentId loser, LogicalTime now,
                Rng& rng) {
  if (winner == loser) {
    Fail(ErrorKind::kInvalidInput, "exploit needs distinct winner and loser");
  }
  const int wi = league.ActiveIndex(winner);
  const int li = league.ActiveIndex(loser);
  if (wi < 0 || li < 0) {
    Fail(ErrorKind::kNotFound, "exploit on inactive agent " +
                                   std::to_string(wi < 0 ? winner : loser));
  }
  const Agent& w = league.active_agent(wi);
  Agent child = league.active_agent(li);
  league.RetireToHallOfFame(li, now, rng);

  child.id = league.AllocateId();
  child.params = w.params;
  child.rating = w.rating;
  child.hypers = w.hypers;
  child.bd = w.bd;
  child.recent_bds = w.recent_bds;
  child.satisfaction_history.clear();
  child.born_at = now;
  child.last_exploit_at = now;
  child.matches_played = 0;
  child.matches_at_last_exploit = 0;
  child.units = 0;
  child.active = true;
  league.AddLineage({child.id, winner, "exploit", now});
  const AgentId id = child.id;
  league.Replace(li, std::move(child));
  return id;
}

HyperparamVector Explore(const HyperparamVector& hypers, const PbtConfig& config,
                         const HyperparamBounds& bounds, Rng& rng) {
  auto mutate = [&](double x, const Bounds& b) {
    if (Uniform01(rng) < config.resample_prob) return LogUniform(rng, b.lo, b.hi);
    const double factor = Uniform01(rng) < 0.5 ? config.perturb_factors.first
                                               : config.perturb_factors.second;
    return std::clamp(x * factor, b.lo, b.hi);
  };
  HyperparamVector out;
  out.learning_rate = mutate(hypers.learning_rate, bounds.learning_rate);
  out.entropy_coeff = mutate(hypers.entropy_coeff, bounds.entropy_coeff);
  return out;
}

}  // namespace evoleague
