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

#ifndef EVOLEAGUE_PBT_H_
#define EVOLEAGUE_PBT_H_

#include <functional>
#include <string>
#include <utility>

#include "evoleague/population.h"

namespace evoleague {

enum class SelectionMethod { kBinaryTournament };

std::string SelectionName(SelectionMethod method);
SelectionMethod ParseSelection(const std::string& name);

struct PbtConfig {
  // When false, neither exploit nor explore ever runs.
  bool enabled = true;
  LogicalTime ready_interval = 64;
  std::int64_t min_matches = 8;
  std::pair<double, double> perturb_factors{0.8, 1.25};
  double resample_prob = 0.25;
  SelectionMethod selection = SelectionMethod::kBinaryTournament;
};

void ValidatePbtConfig(const PbtConfig& config);

// True once the agent has waited `ready_interval` since its last exploit and
// played at least `min_matches` matches in that time.
bool Ready(const Agent& agent, LogicalTime now, const PbtConfig& config);

struct TournamentOutcome {
  AgentId winner = 0;
  AgentId loser = 0;
};

using FitnessFn = std::function<double(const Agent&)>;

double RatingFitness(const Agent& agent);

// Binary tournament over the active agents of `view`: two distinct agents are
// drawn uniformly; the fitter one wins. Ties go to the agent with fewer
// matches played, then to the lower id.
TournamentOutcome TournamentSelect(const LeagueView& view, Rng& rng,
                                   const FitnessFn& fitness = RatingFitness);

// Overwrites the loser with a copy of the winner. The loser's pre-overwrite
// self retires to the hall of fame under its own id and the slot receives a
// new individual (fresh id, born now) carrying the winner's current logits,
// rating, hyperparameters and behaviour history. Returns the new id.
AgentId Exploit(League& league, AgentId winner, AgentId loser, LogicalTime now,
                Rng& rng);

// Per hyperparameter: resample log-uniformly with probability
// `resample_prob`, otherwise scale by one of the two perturbation factors
// chosen uniformly; the result is clamped into bounds.
HyperparamVector Explore(const HyperparamVector& hypers, const PbtConfig& config,
                         const HyperparamBounds& bounds, Rng& rng);

}  // namespace evoleague

#endif  // EVOLEAGUE_PBT_H_
