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

#ifndef EVOLEAGUE_LEARNER_H_
#define EVOLEAGUE_LEARNER_H_

#include <vector>

#include "evoleague/games.h"
#include "evoleague/population.h"

namespace evoleague {

struct ShapedObjective {
  double base = 0.0;
  double entropy_bonus = 0.0;
  double total = 0.0;
};

// Shannon entropy in nats with 0 ln 0 = 0.
double Entropy(const MixedStrategy& p);

// Expected payoff against `opponent` plus entropy_coeff * H(softmax(logits)).
ShapedObjective EvaluateShapedObjective(const GameSpec& game,
                                        const PolicyParams& params,
                                        const MixedStrategy& opponent,
                                        double entropy_coeff);

std::vector<double> ShapedGradient(const GameSpec& game,
                                   const PolicyParams& params,
                                   const MixedStrategy& opponent,
                                   double entropy_coeff);

// Runs `steps` iterations of plain gradient ascent on the shaped objective
// using the agent's own learning rate and entropy coefficient. Only the
// logits change.
Agent LocalUpdate(Agent agent, const MixedStrategy& opponent_mix,
                  const GameSpec& game, int steps);

}  // namespace evoleague

#endif  // EVOLEAGUE_LEARNER_H_
