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

#include "evoleague/learner.h"

#include <cmath>
#include <sstream>

#include "evoleague/error.h"

namespace evoleague {

double Entropy(const MixedStrategy& p) {
  double h = 0.0;
  for (double x : p.probs) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

ShapedObjective EvaluateShapedObjective(const GameSpec& game,
                                        const PolicyParams& params,
                                        const MixedStrategy& opponent,
                                        double entropy_coeff) {
  const MixedStrategy p = PolicyToMixed(params);
  ShapedObjective out;
  out.base = MixedPayoff(game, p, opponent);
  out.entropy_bonus = entropy_coeff * Entropy(p);
  out.total = out.base + out.entropy_bonus;
  return out;
}

std::vector<double> ShapedGradient(const GameSpec& game,
                                   const PolicyParams& params,
                                   const MixedStrategy& opponent,
                                   double entropy_coeff) {
  std::vector<double> grad = PayoffGradient(game, params, opponent);
  if (entropy_coeff == 0.0) return grad;
  const MixedStrategy p = PolicyToMixed(params);
  const double h = Entropy(p);
  // dH/dz_j = -p_j (ln p_j + H)
  for (int j = 0; j < game.k(); ++j) {
    const double pj = p.probs[j];
    if (pj > 0.0) grad[j] -= entropy_coeff * pj * (std::log(pj) + h);
  }
  return grad;
}

Agent LocalUpdate(Agent agent, const MixedStrategy& opponent_mix,
                  const GameSpec& game, int steps) {
  if (steps < 1) Fail(ErrorKind::kInvalidInput, "local update needs steps >= 1");
  ValidateSimplex(opponent_mix.probs);
  const double lr = agent.hypers.learning_rate;
  const double beta = agent.hypers.entropy_coeff;
  for (int s = 0; s < steps; ++s) {
    const std::vector<double> grad =
        ShapedGradient(game, agent.params, opponent_mix, beta);
    for (int j = 0; j < game.k(); ++j) {
      const double next = agent.params.logits[j] + lr * grad[j];
      if (!std::isfinite(grad[j]) || !std::isfinite(next)) {
        std::ostringstream msg;
        msg << "non-finite " << (std::isfinite(grad[j]) ? "logit" : "gradient")
            << " for agent " << agent.id << " at step " << s << ", coordinate " << j
            << " (learning_rate " << lr << ", entropy_coeff " << beta << ")";
        Fail(ErrorKind::kNumeric, msg.str());
      }
      agent.params.logits[j] = next;
    }
  }
  return agent;
}

}  // namespace evoleague
