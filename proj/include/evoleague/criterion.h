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

#ifndef EVOLEAGUE_CRITERION_H_
#define EVOLEAGUE_CRITERION_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace evoleague {

using AgentId = std::int64_t;
using LogicalTime = std::int64_t;

// Behaviour descriptor: a point on the simplex of the game's feature space.
using BdVector = std::vector<double>;
using Cell = std::vector<int>;

// Archive cells within Chebyshev distance `radius` of `center`.
struct CellRegion {
  Cell center;
  int radius = 0;

  bool Contains(const Cell& cell) const;
  bool operator==(const CellRegion&) const = default;
};

struct BdTarget {
  CellRegion region;
  bool operator==(const BdTarget&) const = default;
};

struct BeatAgent {
  AgentId target = 0;
  double margin = 0.0;
  bool operator==(const BeatAgent&) const = default;
};

struct BeatSet {
  std::vector<AgentId> targets;
  double required_fraction = 1.0;
  bool operator==(const BeatSet&) const = default;
};

struct NicheCriterion;

struct Mixture {
  std::vector<NicheCriterion> parts;
  std::vector<double> weights;
};

// Per-agent niche objective used to shape selection fitness.
struct NicheCriterion {
  std::variant<BdTarget, BeatAgent, BeatSet, Mixture> value;
};

bool operator==(const Mixture& a, const Mixture& b);
bool operator==(const NicheCriterion& a, const NicheCriterion& b);

// Throws kInvalidInput on an empty BeatSet, an empty or unnormalised
// Mixture, or out-of-range parameters.
void ValidateCriterion(const NicheCriterion& criterion);

// Every agent id the criterion refers to, in traversal order.
std::vector<AgentId> ReferencedTargets(const NicheCriterion& criterion);

std::string CriterionKind(const NicheCriterion& criterion);

}  // namespace evoleague

#endif  // EVOLEAGUE_CRITERION_H_
