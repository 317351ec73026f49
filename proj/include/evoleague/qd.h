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

#ifndef EVOLEAGUE_QD_H_
#define EVOLEAGUE_QD_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoleague/criterion.h"
#include "evoleague/league.h"
#include "evoleague/population.h"

namespace evoleague {

struct QdConfig {
  // Off: selection uses raw ratings and criteria are neither checked nor
  // adapted. The archive is still maintained as a diversity metric.
  bool enabled = true;
  int resolution = 10;
  double beta_f = 50.0;
  double s_hi = 0.8;
  double s_lo = 0.1;
  // Consecutive satisfaction checks required before adapting (W_a).
  int adapt_window = 5;
  // Recent matches averaged into an agent's descriptor (W).
  int bd_window = 8;
  bool adapt = true;
  double beat_margin = 0.1;
  int target_radius = 1;
};

void ValidateQdConfig(const QdConfig& config);

// Mean of the last `window` per-match descriptors; nullopt without data.
std::optional<BdVector> ComputeBd(std::span<const BdVector> per_match, int window);

// Descriptor of `agent_id` from its most recent `window` match results.
std::optional<BdVector> ComputeBd(std::span<const MatchResult> results,
                                  AgentId agent_id, int window);

// Per-dimension bin floor(bd_i * R), clamped to [0, R-1].
Cell Discretize(const BdVector& bd, int resolution);

// Number of cells of the R^d grid that Discretize can produce from a point of
// the simplex: those with R - d < sum(cell) <= R.
std::int64_t ReachableCellCount(int dim, int resolution);
bool IsReachable(const Cell& cell, int resolution);

// Grid archive over the behaviour simplex keeping the best agent per cell.
class Archive {
 public:
  struct Entry {
    AgentPtr agent;
    double quality = 0.0;
  };

  Archive(int dim, int resolution);

  // Inserts iff the cell is empty or `quality` strictly beats the incumbent.
  bool Insert(const Agent& agent, const BdVector& bd, double quality);
  bool Insert(AgentPtr agent, const BdVector& bd, double quality);

  int dim() const { return dim_; }
  int resolution() const { return resolution_; }
  const std::map<Cell, Entry>& cells() const { return cells_; }
  bool Occupied(const Cell& cell) const { return cells_.count(cell) > 0; }

  double Coverage() const;
  double QdScore() const;

  // Uniformly random reachable cell that is not occupied, if any.
  std::optional<Cell> SampleUnoccupied(Rng& rng) const;
  Cell SampleReachable(Rng& rng) const;
  // Uniform among the unoccupied reachable cells at the smallest Chebyshev
  // distance >= `min_distance` from `from`.
  std::optional<Cell> SampleUnoccupiedNear(const Cell& from, int min_distance,
                                           Rng& rng) const;

  void RestoreEntry(Cell cell, AgentPtr agent, double quality);

 private:
  const std::vector<Cell>& ReachableCells() const;

  int dim_;
  int resolution_;
  std::int64_t reachable_;
  std::map<Cell, Entry> cells_;
  mutable std::vector<Cell> reachable_cells_;
};

// Degree in [0, 1] to which `agent` meets `criterion` given the match table
// and the live league view. Throws kNotFound for a target id absent from the
// view.
double CriterionSatisfaction(const Agent& agent, const NicheCriterion& criterion,
                             const PayoffTable& table, const LeagueView& view,
                             int resolution);

// rating + beta_f * satisfaction.
double ShapedFitness(const Agent& agent, const NicheCriterion& criterion,
                     const PayoffTable& table, const LeagueView& view,
                     double beta_f, int resolution);

enum class Adaptation { kNone, kEscalate, kRelax };

struct AdaptedCriterion {
  NicheCriterion criterion;
  Adaptation change = Adaptation::kNone;
};

// Hysteresis on the agent's satisfaction history: escalate after
// `adapt_window` checks at or above s_hi, relax after `adapt_window` checks
// at or below s_lo. New targets are always drawn from the live view.
AdaptedCriterion AdaptCriterion(const Agent& agent, const LeagueView& view,
                                const PayoffTable& table, const Archive& archive,
                                Rng& rng, const QdConfig& config);

// Starting niche for active slot `slot`: slots cycle through a BD target, a
// beat-agent criterion and an even mixture of the two.
NicheCriterion InitialCriterion(int slot, const Agent& agent, const LeagueView& view,
                                const Archive& archive, Rng& rng,
                                const QdConfig& config);

// Replaces targets missing from `view` (evicted or retired-and-evicted
// agents) by the nearest-rated live candidate. Returns true if anything
// changed.
bool RepairCriterion(NicheCriterion& criterion, const Agent& agent,
                     const LeagueView& view);

}  // namespace evoleague

#endif  // EVOLEAGUE_QD_H_
