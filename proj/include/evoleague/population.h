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

#ifndef EVOLEAGUE_POPULATION_H_
#define EVOLEAGUE_POPULATION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "evoleague/criterion.h"
#include "evoleague/games.h"
#include "evoleague/random.h"

namespace evoleague {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
  bool Contains(double x) const { return x >= lo && x <= hi; }
};

struct HyperparamBounds {
  Bounds learning_rate{1e-4, 1.0};
  Bounds entropy_coeff{1e-4, 0.1};
};

// Evolved per-agent hyperparameters. `entropy_coeff` weights the entropy
// bonus in the learner's shaped objective, i.e. it is the evolved part of the
// reward.
struct HyperparamVector {
  double learning_rate = 0.01;
  double entropy_coeff = 0.0;

  bool operator==(const HyperparamVector&) const = default;
};

bool WithinBounds(const HyperparamVector& h, const HyperparamBounds& b);

struct Agent {
  AgentId id = 0;
  PolicyParams params;
  HyperparamVector hypers;
  double rating = 1000.0;
  std::optional<BdVector> bd;
  NicheCriterion criterion;
  LogicalTime born_at = 0;
  std::int64_t matches_played = 0;
  LogicalTime last_exploit_at = 0;
  std::int64_t matches_at_last_exploit = 0;
  bool active = true;
  // Scheduling units in which this agent was the focal learner.
  std::int64_t units = 0;
  // Per-match behaviour descriptors, oldest first, bounded by the BD window.
  std::vector<BdVector> recent_bds;
  // Criterion satisfaction at the most recent checks, oldest first.
  std::vector<double> satisfaction_history;
};

using AgentPtr = std::shared_ptr<const Agent>;

struct LineageRecord {
  AgentId child = 0;
  std::optional<AgentId> parent;
  std::string event;
  LogicalTime time = 0;

  bool operator==(const LineageRecord&) const = default;
};

struct PopulationConfig {
  int size = 8;
  double sigma0 = 0.5;
  double initial_rating = 1000.0;
  int hall_cap = 256;
  HyperparamBounds bounds;
};

// Point-in-time, read-only view of the league. Holding a view never blocks
// writers and later writes are never visible through it.
class LeagueView {
 public:
  LeagueView() = default;
  LeagueView(std::vector<AgentPtr> active,
             std::shared_ptr<const std::vector<AgentPtr>> hall,
             LogicalTime time);

  const std::vector<AgentPtr>& active() const { return active_; }
  const std::vector<AgentPtr>& hall() const { return *hall_; }
  LogicalTime time() const { return time_; }
  int size() const { return static_cast<int>(active_.size() + hall_->size()); }

  // Active agents first, then the hall of fame.
  const Agent* Find(AgentId id) const;
  const Agent* FindActive(AgentId id) const;

 private:
  std::vector<AgentPtr> active_;
  std::shared_ptr<const std::vector<AgentPtr>> hall_ =
      std::make_shared<const std::vector<AgentPtr>>();
  LogicalTime time_ = 0;
};

// Active population of fixed size plus the append-only hall of fame of frozen
// snapshots. Agents are shared immutably with views; every mutation replaces
// the stored pointer with a fresh copy.
class League {
 public:
  League(int capacity, int hall_cap);

  static League SpawnInitial(const PopulationConfig& config, int k, Rng& rng);

  int capacity() const { return capacity_; }
  int hall_cap() const { return hall_cap_; }
  std::int64_t hall_seen() const { return hall_seen_; }
  AgentId next_id() const { return next_id_; }

  const std::vector<AgentPtr>& active() const { return active_; }
  const std::vector<AgentPtr>& hall() const { return *hall_; }
  const std::vector<LineageRecord>& lineage() const { return lineage_; }

  const Agent& active_agent(int index) const { return *active_[index]; }
  int ActiveIndex(AgentId id) const;  // -1 when not active
  const Agent* Find(AgentId id) const;
  bool IsFrozen(AgentId id) const;

  // Copy-on-write mutation of an active agent.
  template <typename Fn>
  void Update(int index, Fn&& fn) {
    auto copy = std::make_shared<Agent>(*active_.at(index));
    fn(*copy);
    active_[index] = std::move(copy);
  }
  void Replace(int index, Agent agent);

  AgentId AllocateId() { return next_id_++; }
  void AddLineage(LineageRecord record) { lineage_.push_back(std::move(record)); }

  // Appends an immutable copy (fresh id, current rating) of an active agent to
  // the hall of fame and returns the snapshot id. Beyond the cap, entries are
  // kept by reservoir sampling, so the hall never shrinks.
  AgentId FreezeToHallOfFame(AgentId agent_id, LogicalTime time, Rng& rng);

  // Moves the current self of active slot `index` into the hall of fame under
  // its own id. Used when the slot is about to be overwritten.
  void RetireToHallOfFame(int index, LogicalTime time, Rng& rng);

  LeagueView Snapshot(LogicalTime time) const;

  // Restores every field; used by checkpoint loading.
  void Restore(std::vector<Agent> active, std::vector<Agent> hall,
               std::vector<LineageRecord> lineage, AgentId next_id,
               std::int64_t hall_seen);

 private:
  void InsertHall(Agent frozen, Rng& rng);
  void RebuildHallIndex();

  int capacity_;
  int hall_cap_;
  std::int64_t hall_seen_ = 0;
  AgentId next_id_ = 1;
  std::vector<AgentPtr> active_;
  std::shared_ptr<const std::vector<AgentPtr>> hall_ =
      std::make_shared<const std::vector<AgentPtr>>();
  std::unordered_map<AgentId, int> hall_index_;
  std::vector<LineageRecord> lineage_;
};

}  // namespace evoleague

#endif  // EVOLEAGUE_POPULATION_H_
