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

#include "evoleague/population.h"

#include <utility>

#include "evoleague/error.h"

namespace evoleague {

bool WithinBounds(const HyperparamVector& h, const HyperparamBounds& b) {
  return h.learning_rate > 0.0 && b.learning_rate.Contains(h.learning_rate) &&
         b.entropy_coeff.Contains(h.entropy_coeff);
}

LeagueView::LeagueView(std::vector<AgentPtr> active,
                       std::shared_ptr<const std::vector<AgentPtr>> hall,
                       LogicalTime time)
    : active_(std::move(active)), hall_(std::move(hall)), time_(time) {}

const Agent* LeagueView::FindActive(AgentId id) const {
  for (const auto& a : active_) {
    if (a->id == id) return a.get();
  }
  return nullptr;
}

const Agent* LeagueView::Find(AgentId id) const {
  if (const Agent* a = FindActive(id)) return a;
  for (const auto& a : *hall_) {
    if (a->id == id) return a.get();
  }
  return nullptr;
}

League::League(int capacity, int hall_cap)
    : capacity_(capacity), hall_cap_(hall_cap) {
  if (capacity < 2) {
    Fail(ErrorKind::kConfig, "population.N must be >= 2, got " + std::to_string(capacity));
  }
  if (hall_cap < 1) Fail(ErrorKind::kConfig, "population.hall_cap must be >= 1");
}

League League::SpawnInitial(const PopulationConfig& config, int k, Rng& rng) {
  League league(config.size, config.hall_cap);
  const auto& b = config.bounds;
  for (int n = 0; n < config.size; ++n) {
    Agent a;
    a.id = league.AllocateId();
    a.params.logits.resize(k);
    for (double& z : a.params.logits) z = config.sigma0 * StandardNormal(rng);
    a.hypers.learning_rate = LogUniform(rng, b.learning_rate.lo, b.learning_rate.hi);
    a.hypers.entropy_coeff = LogUniform(rng, b.entropy_coeff.lo, b.entropy_coeff.hi);
    a.rating = config.initial_rating;
    a.active = true;
    league.lineage_.push_back({a.id, std::nullopt, "spawn", 0});
    league.active_.push_back(std::make_shared<const Agent>(std::move(a)));
  }
  return league;
}

int League::ActiveIndex(AgentId id) const {
  for (int i = 0; i < static_cast<int>(active_.size()); ++i) {
    if (active_[i]->id == id) return i;
  }
  return -1;
}

const Agent* League::Find(AgentId id) const {
  const int index = ActiveIndex(id);
  if (index >= 0) return active_[index].get();
  auto it = hall_index_.find(id);
  return it == hall_index_.end() ? nullptr : (*hall_)[it->second].get();
}

bool League::IsFrozen(AgentId id) const { return hall_index_.count(id) > 0; }

void League::Replace(int index, Agent agent) {
  active_.at(index) = std::make_shared<const Agent>(std::move(agent));
}

void League::InsertHall(Agent frozen, Rng& rng) {
  frozen.active = false;
  ++hall_seen_;
  auto next = std::make_shared<std::vector<AgentPtr>>(*hall_);
  auto ptr = std::make_shared<const Agent>(std::move(frozen));
  if (static_cast<int>(next->size()) < hall_cap_) {
    next->push_back(std::move(ptr));
  } else {
    std::uniform_int_distribution<std::int64_t> pick(0, hall_seen_ - 1);
    const std::int64_t slot = pick(rng);
    if (slot >= hall_cap_) return;
    (*next)[slot] = std::move(ptr);
  }
  hall_ = std::move(next);
  RebuildHallIndex();
}

void League::RebuildHallIndex() {
  hall_index_.clear();
  for (int i = 0; i < static_cast<int>(hall_->size()); ++i) {
    hall_index_[(*hall_)[i]->id] = i;
  }
}

AgentId League::FreezeToHallOfFame(AgentId agent_id, LogicalTime time, Rng& rng) {
  const int index = ActiveIndex(agent_id);
  if (index < 0) {
    Fail(ErrorKind::kNotFound, "no active agent with id " + std::to_string(agent_id));
  }
  Agent frozen = *active_[index];
  frozen.id = AllocateId();
  lineage_.push_back({frozen.id, agent_id, "freeze", time});
  const AgentId snapshot_id = frozen.id;
  InsertHall(std::move(frozen), rng);
  return snapshot_id;
}

void League::RetireToHallOfFame(int index, LogicalTime time, Rng& rng) {
  Agent frozen = *active_.at(index);
  lineage_.push_back({frozen.id, std::nullopt, "retire", time});
  InsertHall(std::move(frozen), rng);
}

LeagueView League::Snapshot(LogicalTime time) const {
  return LeagueView(active_, hall_, time);
}

void League::Restore(std::vector<Agent> active, std::vector<Agent> hall,
                     std::vector<LineageRecord> lineage, AgentId next_id,
                     std::int64_t hall_seen) {
  if (static_cast<int>(active.size()) != capacity_) {
    Fail(ErrorKind::kParse, "checkpoint active population does not match capacity");
  }
  active_.clear();
  for (auto& a : active) active_.push_back(std::make_shared<const Agent>(std::move(a)));
  auto h = std::make_shared<std::vector<AgentPtr>>();
  for (auto& a : hall) h->push_back(std::make_shared<const Agent>(std::move(a)));
  hall_ = std::move(h);
  lineage_ = std::move(lineage);
  next_id_ = next_id;
  hall_seen_ = hall_seen;
  RebuildHallIndex();
}

}  // namespace evoleague
