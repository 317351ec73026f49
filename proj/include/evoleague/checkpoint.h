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

#ifndef EVOLEAGUE_CHECKPOINT_H_
#define EVOLEAGUE_CHECKPOINT_H_

#include <string>
#include <string_view>

#include "json.hpp"

#include "evoleague/config.h"
#include "evoleague/runtime.h"

namespace evoleague {

inline constexpr int kCheckpointSchemaVersion = 1;

struct Checkpoint {
  ExperimentConfig config;
  LeagueState state;
};

nlohmann::json AgentToJson(const Agent& agent);
Agent AgentFromJson(const nlohmann::json& j);
nlohmann::json CriterionToJson(const NicheCriterion& criterion);
NicheCriterion CriterionFromJson(const nlohmann::json& j);

// One match-log record: a, b, payoff_a, bd_a, bd_b, at, seed.
nlohmann::json MatchToJson(const MatchResult& match);
MatchResult MatchFromJson(const nlohmann::json& j);

nlohmann::json MetricsToJson(const Metrics& metrics);
// One record per occupied cell: cell coordinates, agent id, quality.
nlohmann::json ArchiveRecords(const Archive& archive, LogicalTime at);
nlohmann::json RatingsDocument(const LeagueState& state);
nlohmann::json PayoffMatrixDocument(const LeagueState& state);
nlohmann::json ProposalToJson(const UnitProposal& proposal);

// Canonical serialisation: a versioned JSON document with sorted keys. Doubles
// round-trip exactly, so save -> load -> save is byte-identical.
std::string SerializeCheckpoint(const ExperimentConfig& config, const LeagueState& state);
Checkpoint ParseCheckpoint(std::string_view text);

void SaveCheckpoint(const ExperimentConfig& config, const LeagueState& state,
                    const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

// Hex SHA-256 of the canonical serialisation without the invocation-only
// keys (output settings, run length, worker count, checkpoint cadence), so
// runs that reach the same state through different invocations agree.
std::string StateDigest(const ExperimentConfig& config, const LeagueState& state);
std::string Sha256Hex(std::string_view data);

}  // namespace evoleague

#endif  // EVOLEAGUE_CHECKPOINT_H_
