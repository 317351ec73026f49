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

#ifndef EVOLEAGUE_CONFIG_H_
#define EVOLEAGUE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "evoleague/gametheory.h"
#include "evoleague/games.h"
#include "evoleague/league.h"
#include "evoleague/pbt.h"
#include "evoleague/population.h"
#include "evoleague/qd.h"

namespace evoleague {

struct GameConfig {
  std::string name = "rps";  // rps | blotto | random
  int k = 3;
  int soldiers = 3;
  int fields = 3;
  int blotto_cap = kDefaultBlottoCap;
  std::uint64_t seed = 42;
};

struct LearnerConfig {
  int steps_per_burst = 32;
  int opponents_per_burst = 4;
};

enum class OpponentMode {
  // Opponents are drawn from the league by rating similarity.
  kLeague,
  // Every burst and match is played against one fixed pure strategy.
  kFixed,
};

struct LeagueConfig {
  EloConfig elo;
  double sigma_match = 200.0;
  int episodes = 32;
  bool exact_payoff = false;
  OpponentMode opponent = OpponentMode::kLeague;
  int fixed_strategy = 0;
};

struct RuntimeConfig {
  int workers = 1;
  std::int64_t total_units = 10000;
  std::uint64_t seed = 1;
  std::int64_t checkpoint_every = 1000;
  double preemption_gamma = 1.0;
};

struct OutputConfig {
  std::string dir = "out";
  bool match_log = true;
};

struct ExperimentConfig {
  GameConfig game;
  PopulationConfig population;
  PbtConfig pbt;
  LearnerConfig learner;
  LeagueConfig league;
  QdConfig qd;
  LeagueNashOptions nash;
  RuntimeConfig runtime;
  OutputConfig output;
};

// Parses the flat `dotted.key = value` format. Blank lines and `#` comments
// are ignored. Unknown keys, duplicate keys, type mismatches and out-of-range
// values raise kConfig naming the key. Omitted keys keep their defaults.
ExperimentConfig ParseConfig(std::string_view text);

// Applies one `key = value` assignment with the same validation as parsing.
void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

// Every key with its current value, in canonical order.
std::map<std::string, std::string> ConfigValues(const ExperimentConfig& config);
std::string FormatConfig(const ExperimentConfig& config);
std::vector<std::string> ConfigKeys();

// Cross-field checks (bounds ordering, thresholds, game parameters).
void ValidateConfig(const ExperimentConfig& config);

GameSpec MakeGame(const GameConfig& config);

}  // namespace evoleague

#endif  // EVOLEAGUE_CONFIG_H_
