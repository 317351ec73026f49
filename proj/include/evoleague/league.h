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

#ifndef EVOLEAGUE_LEAGUE_H_
#define EVOLEAGUE_LEAGUE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "evoleague/games.h"
#include "evoleague/population.h"

namespace evoleague {

// Logistic Elo with base 10 and a 400-point scale unless configured.
struct EloConfig {
  double k_factor = 32.0;
  double scale = 400.0;
  double base = 10.0;
};

double ExpectedScore(double rating_a, double rating_b, const EloConfig& elo = {});

struct RatingDeltas {
  double a = 0.0;
  double b = 0.0;
};

// Elo deltas for a result where `score_a` in [0, 1] is a's score.
RatingDeltas EloDeltas(double rating_a, double rating_b, double score_a,
                       const EloConfig& elo = {});

inline double ScoreFromPayoff(double payoff_a) { return 0.5 * (payoff_a + 1.0); }

// Ratings keyed by agent id. Frozen members are benchmarks: games against
// them move only the other side's rating. The amount a frozen opponent would
// have absorbed is accumulated in `frozen_charge()`, so that the sum of
// ratings plus the charge is conserved.
class RatingBook {
 public:
  explicit RatingBook(EloConfig elo = {}) : elo_(elo) {}

  void Set(AgentId id, double rating, bool frozen = false);
  double rating(AgentId id) const;
  bool frozen(AgentId id) const { return frozen_.count(id) > 0; }
  double frozen_charge() const { return frozen_charge_; }
  double Total() const;
  const EloConfig& elo() const { return elo_; }

  void Update(AgentId a, AgentId b, double score_a);

 private:
  EloConfig elo_;
  std::map<AgentId, double> ratings_;
  std::set<AgentId> frozen_;
  double frozen_charge_ = 0.0;
};

// Applies an Elo update to the league's stored ratings. Hall-of-fame members
// keep their frozen rating. Returns the deltas that were applied (zero for a
// frozen side). Throws kNotFound for ids outside the league.
RatingDeltas UpdateLeagueRatings(League& league, AgentId a, AgentId b,
                                 double score_a, const EloConfig& elo);

// Draws opponents for one agent with probability proportional to
// exp(-(r_agent - r_j)^2 / (2 sigma^2)) over the active agents other than the
// agent itself plus every hall-of-fame snapshot.
class OpponentSampler {
 public:
  OpponentSampler(const LeagueView& view, const Agent& agent, double sigma);

  AgentId Sample(Rng& rng) const;
  const std::vector<AgentId>& candidates() const { return candidates_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<AgentId> candidates_;
  std::vector<double> weights_;
};

AgentId SampleOpponent(const LeagueView& view, const Agent& agent, double sigma,
                       Rng& rng);

struct MatchResult {
  AgentId a = 0;
  AgentId b = 0;
  double payoff_a = 0.0;
  BdVector bd_a;
  BdVector bd_b;
  LogicalTime at = 0;
  std::uint64_t seed = 0;

  bool operator==(const MatchResult&) const = default;
};

// Plays `episodes` independent one-shot games, each side sampling a pure
// strategy from its policy. In exact mode the bilinear payoff and expected
// features are returned instead. Does not touch agent bookkeeping.
MatchResult PlayMatch(const GameSpec& game, const Agent& a, const Agent& b,
                      int episodes, Rng& rng, bool exact = false);

// Exact expected behaviour descriptor of a policy.
BdVector ExpectedBd(const GameSpec& game, const MixedStrategy& p);

// Accumulated payoffs per ordered pair.
class PayoffTable {
 public:
  struct Entry {
    double sum = 0.0;
    std::int64_t count = 0;
    bool operator==(const Entry&) const = default;
  };
  using Key = std::pair<AgentId, AgentId>;

  void Record(const MatchResult& result);
  void Add(AgentId a, AgentId b, double sum, std::int64_t count);

  // Antisymmetrised mean (sum_ij - sum_ji) / (count_ij + count_ji); 0 on the
  // diagonal; nullopt when the pair has never met.
  std::optional<double> EmpiricalPayoff(AgentId i, AgentId j) const;
  std::int64_t Count(AgentId i, AgentId j) const;

  const std::map<Key, Entry>& entries() const { return entries_; }
  bool operator==(const PayoffTable&) const = default;

 private:
  std::map<Key, Entry> entries_;
};

}  // namespace evoleague

#endif  // EVOLEAGUE_LEAGUE_H_
