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

#ifndef EVOLEAGUE_GAMETHEORY_H_
#define EVOLEAGUE_GAMETHEORY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evoleague/games.h"
#include "evoleague/league.h"
#include "evoleague/population.h"

namespace evoleague {

// Dense row-major square matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}
  static SquareMatrix FromRows(const std::vector<std::vector<double>>& rows);
  static SquareMatrix FromGame(const GameSpec& game);

  int size() const { return n_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }
  SquareMatrix Scaled(double c) const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

// Throws kInvalidInput unless A[i][j] == -A[j][i] up to rounding.
void CheckAntisymmetric(const SquareMatrix& a);

struct BestResponseResult {
  int index = 0;
  double value = 0.0;
};

// argmax_i (A p)_i with ties broken towards the lowest index.
BestResponseResult BestResponse(const SquareMatrix& a, std::span<const double> p);

// max_i (A p)_i: how much a best responder gains against p. Nonnegative for
// antisymmetric A and zero exactly at a maximin strategy.
double Exploitability(const SquareMatrix& a, std::span<const double> p);

struct NashDistribution {
  std::vector<double> probs;
  double exploitability = 0.0;
  std::int64_t iterations_used = 0;
};

// Symmetric fictitious play. The first play best-responds to the uniform
// strategy; afterwards each play best-responds to the empirical average of
// all previous plays. Stops once the average's exploitability is <= tol.
NashDistribution FictitiousPlay(const SquareMatrix& a, std::int64_t max_iters,
                                double tol);

struct SupportSet {
  std::vector<AgentId> ids;
  // Set when nothing exceeded the threshold and the top-1 id was returned.
  bool below_threshold = false;
};

// Ids whose probability exceeds `theta`, in descending probability order.
SupportSet NashSupport(const NashDistribution& dist,
                       const std::vector<AgentId>& ids, double theta);

inline double DefaultSupportThreshold(int n) { return 1.0 / (4.0 * n); }

struct EmpiricalGame {
  std::vector<AgentId> ids;
  SquareMatrix payoff;
  // Fraction of unordered pairs backed by match data.
  double coverage = 1.0;
  // observed[i * n + j] is false where the entry was imputed.
  std::vector<bool> observed;
};

// Payoff matrix over `ids` from the table; missing pairs are 0 and flagged.
EmpiricalGame BuildEmpiricalGame(const PayoffTable& table,
                                 const std::vector<AgentId>& ids);

enum class NashPopulation { kAll, kActive };
// kEmpirical: table only, missing pairs imputed as 0, coverage-gated.
// kHybrid: table where observed, exact policy payoff for missing pairs.
// kExact: exact policy payoff for every pair.
enum class NashSource { kEmpirical, kHybrid, kExact };

std::string NashPopulationName(NashPopulation p);
NashPopulation ParseNashPopulation(const std::string& name);
std::string NashSourceName(NashSource s);
NashSource ParseNashSource(const std::string& name);

struct LeagueNashOptions {
  NashPopulation population = NashPopulation::kAll;
  NashSource source = NashSource::kHybrid;
  double min_coverage = 0.95;
  std::int64_t max_iters = 100000;
  double tol = 1e-3;
  // <= 0 selects 1 / (4n).
  double theta = 0.0;
};

struct LeagueNash {
  EmpiricalGame game;
  NashDistribution dist;
  SupportSet support;
  double theta = 0.0;
  // The league's Nash-weighted mixed strategy in the underlying game and its
  // exploitability against the game's pure strategies.
  MixedStrategy mixture;
  double game_exploitability = 0.0;
};

// Throws kState when the empirical source has coverage below
// `min_coverage`.
LeagueNash ComputeLeagueNash(const LeagueView& view, const PayoffTable& table,
                             const GameSpec& game, const LeagueNashOptions& options);

// max_i (M q)_i in the underlying game.
double GameExploitability(const GameSpec& game, const MixedStrategy& q);

}  // namespace evoleague

#endif  // EVOLEAGUE_GAMETHEORY_H_
