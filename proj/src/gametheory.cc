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

#include "evoleague/gametheory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "evoleague/error.h"

namespace evoleague {

SquareMatrix SquareMatrix::FromRows(const std::vector<std::vector<double>>& rows) {
  SquareMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.n_; ++i) {
    if (static_cast<int>(rows[i].size()) != m.n_) {
      Fail(ErrorKind::kInvalidInput, "matrix must be square");
    }
    for (int j = 0; j < m.n_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

SquareMatrix SquareMatrix::FromGame(const GameSpec& game) {
  SquareMatrix m(game.k());
  for (int i = 0; i < game.k(); ++i) {
    for (int j = 0; j < game.k(); ++j) m(i, j) = game.payoff(i, j);
  }
  return m;
}

SquareMatrix SquareMatrix::Scaled(double c) const {
  SquareMatrix m = *this;
  for (double& x : m.data_) x *= c;
  return m;
}

void CheckAntisymmetric(const SquareMatrix& a) {
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i; j < a.size(); ++j) {
      const double sum = a(i, j) + a(j, i);
      const double scale = std::max(1.0, std::abs(a(i, j)));
      if (!std::isfinite(a(i, j)) || std::abs(sum) > 1e-9 * scale) {
        Fail(ErrorKind::kInvalidInput,
             "payoff matrix is not antisymmetric at (" + std::to_string(i) +
                 "," + std::to_string(j) + ")");
      }
    }
  }
}

BestResponseResult BestResponse(const SquareMatrix& a, std::span<const double> p) {
  if (static_cast<int>(p.size()) != a.size() || a.size() == 0) {
    Fail(ErrorKind::kInvalidInput, "best response: strategy length does not match matrix");
  }
  BestResponseResult best{0, -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < a.size(); ++i) {
    double v = 0.0;
    for (int j = 0; j < a.size(); ++j) v += a(i, j) * p[j];
    if (v > best.value) best = {i, v};
  }
  return best;
}

double Exploitability(const SquareMatrix& a, std::span<const double> p) {
  return BestResponse(a, p).value;
}

NashDistribution FictitiousPlay(const SquareMatrix& a, std::int64_t max_iters,
                                double tol) {
  if (max_iters < 1) Fail(ErrorKind::kInvalidInput, "fictitious play needs max_iters >= 1");
  if (!(tol > 0.0)) Fail(ErrorKind::kInvalidInput, "fictitious play needs tol > 0");
  CheckAntisymmetric(a);
  const int n = a.size();
  if (n == 0) Fail(ErrorKind::kInvalidInput, "fictitious play on an empty matrix");

  std::vector<double> counts(n, 0.0);
  // payoff_sum[i] = (A counts)_i, maintained incrementally.
  std::vector<double> payoff_sum(n, 0.0);
  const std::vector<double> uniform(n, 1.0 / n);
  int play = BestResponse(a, uniform).index;

  NashDistribution out;
  out.probs.resize(n);
  auto average = [&](std::int64_t t) {
    for (int i = 0; i < n; ++i) out.probs[i] = counts[i] / static_cast<double>(t);
    out.exploitability = Exploitability(a, out.probs);
  };

  std::int64_t t = 0;
  while (t < max_iters) {
    counts[play] += 1.0;
    for (int i = 0; i < n; ++i) payoff_sum[i] += a(i, play);
    ++t;
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (payoff_sum[i] > payoff_sum[best]) best = i;
    }
    // The running sums can differ from the normalised average in the last
    // bit, so the stop is confirmed on the value that is returned.
    if (payoff_sum[best] / static_cast<double>(t) <= tol) {
      average(t);
      if (out.exploitability <= tol) break;
    }
    play = best;
  }
  average(t);
  out.iterations_used = t;
  return out;
}

SupportSet NashSupport(const NashDistribution& dist,
                       const std::vector<AgentId>& ids, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    Fail(ErrorKind::kInvalidInput, "support threshold must lie in (0, 1)");
  }
  if (ids.size() != dist.probs.size() || ids.empty()) {
    Fail(ErrorKind::kInvalidInput, "support: one id per probability is required");
  }
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return dist.probs[x] > dist.probs[y];
  });
  SupportSet out;
  for (int i : order) {
    if (dist.probs[i] > theta) out.ids.push_back(ids[i]);
  }
  if (out.ids.empty()) {
    out.ids.push_back(ids[order.front()]);
    out.below_threshold = true;
  }
  return out;
}

EmpiricalGame BuildEmpiricalGame(const PayoffTable& table,
                                 const std::vector<AgentId>& ids) {
  const int n = static_cast<int>(ids.size());
  EmpiricalGame g;
  g.ids = ids;
  g.payoff = SquareMatrix(n);
  g.observed.assign(static_cast<std::size_t>(n) * n, true);
  std::int64_t pairs = 0;
  std::int64_t covered = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++pairs;
      const auto v = table.EmpiricalPayoff(ids[i], ids[j]);
      if (v.has_value()) {
        ++covered;
        g.payoff(i, j) = *v;
        g.payoff(j, i) = -*v;
      } else {
        g.observed[i * n + j] = false;
        g.observed[j * n + i] = false;
      }
    }
  }
  g.coverage = pairs == 0 ? 1.0 : static_cast<double>(covered) / pairs;
  return g;
}

std::string NashPopulationName(NashPopulation p) {
  return p == NashPopulation::kAll ? "all" : "active";
}

NashPopulation ParseNashPopulation(const std::string& name) {
  if (name == "all") return NashPopulation::kAll;
  if (name == "active") return NashPopulation::kActive;
  Fail(ErrorKind::kConfig, "unknown Nash population '" + name + "' (expected all|active)");
}

std::string NashSourceName(NashSource s) {
  switch (s) {
    case NashSource::kEmpirical: return "empirical";
    case NashSource::kHybrid: return "hybrid";
    case NashSource::kExact: return "exact";
  }
  return "unknown";
}

NashSource ParseNashSource(const std::string& name) {
  if (name == "empirical") return NashSource::kEmpirical;
  if (name == "hybrid") return NashSource::kHybrid;
  if (name == "exact") return NashSource::kExact;
  Fail(ErrorKind::kConfig,
       "unknown Nash source '" + name + "' (expected empirical|hybrid|exact)");
}

double GameExploitability(const GameSpec& game, const MixedStrategy& q) {
  const std::vector<double> mq = PayoffVector(game, q);
  return *std::max_element(mq.begin(), mq.end());
}

LeagueNash ComputeLeagueNash(const LeagueView& view, const PayoffTable& table,
                             const GameSpec& game, const LeagueNashOptions& options) {
  std::vector<const Agent*> members;
  for (const auto& a : view.active()) members.push_back(a.get());
  if (options.population == NashPopulation::kAll) {
    for (const auto& a : view.hall()) members.push_back(a.get());
  }
  std::vector<AgentId> ids;
  for (const Agent* m : members) ids.push_back(m->id);

  LeagueNash out;
  out.game = BuildEmpiricalGame(table, ids);
  const int n = static_cast<int>(ids.size());
  if (options.source == NashSource::kEmpirical) {
    if (out.game.coverage < options.min_coverage) {
      Fail(ErrorKind::kState,
           "payoff coverage " + std::to_string(out.game.coverage) +
               " is below the required " + std::to_string(options.min_coverage));
    }
  } else {
    std::vector<MixedStrategy> policies;
    policies.reserve(n);
    for (const Agent* m : members) policies.push_back(PolicyToMixed(m->params));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (options.source == NashSource::kHybrid && out.game.observed[i * n + j]) {
          continue;
        }
        const double v = MixedPayoff(game, policies[i], policies[j]);
        out.game.payoff(i, j) = v;
        out.game.payoff(j, i) = -v;
      }
    }
  }
  out.dist = FictitiousPlay(out.game.payoff, options.max_iters, options.tol);
  out.theta = options.theta > 0.0 ? options.theta : DefaultSupportThreshold(n);
  out.support = NashSupport(out.dist, ids, out.theta);

  out.mixture.probs.assign(game.k(), 0.0);
  for (int i = 0; i < n; ++i) {
    if (out.dist.probs[i] == 0.0) continue;
    const MixedStrategy p = PolicyToMixed(members[i]->params);
    for (int s = 0; s < game.k(); ++s) out.mixture.probs[s] += out.dist.probs[i] * p.probs[s];
  }
  out.game_exploitability = GameExploitability(game, out.mixture);
  return out;
}

}  // namespace evoleague
