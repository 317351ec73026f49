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

#include "evoleague/league.h"

#include <cmath>
#include <limits>

#include "evoleague/error.h"

namespace evoleague {

double ExpectedScore(double rating_a, double rating_b, const EloConfig& elo) {
  return 1.0 / (1.0 + std::pow(elo.base, (rating_b - rating_a) / elo.scale));
}

RatingDeltas EloDeltas(double rating_a, double rating_b, double score_a,
                       const EloConfig& elo) {
  if (!(score_a >= 0.0 && score_a <= 1.0)) {
    Fail(ErrorKind::kInvalidInput, "Elo score must lie in [0, 1]");
  }
  RatingDeltas d;
  d.a = elo.k_factor * (score_a - ExpectedScore(rating_a, rating_b, elo));
  d.b = elo.k_factor * ((1.0 - score_a) - ExpectedScore(rating_b, rating_a, elo));
  return d;
}

void RatingBook::Set(AgentId id, double rating, bool frozen) {
  ratings_[id] = rating;
  if (frozen) {
    frozen_.insert(id);
  } else {
    frozen_.erase(id);
  }
}

double RatingBook::rating(AgentId id) const {
  auto it = ratings_.find(id);
  if (it == ratings_.end()) {
    Fail(ErrorKind::kNotFound, "no rating for agent " + std::to_string(id));
  }
  return it->second;
}

double RatingBook::Total() const {
  double total = 0.0;
  for (const auto& [id, r] : ratings_) total += r;
  return total;
}

void RatingBook::Update(AgentId a, AgentId b, double score_a) {
  const double ra = rating(a);
  const double rb = rating(b);
  const RatingDeltas d = EloDeltas(ra, rb, score_a, elo_);
  if (frozen(a)) {
    frozen_charge_ += d.a;
  } else {
    ratings_[a] = ra + d.a;
  }
  if (frozen(b)) {
    frozen_charge_ += d.b;
  } else {
    ratings_[b] = rb + d.b;
  }
}

RatingDeltas UpdateLeagueRatings(League& league, AgentId a, AgentId b,
                                 double score_a, const EloConfig& elo) {
  const Agent* pa = league.Find(a);
  const Agent* pb = league.Find(b);
  if (pa == nullptr || pb == nullptr) {
    Fail(ErrorKind::kNotFound, "rating update for unknown agent " +
                                   std::to_string(pa == nullptr ? a : b));
  }
  RatingDeltas d = EloDeltas(pa->rating, pb->rating, score_a, elo);
  const int ia = league.ActiveIndex(a);
  const int ib = league.ActiveIndex(b);
  if (ia >= 0) {
    league.Update(ia, [&](Agent& x) { x.rating += d.a; });
  } else {
    d.a = 0.0;
  }
  if (ib >= 0) {
    league.Update(ib, [&](Agent& x) { x.rating += d.b; });
  } else {
    d.b = 0.0;
  }
  return d;
}

OpponentSampler::OpponentSampler(const LeagueView& view, const Agent& agent,
                                 double sigma) {
  auto consider = [&](const Agent& c) {
    candidates_.push_back(c.id);
    weights_.push_back(c.rating - agent.rating);
  };
  for (const auto& c : view.active()) {
    if (c->id != agent.id) consider(*c);
  }
  for (const auto& c : view.hall()) consider(*c);
  if (candidates_.empty()) {
    Fail(ErrorKind::kState, "no opponent candidates for agent " + std::to_string(agent.id));
  }
  // Weights are shifted by the smallest squared gap so the nearest candidate
  // has weight 1 and nothing underflows to an all-zero vector.
  double min_sq = std::numeric_limits<double>::infinity();
  for (double gap : weights_) min_sq = std::min(min_sq, gap * gap);
  const double denom = 2.0 * sigma * sigma;
  for (double& w : weights_) {
    w = std::isinf(denom) ? 1.0 : std::exp(-(w * w - min_sq) / denom);
  }
}

AgentId OpponentSampler::Sample(Rng& rng) const {
  return candidates_[SampleIndex(weights_, rng)];
}

AgentId SampleOpponent(const LeagueView& view, const Agent& agent, double sigma,
                       Rng& rng) {
  return OpponentSampler(view, agent, sigma).Sample(rng);
}

BdVector ExpectedBd(const GameSpec& game, const MixedStrategy& p) {
  BdVector bd(game.feature_dim(), 0.0);
  for (int i = 0; i < game.k(); ++i) {
    if (p.probs[i] == 0.0) continue;
    const auto f = game.features(i);
    for (int d = 0; d < game.feature_dim(); ++d) bd[d] += p.probs[i] * f[d];
  }
  return bd;
}

MatchResult PlayMatch(const GameSpec& game, const Agent& a, const Agent& b,
                      int episodes, Rng& rng, bool exact) {
  if (episodes < 1) Fail(ErrorKind::kInvalidInput, "a match needs episodes >= 1");
  const MixedStrategy pa = PolicyToMixed(a.params);
  const MixedStrategy pb = PolicyToMixed(b.params);
  MatchResult r;
  r.a = a.id;
  r.b = b.id;
  if (exact) {
    r.payoff_a = MixedPayoff(game, pa, pb);
    r.bd_a = ExpectedBd(game, pa);
    r.bd_b = ExpectedBd(game, pb);
    return r;
  }
  const int dim = game.feature_dim();
  r.bd_a.assign(dim, 0.0);
  r.bd_b.assign(dim, 0.0);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    const int i = SampleIndex(pa.probs, rng);
    const int j = SampleIndex(pb.probs, rng);
    total += game.payoff(i, j);
    const auto fi = game.features(i);
    const auto fj = game.features(j);
    for (int d = 0; d < dim; ++d) {
      r.bd_a[d] += fi[d];
      r.bd_b[d] += fj[d];
    }
  }
  r.payoff_a = total / episodes;
  for (int d = 0; d < dim; ++d) {
    r.bd_a[d] /= episodes;
    r.bd_b[d] /= episodes;
  }
  return r;
}

void PayoffTable::Record(const MatchResult& result) {
  if (result.a == result.b) {
    Fail(ErrorKind::kInvalidInput, "a match result needs two distinct agents");
  }
  if (!std::isfinite(result.payoff_a) || result.payoff_a < -1.0 ||
      result.payoff_a > 1.0) {
    Fail(ErrorKind::kInvalidInput, "match payoff must be finite and within [-1, 1]");
  }
  Add(result.a, result.b, result.payoff_a, 1);
}

void PayoffTable::Add(AgentId a, AgentId b, double sum, std::int64_t count) {
  Entry& e = entries_[{a, b}];
  e.sum += sum;
  e.count += count;
}

std::int64_t PayoffTable::Count(AgentId i, AgentId j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? 0 : it->second.count;
}

std::optional<double> PayoffTable::EmpiricalPayoff(AgentId i, AgentId j) const {
  if (i == j) return 0.0;
  double sum = 0.0;
  std::int64_t count = 0;
  if (auto it = entries_.find({i, j}); it != entries_.end()) {
    sum += it->second.sum;
    count += it->second.count;
  }
  if (auto it = entries_.find({j, i}); it != entries_.end()) {
    sum -= it->second.sum;
    count += it->second.count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace evoleague
