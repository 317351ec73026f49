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

#include "evoleague/qd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "evoleague/error.h"

namespace evoleague {
namespace {

constexpr int kEscalatedSetSize = 3;
constexpr double kFractionStep = 0.25;

// Candidates other than `agent`, nearest rating first (ties by id).
std::vector<const Agent*> NearestRated(const Agent& agent, const LeagueView& view) {
  std::vector<const Agent*> out;
  for (const auto& a : view.active()) {
    if (a->id != agent.id) out.push_back(a.get());
  }
  for (const auto& a : view.hall()) out.push_back(a.get());
  std::stable_sort(out.begin(), out.end(), [&](const Agent* x, const Agent* y) {
    const double dx = std::abs(x->rating - agent.rating);
    const double dy = std::abs(y->rating - agent.rating);
    if (dx != dy) return dx < dy;
    return x->id < y->id;
  });
  return out;
}

void EnumerateCells(int dim, int resolution, Cell& current, int sum,
                    std::vector<Cell>& out) {
  const int pos = static_cast<int>(current.size());
  if (pos == dim) {
    if (sum > resolution - dim) out.push_back(current);
    return;
  }
  for (int c = 0; c < resolution && sum + c <= resolution; ++c) {
    current.push_back(c);
    EnumerateCells(dim, resolution, current, sum + c, out);
    current.pop_back();
  }
}

const Agent& RequireInView(const LeagueView& view, AgentId id) {
  const Agent* a = view.Find(id);
  if (a == nullptr) {
    Fail(ErrorKind::kNotFound, "criterion target " + std::to_string(id) + " is not in the league");
  }
  return *a;
}

class Adapter {
 public:
  Adapter(const Agent& agent, const LeagueView& view, const Archive& archive,
          Rng& rng, const QdConfig& config)
      : agent_(agent), view_(view), archive_(archive), rng_(rng), config_(config) {}

  NicheCriterion Escalate(const NicheCriterion& c) {
    NicheCriterion out = c;
    if (auto* t = std::get_if<BdTarget>(&out.value)) {
      // The next target is the closest unexplored region that the agent does
      // not already sit in.
      std::optional<Cell> cell;
      if (agent_.bd.has_value()) {
        cell = archive_.SampleUnoccupiedNear(Discretize(*agent_.bd, config_.resolution),
                                             config_.target_radius + 1, rng_);
      }
      if (!cell) cell = archive_.SampleUnoccupied(rng_);
      if (cell) t->region = CellRegion{*cell, config_.target_radius};
    } else if (std::holds_alternative<BeatAgent>(out.value)) {
      BeatSet set;
      set.required_fraction = 0.5;
      for (const Agent* a : NearestRated(agent_, view_)) {
        if (static_cast<int>(set.targets.size()) == kEscalatedSetSize) break;
        set.targets.push_back(a->id);
      }
      if (!set.targets.empty()) out.value = std::move(set);
    } else if (auto* s = std::get_if<BeatSet>(&out.value)) {
      s->required_fraction = std::min(1.0, s->required_fraction + kFractionStep);
    } else {
      auto& m = std::get<Mixture>(out.value);
      for (auto& part : m.parts) part = Escalate(part);
    }
    return out;
  }

  NicheCriterion Relax(const NicheCriterion& c) {
    NicheCriterion out = c;
    if (auto* t = std::get_if<BdTarget>(&out.value)) {
      t->region.radius = std::min(t->region.radius + 1, config_.resolution);
    } else if (auto* b = std::get_if<BeatAgent>(&out.value)) {
      // Retarget to the weakest of the nearest-rated candidates.
      const auto nearest = NearestRated(agent_, view_);
      const Agent* weakest = nullptr;
      for (int i = 0; i < std::min<int>(kEscalatedSetSize, nearest.size()); ++i) {
        if (weakest == nullptr || nearest[i]->rating < weakest->rating) weakest = nearest[i];
      }
      if (weakest != nullptr) b->target = weakest->id;
    } else if (auto* s = std::get_if<BeatSet>(&out.value)) {
      if (s->required_fraction > kFractionStep + 1e-12) {
        s->required_fraction -= kFractionStep;
      } else {
        out.value = BeatAgent{s->targets.front(), config_.beat_margin};
      }
    } else {
      auto& m = std::get<Mixture>(out.value);
      for (auto& part : m.parts) part = Relax(part);
    }
    return out;
  }

 private:
  const Agent& agent_;
  const LeagueView& view_;
  const Archive& archive_;
  Rng& rng_;
  const QdConfig& config_;
};

}  // namespace

void ValidateQdConfig(const QdConfig& c) {
  if (c.resolution < 1) Fail(ErrorKind::kConfig, "qd.R must be >= 1");
  if (!(c.beta_f >= 0.0)) Fail(ErrorKind::kConfig, "qd.beta_f must be >= 0");
  if (!(c.s_lo >= 0.0 && c.s_lo < c.s_hi && c.s_hi <= 1.0)) {
    Fail(ErrorKind::kConfig, "qd thresholds must satisfy 0 <= qd.s_lo < qd.s_hi <= 1");
  }
  if (c.adapt_window < 1) Fail(ErrorKind::kConfig, "qd.adapt_window must be >= 1");
  if (c.bd_window < 1) Fail(ErrorKind::kConfig, "qd.bd_window must be >= 1");
  if (c.target_radius < 0) Fail(ErrorKind::kConfig, "qd.target_radius must be >= 0");
}

std::optional<BdVector> ComputeBd(std::span<const BdVector> per_match, int window) {
  if (per_match.empty() || window < 1) return std::nullopt;
  const std::size_t start =
      per_match.size() > static_cast<std::size_t>(window) ? per_match.size() - window : 0;
  BdVector mean(per_match.back().size(), 0.0);
  for (std::size_t m = start; m < per_match.size(); ++m) {
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += per_match[m][d];
  }
  const double count = static_cast<double>(per_match.size() - start);
  for (double& x : mean) x /= count;
  return mean;
}

std::optional<BdVector> ComputeBd(std::span<const MatchResult> results,
                                  AgentId agent_id, int window) {
  std::vector<BdVector> mine;
  for (const auto& r : results) {
    if (r.a == agent_id) mine.push_back(r.bd_a);
    else if (r.b == agent_id) mine.push_back(r.bd_b);
  }
  return ComputeBd(mine, window);
}

Cell Discretize(const BdVector& bd, int resolution) {
  Cell cell(bd.size());
  for (std::size_t i = 0; i < bd.size(); ++i) {
    const double bin = std::floor(bd[i] * resolution);
    cell[i] = static_cast<int>(std::clamp(bin, 0.0, static_cast<double>(resolution - 1)));
  }
  return cell;
}

std::int64_t ReachableCellCount(int dim, int resolution) {
  // ways[s] = number of cells with coordinate sum s.
  std::vector<std::int64_t> ways(resolution + 1, 0);
  ways[0] = 1;
  for (int d = 0; d < dim; ++d) {
    std::vector<std::int64_t> next(resolution + 1, 0);
    for (int s = 0; s <= resolution; ++s) {
      if (ways[s] == 0) continue;
      for (int c = 0; c < resolution && s + c <= resolution; ++c) next[s + c] += ways[s];
    }
    ways = std::move(next);
  }
  std::int64_t total = 0;
  for (int s = std::max(0, resolution - dim + 1); s <= resolution; ++s) total += ways[s];
  return total;
}

bool IsReachable(const Cell& cell, int resolution) {
  int sum = 0;
  for (int c : cell) {
    if (c < 0 || c >= resolution) return false;
    sum += c;
  }
  return sum > resolution - static_cast<int>(cell.size()) && sum <= resolution;
}

Archive::Archive(int dim, int resolution)
    : dim_(dim), resolution_(resolution), reachable_(ReachableCellCount(dim, resolution)) {
  if (dim < 1 || resolution < 1) {
    Fail(ErrorKind::kInvalidInput, "archive needs dim >= 1 and resolution >= 1");
  }
}

bool Archive::Insert(const Agent& agent, const BdVector& bd, double quality) {
  return Insert(std::make_shared<const Agent>(agent), bd, quality);
}

bool Archive::Insert(AgentPtr agent, const BdVector& bd, double quality) {
  if (static_cast<int>(bd.size()) != dim_) {
    Fail(ErrorKind::kInvalidInput, "descriptor dimension does not match the archive");
  }
  ValidateSimplex(bd, 1e-6);
  Cell cell = Discretize(bd, resolution_);
  auto it = cells_.find(cell);
  if (it != cells_.end() && !(quality > it->second.quality)) return false;
  cells_[std::move(cell)] = Entry{std::move(agent), quality};
  return true;
}

double Archive::Coverage() const {
  std::int64_t occupied = 0;
  for (const auto& [cell, entry] : cells_) occupied += IsReachable(cell, resolution_);
  return reachable_ == 0 ? 0.0 : static_cast<double>(occupied) / reachable_;
}

double Archive::QdScore() const {
  double total = 0.0;
  for (const auto& [cell, entry] : cells_) total += entry.quality;
  return total;
}

const std::vector<Cell>& Archive::ReachableCells() const {
  if (reachable_cells_.empty()) {
    Cell current;
    EnumerateCells(dim_, resolution_, current, 0, reachable_cells_);
  }
  return reachable_cells_;
}

std::optional<Cell> Archive::SampleUnoccupied(Rng& rng) const {
  std::vector<const Cell*> free;
  for (const Cell& c : ReachableCells()) {
    if (!Occupied(c)) free.push_back(&c);
  }
  if (free.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  return *free[pick(rng)];
}

std::optional<Cell> Archive::SampleUnoccupiedNear(const Cell& from, int min_distance,
                                                  Rng& rng) const {
  std::vector<const Cell*> best;
  int best_distance = std::numeric_limits<int>::max();
  for (const Cell& c : ReachableCells()) {
    if (Occupied(c)) continue;
    int d = 0;
    for (std::size_t i = 0; i < c.size(); ++i) d = std::max(d, std::abs(c[i] - from[i]));
    if (d < min_distance || d > best_distance) continue;
    if (d < best_distance) {
      best_distance = d;
      best.clear();
    }
    best.push_back(&c);
  }
  if (best.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
  return *best[pick(rng)];
}

Cell Archive::SampleReachable(Rng& rng) const {
  const auto& cells = ReachableCells();
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  return cells[pick(rng)];
}

void Archive::RestoreEntry(Cell cell, AgentPtr agent, double quality) {
  cells_[std::move(cell)] = Entry{std::move(agent), quality};
}

double CriterionSatisfaction(const Agent& agent, const NicheCriterion& criterion,
                             const PayoffTable& table, const LeagueView& view,
                             int resolution) {
  struct Visitor {
    const Agent& agent;
    const PayoffTable& table;
    const LeagueView& view;
    int resolution;

    double operator()(const BdTarget& c) const {
      if (!agent.bd.has_value()) return 0.0;
      return c.region.Contains(Discretize(*agent.bd, resolution)) ? 1.0 : 0.0;
    }
    double operator()(const BeatAgent& c) const {
      RequireInView(view, c.target);
      const auto v = table.EmpiricalPayoff(agent.id, c.target);
      return v.has_value() && *v >= c.margin ? 1.0 : 0.0;
    }
    double operator()(const BeatSet& c) const {
      if (c.targets.empty()) return 0.0;
      int beaten = 0;
      for (AgentId t : c.targets) {
        RequireInView(view, t);
        const auto v = table.EmpiricalPayoff(agent.id, t);
        beaten += v.has_value() && *v > 0.0;
      }
      const double fraction = static_cast<double>(beaten) / c.targets.size();
      if (fraction >= c.required_fraction) return 1.0;
      return std::min(1.0, fraction / c.required_fraction);
    }
    double operator()(const Mixture& c) const {
      double total = 0.0;
      for (std::size_t i = 0; i < c.parts.size(); ++i) {
        total += c.weights[i] * std::visit(*this, c.parts[i].value);
      }
      return std::clamp(total, 0.0, 1.0);
    }
  };
  return std::visit(Visitor{agent, table, view, resolution}, criterion.value);
}

double ShapedFitness(const Agent& agent, const NicheCriterion& criterion,
                     const PayoffTable& table, const LeagueView& view,
                     double beta_f, int resolution) {
  if (beta_f == 0.0) return agent.rating;
  return agent.rating +
         beta_f * CriterionSatisfaction(agent, criterion, table, view, resolution);
}

AdaptedCriterion AdaptCriterion(const Agent& agent, const LeagueView& view,
                                const PayoffTable& /*table*/, const Archive& archive,
                                Rng& rng, const QdConfig& config) {
  AdaptedCriterion out{agent.criterion, Adaptation::kNone};
  const auto& h = agent.satisfaction_history;
  const int w = config.adapt_window;
  if (static_cast<int>(h.size()) < w) return out;
  const auto recent = std::span<const double>(h).last(w);
  const bool high = std::all_of(recent.begin(), recent.end(),
                                [&](double s) { return s >= config.s_hi; });
  const bool low = std::all_of(recent.begin(), recent.end(),
                               [&](double s) { return s <= config.s_lo; });
  Adapter adapter(agent, view, archive, rng, config);
  if (high) {
    out.criterion = adapter.Escalate(agent.criterion);
    out.change = Adaptation::kEscalate;
  } else if (low) {
    out.criterion = adapter.Relax(agent.criterion);
    out.change = Adaptation::kRelax;
  }
  return out;
}

NicheCriterion InitialCriterion(int slot, const Agent& agent, const LeagueView& view,
                                const Archive& archive, Rng& rng,
                                const QdConfig& config) {
  BdTarget target{CellRegion{archive.SampleReachable(rng), config.target_radius}};
  std::vector<AgentId> others;
  for (const auto& a : view.active()) {
    if (a->id != agent.id) others.push_back(a->id);
  }
  std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
  BeatAgent beat{others[pick(rng)], config.beat_margin};
  switch (slot % 3) {
    case 0: return NicheCriterion{target};
    case 1: return NicheCriterion{beat};
    default: {
      Mixture m;
      m.parts = {NicheCriterion{target}, NicheCriterion{beat}};
      m.weights = {0.5, 0.5};
      return NicheCriterion{std::move(m)};
    }
  }
}

bool RepairCriterion(NicheCriterion& criterion, const Agent& agent,
                     const LeagueView& view) {
  bool changed = false;
  auto fix = [&](AgentId& id) {
    if (view.Find(id) != nullptr) return;
    const auto nearest = NearestRated(agent, view);
    if (nearest.empty()) return;
    id = nearest.front()->id;
    changed = true;
  };
  struct Visitor {
    decltype(fix)& fix_id;
    void operator()(BdTarget&) const {}
    void operator()(BeatAgent& c) const { fix_id(c.target); }
    void operator()(BeatSet& c) const {
      for (AgentId& t : c.targets) fix_id(t);
    }
    void operator()(Mixture& c) const {
      for (auto& part : c.parts) std::visit(*this, part.value);
    }
  };
  std::visit(Visitor{fix}, criterion.value);
  return changed;
}

}  // namespace evoleague
