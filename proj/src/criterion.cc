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

#include "evoleague/criterion.h"

#include <cmath>
#include <cstdlib>

#include "evoleague/error.h"

namespace evoleague {

bool CellRegion::Contains(const Cell& cell) const {
  if (cell.size() != center.size() || center.empty()) return false;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (std::abs(cell[i] - center[i]) > radius) return false;
  }
  return true;
}

bool operator==(const Mixture& a, const Mixture& b) {
  return a.parts == b.parts && a.weights == b.weights;
}

bool operator==(const NicheCriterion& a, const NicheCriterion& b) {
  return a.value == b.value;
}

void ValidateCriterion(const NicheCriterion& criterion) {
  struct Visitor {
    void operator()(const BdTarget& c) const {
      if (c.region.center.empty() || c.region.radius < 0) {
        Fail(ErrorKind::kInvalidInput, "BDTarget needs a non-empty center and radius >= 0");
      }
    }
    void operator()(const BeatAgent&) const {}
    void operator()(const BeatSet& c) const {
      if (c.targets.empty()) Fail(ErrorKind::kInvalidInput, "BeatSet must be non-empty");
      if (!(c.required_fraction > 0.0 && c.required_fraction <= 1.0)) {
        Fail(ErrorKind::kInvalidInput, "BeatSet required_fraction must lie in (0, 1]");
      }
    }
    void operator()(const Mixture& c) const {
      if (c.parts.empty() || c.parts.size() != c.weights.size()) {
        Fail(ErrorKind::kInvalidInput, "Mixture needs one weight per part and at least one part");
      }
      double total = 0.0;
      for (double w : c.weights) {
        if (!(w >= 0.0)) Fail(ErrorKind::kInvalidInput, "Mixture weights must be >= 0");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        Fail(ErrorKind::kInvalidInput, "Mixture weights must sum to 1");
      }
      for (const auto& part : c.parts) ValidateCriterion(part);
    }
  };
  std::visit(Visitor{}, criterion.value);
}

std::vector<AgentId> ReferencedTargets(const NicheCriterion& criterion) {
  std::vector<AgentId> out;
  struct Visitor {
    std::vector<AgentId>& out;
    void operator()(const BdTarget&) const {}
    void operator()(const BeatAgent& c) const { out.push_back(c.target); }
    void operator()(const BeatSet& c) const {
      out.insert(out.end(), c.targets.begin(), c.targets.end());
    }
    void operator()(const Mixture& c) const {
      for (const auto& part : c.parts) std::visit(*this, part.value);
    }
  };
  std::visit(Visitor{out}, criterion.value);
  return out;
}

std::string CriterionKind(const NicheCriterion& criterion) {
  switch (criterion.value.index()) {
    case 0: return "bd_target";
    case 1: return "beat_agent";
    case 2: return "beat_set";
    default: return "mixture";
  }
}

}  // namespace evoleague
