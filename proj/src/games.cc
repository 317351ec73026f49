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

#include "evoleague/games.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "evoleague/error.h"
#include "evoleague/random.h"

namespace evoleague {
namespace {

void CheckFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      Fail(ErrorKind::kInvalidInput, std::string(what) + " contains a non-finite entry");
    }
  }
}

void CheckDims(const GameSpec& game, int n, const char* what) {
  if (n != game.k()) {
    Fail(ErrorKind::kInvalidInput,
         std::string(what) + " has length " + std::to_string(n) +
             " but game '" + game.name() + "' has " +
             std::to_string(game.k()) + " strategies");
  }
}

std::vector<std::string> IndexLabels(int k) {
  std::vector<std::string> labels;
  labels.reserve(k);
  for (int i = 0; i < k; ++i) labels.push_back("s" + std::to_string(i));
  return labels;
}

std::vector<double> OneHotFeatures(int k) {
  std::vector<double> f(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) f[i * k + i] = 1.0;
  return f;
}

void Compositions(int remaining, int fields, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (fields == 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int x = remaining; x >= 0; --x) {
    current.push_back(x);
    Compositions(remaining - x, fields - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

GameSpec::GameSpec(std::string name, int k, std::vector<double> payoff,
                   std::vector<double> features, int feature_dim,
                   std::vector<std::string> labels)
    : name_(std::move(name)),
      k_(k),
      payoff_(std::move(payoff)),
      features_(std::move(features)),
      feature_dim_(feature_dim),
      labels_(std::move(labels)) {
  if (k_ < 2) Fail(ErrorKind::kInvalidInput, "a game needs at least 2 strategies");
  if (payoff_.size() != static_cast<std::size_t>(k_) * k_) {
    Fail(ErrorKind::kInvalidInput, "payoff matrix must be k x k");
  }
  if (feature_dim_ < 1 ||
      features_.size() != static_cast<std::size_t>(k_) * feature_dim_) {
    Fail(ErrorKind::kInvalidInput, "feature matrix must be k x feature_dim");
  }
  if (labels_.size() != static_cast<std::size_t>(k_)) {
    Fail(ErrorKind::kInvalidInput, "one label per strategy is required");
  }
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      const double v = this->payoff(i, j);
      if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
        Fail(ErrorKind::kInvalidInput, "payoff entries must lie in [-1, 1]");
      }
      if (v != -this->payoff(j, i)) {
        Fail(ErrorKind::kInvalidInput, "payoff matrix must be antisymmetric");
      }
    }
  }
}

GameSpec GameSpec::FromMatrix(std::string name,
                              const std::vector<std::vector<double>>& rows) {
  const int k = static_cast<int>(rows.size());
  std::vector<double> payoff;
  payoff.reserve(static_cast<std::size_t>(k) * k);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != k) {
      Fail(ErrorKind::kInvalidInput, "payoff matrix must be square");
    }
    payoff.insert(payoff.end(), r.begin(), r.end());
  }
  return GameSpec(std::move(name), k, std::move(payoff), OneHotFeatures(k), k,
                  IndexLabels(k));
}

int GameSpec::FindLabel(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

std::vector<std::vector<double>> GameSpec::Matrix() const {
  std::vector<std::vector<double>> rows(k_);
  for (int i = 0; i < k_; ++i) rows[i].assign(row(i).begin(), row(i).end());
  return rows;
}

void ValidateSimplex(std::span<const double> p, double tol) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) {
      Fail(ErrorKind::kInvalidInput, "mixed strategy entries must be finite and nonnegative");
    }
    sum += x;
  }
  if (p.empty() || std::abs(sum - 1.0) > tol) {
    Fail(ErrorKind::kInvalidInput, "mixed strategy must sum to 1");
  }
}

MixedStrategy Uniform(int k) {
  return MixedStrategy{std::vector<double>(k, 1.0 / k)};
}

MixedStrategy Pure(int k, int index) {
  MixedStrategy s{std::vector<double>(k, 0.0)};
  s.probs.at(index) = 1.0;
  return s;
}

MixedStrategy PolicyToMixed(const PolicyParams& params) {
  const auto& z = params.logits;
  if (z.empty()) Fail(ErrorKind::kInvalidInput, "logits must be non-empty");
  CheckFinite(z, "logits");
  const double max = *std::max_element(z.begin(), z.end());
  MixedStrategy out{std::vector<double>(z.size())};
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.probs[i] = std::exp(z[i] - max);
    total += out.probs[i];
  }
  for (double& p : out.probs) p /= total;
  return out;
}

std::vector<double> PayoffVector(const GameSpec& game, const MixedStrategy& q) {
  CheckDims(game, q.size(), "opponent strategy");
  const int k = game.k();
  std::vector<double> mq(k, 0.0);
  for (int i = 0; i < k; ++i) {
    const auto r = game.row(i);
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc += r[j] * q.probs[j];
    mq[i] = acc;
  }
  return mq;
}

double MixedPayoff(const GameSpec& game, const MixedStrategy& p,
                   const MixedStrategy& q) {
  CheckDims(game, p.size(), "row strategy");
  CheckDims(game, q.size(), "column strategy");
  // Summed over the upper triangle of the antisymmetric matrix, so the value
  // is exactly antisymmetric in (p, q) and exactly zero for p == q.
  const int k = game.k();
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto r = game.row(i);
    for (int j = i + 1; j < k; ++j) {
      total += r[j] * (p.probs[i] * q.probs[j] - p.probs[j] * q.probs[i]);
    }
  }
  return total;
}

std::vector<double> PayoffGradient(const GameSpec& game,
                                   const PolicyParams& params,
                                   const MixedStrategy& q) {
  CheckDims(game, static_cast<int>(params.logits.size()), "logits");
  const MixedStrategy p = PolicyToMixed(params);
  const std::vector<double> mq = PayoffVector(game, q);
  double value = 0.0;
  for (int i = 0; i < game.k(); ++i) value += p.probs[i] * mq[i];
  std::vector<double> grad(game.k());
  for (int i = 0; i < game.k(); ++i) grad[i] = p.probs[i] * (mq[i] - value);
  return grad;
}

GameSpec MakeRps(int k) {
  if (k < 3 || k % 2 == 0) {
    Fail(ErrorKind::kInvalidInput,
         "cyclic game needs an odd number of strategies >= 3, got " + std::to_string(k));
  }
  const int half = (k - 1) / 2;
  std::vector<double> payoff(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int d = ((j - i) % k + k) % k;
      if (d == 0) continue;
      payoff[i * k + j] = d <= half ? -1.0 : 1.0;
    }
  }
  std::vector<std::string> labels =
      k == 3 ? std::vector<std::string>{"rock", "paper", "scissors"} : IndexLabels(k);
  return GameSpec("rps" + std::to_string(k), k, std::move(payoff),
                  OneHotFeatures(k), k, std::move(labels));
}

GameSpec MakeBlotto(int soldiers, int fields, int cap) {
  if (soldiers < 1 || fields < 2) {
    Fail(ErrorKind::kInvalidInput, "blotto needs soldiers >= 1 and fields >= 2");
  }
  // Number of compositions is C(soldiers + fields - 1, fields - 1).
  double count = 1.0;
  for (int i = 1; i < fields; ++i) {
    count = count * (soldiers + i) / i;
    if (count > cap) break;
  }
  if (count > cap + 0.5) {
    Fail(ErrorKind::kCapacity,
         "blotto(" + std::to_string(soldiers) + "," + std::to_string(fields) +
             ") has more than " + std::to_string(cap) + " pure strategies");
  }
  std::vector<std::vector<int>> allocs;
  std::vector<int> current;
  Compositions(soldiers, fields, current, allocs);
  const int k = static_cast<int>(allocs.size());

  std::vector<double> payoff(static_cast<std::size_t>(k) * k, 0.0);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      int margin = 0;
      for (int f = 0; f < fields; ++f) {
        margin += (allocs[a][f] > allocs[b][f]) - (allocs[a][f] < allocs[b][f]);
      }
      const double v = static_cast<double>(margin) / fields;
      payoff[a * k + b] = v;
      payoff[b * k + a] = -v;
    }
  }
  std::vector<double> features;
  std::vector<std::string> labels;
  features.reserve(static_cast<std::size_t>(k) * fields);
  for (const auto& alloc : allocs) {
    std::string label;
    for (int f = 0; f < fields; ++f) {
      features.push_back(static_cast<double>(alloc[f]) / soldiers);
      if (f > 0) label += '-';
      label += std::to_string(alloc[f]);
    }
    labels.push_back(std::move(label));
  }
  return GameSpec("blotto" + std::to_string(soldiers) + "x" + std::to_string(fields),
                  k, std::move(payoff), std::move(features), fields,
                  std::move(labels));
}

GameSpec MakeRandomAntisymmetric(int k, std::uint64_t seed) {
  if (k < 2) Fail(ErrorKind::kInvalidInput, "random game needs k >= 2");
  Rng rng(seed);
  std::vector<double> payoff(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double v = 2.0 * Uniform01(rng) - 1.0;
      payoff[i * k + j] = v;
      payoff[j * k + i] = -v;
    }
  }
  return GameSpec("random" + std::to_string(k) + "_" + std::to_string(seed), k,
                  std::move(payoff), OneHotFeatures(k), k, IndexLabels(k));
}

}  // namespace evoleague
