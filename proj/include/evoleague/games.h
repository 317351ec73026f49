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

#ifndef EVOLEAGUE_GAMES_H_
#define EVOLEAGUE_GAMES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evoleague {

// Unconstrained softmax logits, one per pure strategy.
struct PolicyParams {
  std::vector<double> logits;
};

// A point on the probability simplex over pure strategies.
struct MixedStrategy {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
};

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr int kDefaultBlottoCap = 500;

// Symmetric two-player zero-sum game over k pure strategies. The payoff is the
// row player's; antisymmetry makes the game identical from either seat.
//
// Each pure strategy also carries a behaviour feature vector (one-hot for
// matrix games, field allocation fractions for Blotto). Averaging the features
// of sampled actions gives the behaviour descriptor of a policy.
class GameSpec {
 public:
  GameSpec(std::string name, int k, std::vector<double> payoff,
           std::vector<double> features, int feature_dim,
           std::vector<std::string> labels);

  // Matrix game whose behaviour features are one-hot action indicators.
  static GameSpec FromMatrix(std::string name,
                             const std::vector<std::vector<double>>& rows);

  const std::string& name() const { return name_; }
  int k() const { return k_; }
  double payoff(int i, int j) const { return payoff_[i * k_ + j]; }
  std::span<const double> row(int i) const {
    return {payoff_.data() + static_cast<std::size_t>(i) * k_,
            static_cast<std::size_t>(k_)};
  }
  int feature_dim() const { return feature_dim_; }
  std::span<const double> features(int i) const {
    return {features_.data() + static_cast<std::size_t>(i) * feature_dim_,
            static_cast<std::size_t>(feature_dim_)};
  }
  const std::string& label(int i) const { return labels_[i]; }
  // Index of the pure strategy with the given label, or -1.
  int FindLabel(const std::string& label) const;

  std::vector<std::vector<double>> Matrix() const;

 private:
  std::string name_;
  int k_;
  std::vector<double> payoff_;  // row-major k x k
  std::vector<double> features_;  // row-major k x feature_dim
  int feature_dim_;
  std::vector<std::string> labels_;
};

// Throws kInvalidInput unless `p` is nonnegative and sums to 1 within `tol`.
void ValidateSimplex(std::span<const double> p, double tol = kSimplexTolerance);

MixedStrategy Uniform(int k);
MixedStrategy Pure(int k, int index);

// Numerically stable softmax.
MixedStrategy PolicyToMixed(const PolicyParams& params);

// Bilinear expected payoff p^T M q for the row player.
double MixedPayoff(const GameSpec& game, const MixedStrategy& p,
                   const MixedStrategy& q);

// M q, the payoff of each pure strategy against q.
std::vector<double> PayoffVector(const GameSpec& game, const MixedStrategy& q);

// Exact gradient of MixedPayoff(game, softmax(logits), q) w.r.t. the logits:
// diag(p) M q - p (p^T M q).
std::vector<double> PayoffGradient(const GameSpec& game,
                                   const PolicyParams& params,
                                   const MixedStrategy& q);

// Cyclic generalisation of rock-paper-scissors over an odd number of
// strategies: strategy i beats the (k-1)/2 strategies that precede it
// cyclically and loses to the (k-1)/2 that follow.
GameSpec MakeRps(int k);

// Colonel Blotto with `soldiers` split over `fields` ordered battlefields.
// Payoff is the field margin (wins - losses) / fields.
GameSpec MakeBlotto(int soldiers, int fields, int cap = kDefaultBlottoCap);

// Upper triangle i.i.d. uniform on [-1, 1] from `seed`, lower triangle its
// exact negation.
GameSpec MakeRandomAntisymmetric(int k, std::uint64_t seed);

}  // namespace evoleague

#endif  // EVOLEAGUE_GAMES_H_
