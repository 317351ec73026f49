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

#include "evoleague/random.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evoleague/error.h"

namespace evoleague {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t index,
                         Stream stream) {
  std::uint64_t h = SplitMix64(root);
  h = SplitMix64(h ^ index);
  return SplitMix64(h ^ static_cast<std::uint64_t>(stream));
}

double Uniform01(Rng& rng) {
  // 53 random mantissa bits; result in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double LogUniform(Rng& rng, double lo, double hi) {
  if (!(lo > 0.0) || hi < lo) {
    Fail(ErrorKind::kInvalidInput, "log-uniform bounds must satisfy 0 < lo <= hi");
  }
  if (lo == hi) return lo;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  const double x = std::exp(log_lo + Uniform01(rng) * (log_hi - log_lo));
  return std::clamp(x, lo, hi);
}

double StandardNormal(Rng& rng) {
  // Box-Muller without caching so that the draw count per call is fixed.
  const double u1 = 1.0 - Uniform01(rng);
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int SampleIndex(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (weights.empty() || !(total > 0.0) || !std::isfinite(total)) {
    Fail(ErrorKind::kInvalidInput, "categorical weights must have a positive finite sum");
  }
  const double target = Uniform01(rng) * total;
  double acc = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace evoleague
