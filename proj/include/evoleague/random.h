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

#ifndef EVOLEAGUE_RANDOM_H_
#define EVOLEAGUE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace evoleague {

using Rng = std::mt19937_64;

// Named sub-streams of the root seed. Every unit of work draws from its own
// stream keyed by (root seed, unit ticket, stream), so the number of workers
// never perturbs another unit's randomness.
enum class Stream : std::uint64_t {
  kSpawn = 1,
  kCompute = 2,
  kCommit = 3,
  kQd = 4,
  kMatch = 5,
  kEval = 6,
  kSchedule = 7,
};

std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t index,
                         Stream stream);

inline Rng MakeRng(std::uint64_t root, std::uint64_t index, Stream stream) {
  return Rng(DeriveSeed(root, index, stream));
}

double Uniform01(Rng& rng);

// Log-uniform on [lo, hi]; requires 0 < lo <= hi.
double LogUniform(Rng& rng, double lo, double hi);

double StandardNormal(Rng& rng);

// Index drawn with probability proportional to `weights` (nonnegative, with
// a positive sum).
int SampleIndex(std::span<const double> weights, Rng& rng);

}  // namespace evoleague

#endif  // EVOLEAGUE_RANDOM_H_
