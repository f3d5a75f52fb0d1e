// Copyright 2026 The Crowdelo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seed derivation. Every random draw in the library comes from a stream whose
// seed is derived from a single master seed along a fixed path, e.g.
//
//   master -> run r -> raters -> rater i -> perception of item j
//
// so results never depend on wall-clock time or on the order in which
// independent pieces of work are evaluated.

#ifndef CROWDELO_RANDOM_H_
#define CROWDELO_RANDOM_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

namespace crowdelo {

// SplitMix64 finaliser.
constexpr std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for branch `index` of stream `tag` under `parent`.
constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t tag,
                                   std::uint64_t index = 0) {
  return MixBits(MixBits(parent ^ MixBits(tag)) + index);
}

// Stream tags of the derivation tree.
enum SeedTag : std::uint64_t {
  kRunTag = 1,
  kItemsTag,
  kRatersTag,
  kPerceptionTag,
  kSpamTag,
  kVotesTag,
  kPairsTag,
  kReplayTag,
  kSubsampleTag,
  kSubsetTag,
};

// Tiny generator for one-off draws keyed by a derived seed; seeding is free,
// unlike std::mt19937_64.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using Rng = std::mt19937_64;

// mean + stddev * N(0, 1); well defined for stddev == 0.
template <typename Generator>
double DrawNormal(Generator& gen, double mean, double stddev) {
  std::normal_distribution<double> standard(0.0, 1.0);
  return mean + stddev * standard(gen);
}

template <typename Generator>
double DrawBeta(Generator& gen, double alpha, double beta) {
  std::gamma_distribution<double> x_dist(alpha, 1.0);
  std::gamma_distribution<double> y_dist(beta, 1.0);
  const double x = x_dist(gen);
  const double y = y_dist(gen);
  return x / (x + y);
}

// `count` distinct values of [0, total) in random order.
inline std::vector<std::int64_t> SampleDistinct(std::int64_t total,
                                                std::int64_t count, Rng& rng) {
  std::vector<std::int64_t> out;
  if (count * 2 >= total) {
    out.resize(static_cast<std::size_t>(total));
    std::iota(out.begin(), out.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::int64_t> pick(i, total - 1);
      std::swap(out[static_cast<std::size_t>(i)],
                out[static_cast<std::size_t>(pick(rng))]);
    }
    out.resize(static_cast<std::size_t>(count));
    return out;
  }
  // Floyd's algorithm, then a shuffle for a uniformly random order.
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (std::int64_t j = total - count; j < total; ++j) {
    std::uniform_int_distribution<std::int64_t> pick(0, j);
    const std::int64_t t = pick(rng);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace crowdelo

#endif  // CROWDELO_RANDOM_H_
