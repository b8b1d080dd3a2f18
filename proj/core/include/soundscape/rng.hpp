// Copyright 2026  The soundscape authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace soundscape {

/// Seedable generator whose output sequence is identical on every platform.
///
/// Raw bits come from std::mt19937_64 (its output is fixed by the standard).
/// The derived draws below are computed here rather than through
/// <random> distributions, whose algorithms are implementation-defined:
///   uniform01  top 53 bits / 2^53
///   normal     Box-Muller on two uniform01 draws, no caching
///   index      rejection sampling on raw 64-bit words
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);
  /// Index drawn proportionally to non-negative weights (sum > 0).
  std::size_t discrete(std::span<const double> weights);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent sub-seed for work item `index` under `master`. Parallel and
/// serial runs that use it produce identical streams per item.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace soundscape
