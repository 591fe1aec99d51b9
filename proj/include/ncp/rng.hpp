// Copyright 2026 The NCP Authors
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

#pragma once

#include "ncp/linalg.hpp"

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <string_view>

namespace ncp {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Folds a sequence of words into a 64-bit key; order-sensitive.
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
std::uint64_t derive_key(std::uint64_t seed, std::string_view label);

/// Counter-based generator: output n is mix64(key + n * gamma). Substreams are
/// independent keys, so filling column j from substream(j) gives the same
/// result regardless of fill order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  CounterRng substream(std::uint64_t index) const;
  CounterRng substream(std::string_view label) const;

  double uniform();  // [0, 1)
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> gauss_;
};

/// Standard normal matrix; column j drawn from rng.substream(j).
Matrix gaussian_matrix(const CounterRng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace ncp
