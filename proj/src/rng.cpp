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

#include "ncp/rng.hpp"

namespace ncp {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed + kGamma);
  for (std::uint64_t word : path) h = mix64(h ^ mix64(word + kGamma));
  return h;
}

std::uint64_t derive_key(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, then folded with the seed.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return derive_key(seed, {h});
}

CounterRng::result_type CounterRng::operator()() {
  return mix64(key_ + (++counter_) * kGamma);
}

CounterRng CounterRng::substream(std::uint64_t index) const {
  return CounterRng(derive_key(key_, {index}));
}

CounterRng CounterRng::substream(std::string_view label) const {
  return CounterRng(derive_key(key_, label));
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() { return gauss_(*this); }

Matrix gaussian_matrix(const CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    CounterRng col = rng.substream(static_cast<std::uint64_t>(j));
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = col.normal();
  }
  return g;
}

}  // namespace ncp
