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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ncp {

enum class Theorem { kT1, kT2, kT3, kT4, kT5, kT6 };

std::string_view to_string(Theorem t);
Theorem parse_theorem(std::string_view id);

/// Inputs to a sufficient condition. Model parameters (psi, affinities,
/// t_min/t_max, vartheta) are measured from ground truth, not estimated.
struct ConditionParams {
  Theorem theorem = Theorem::kT1;
  double delta = 0.05;
  std::optional<double> n_i, n_o, r, m1, psi;
  // T2 / T3
  std::optional<double> r_o;
  std::optional<double> outlier_complement_affinity;  // ||U_o^T U_perp||, T2
  std::optional<double> inlier_outlier_affinity;      // ||U^T U_o||, T3
  // T4
  std::optional<double> sigma_n, t_min, t_max;
  // T5
  std::optional<double> eta, q_perp;
  // T6
  std::optional<double> m, d, vartheta;
  std::vector<double> n_i_k;
};

struct ConditionReport {
  Theorem theorem;
  double lhs;
  double rhs;
  bool holds;
  double probability_floor;
  std::vector<std::pair<std::string, double>> terms;  // insertion order kept
  std::vector<std::string> notes;

  double margin() const { return lhs - rhs; }
};

/// max( log_coeff * log(2 dim / delta), sqrt(sqrt_coeff * (n / dim) * log(2 dim / delta)) )
double deviation_term(double n, double dim, double delta, double log_coeff = 4.0 / 3.0,
                      double sqrt_coeff = 4.0);

/// Throws std::invalid_argument naming the first missing or invalid field.
ConditionReport evaluate_condition(const ConditionParams& p);

struct SphereExtremes {
  double sup;  // largest squared singular value of the sample matrix
  double inf;  // smallest squared singular value over R^N
};

/// Exact sup/inf of sum_i (u^T g_i)^2 over unit u for n uniform sphere
/// samples in R^N. Requires N > 2.
SphereExtremes sphere_concentration_extremes(std::size_t n, std::size_t dim, std::uint64_t seed);

/// Bounds n/N +/- deviation_term(n, N, delta) with probability 1 - delta.
std::pair<double, double> sphere_concentration_bounds(std::size_t n, std::size_t dim, double delta);

struct AbsProjectionCheck {
  double value;  // certified lower bound on sup_u sum_i |u^T g_i|
  double bound;  // n / sqrt(N) + 2 sqrt(n) + sqrt(2 n log(1/delta) / (N - 1))
  bool within;
};

inline constexpr std::size_t kAbsProjectionRandomProbes = 100;

/// Evaluates sum_i |u^T g_i| at every sample vector and at
/// kAbsProjectionRandomProbes random unit probes; reports the largest.
AbsProjectionCheck abs_projection_extreme(std::size_t n, std::size_t dim, std::uint64_t seed,
                                          double delta);
double abs_projection_bound(std::size_t n, std::size_t dim, double delta);

struct TExtremes {
  double t_min;
  double t_max;
};

/// Over inliers: ||S^-2 t_i|| / (t_i^T S^-2 t_i) with t_i = S v_i.
TExtremes extract_t_extremes(const SvdFactors& f, const std::vector<bool>& outlier_mask);

/// Smallest eigenvalue, restricted to U = direct sum of the clusters, of
/// sum_k U_k U_k^T.
double compute_vartheta(const std::vector<SubspaceBasis>& clusters);

}  // namespace ncp
