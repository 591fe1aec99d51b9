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
#include "ncp/scoring.hpp"

#include <string>
#include <variant>
#include <vector>

namespace ncp {

inline constexpr double kSelectionRankTol = 1e-8;
inline constexpr double kExactRecoveryThreshold = 1e-3;

/// Walk columns by descending score; keep one only if it raises the numerical
/// rank of the kept set. Stops at target_rank.
struct RankGreedy {
  std::size_t target_rank;
  double tol = kSelectionRankTol;
};

/// Keep the top ceil(keep_fraction * M2) columns. With target_rank == 0 the
/// basis spans all of them; otherwise it is their top target_rank left
/// singular vectors, which is what noisy data needs.
struct FixedFraction {
  double keep_fraction = 0.5;
  std::size_t target_rank = 0;
};

/// Repeatedly take the best remaining column, project the data onto the
/// complement of the span so far, and drop columns whose residual falls
/// below tol.
struct AdaptiveProjection {
  std::size_t target_rank;
  double tol = kSelectionRankTol;
};

using SelectionStrategy = std::variant<RankGreedy, FixedFraction, AdaptiveProjection>;

std::string strategy_name(const SelectionStrategy& s);

struct RecoveryResult {
  SubspaceBasis basis;
  std::vector<std::size_t> selected;
  ScoreVector scores;
};

/// Column indices sorted by descending score, ties broken by lower index.
std::vector<std::size_t> rank_order(const Vector& scores);

/// Throws std::runtime_error("insufficient rank") when the target rank cannot
/// be reached.
RecoveryResult select_columns(const DataMatrix& d, const ScoreVector& x,
                              const SelectionStrategy& strategy);

/// Strict separation: min score over inliers > max score over outliers.
/// mask[i] is true for outliers.
bool separation_holds(const Vector& scores, const std::vector<bool>& outlier_mask);

bool trial_success_exact(const SubspaceBasis& u_true, const SubspaceBasis& u_hat);

/// max inlier residual to U_hat < min outlier residual.
bool trial_success_residual(const DataMatrix& d, const SubspaceBasis& u_hat,
                            const std::vector<bool>& outlier_mask);

}  // namespace ncp
