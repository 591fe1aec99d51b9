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

#include <optional>
#include <string>
#include <string_view>

namespace ncp {

enum class Method { kAncp, kSncp, kCop };

std::string_view to_string(Method m);
/// Accepts "ancp", "sncp", "cop" in any case.
Method parse_method(std::string_view name);

/// Normalized Coherence Values (ANCP, SNCP) or Coherence Values (CoP), one
/// per data column. Larger means more inlier-like.
struct ScoreVector {
  Method method;
  Vector values;
};

/// Innovation direction c minimizing ||D^T c|| subject to c^T d_i = 1.
struct InnovationDirection {
  std::size_t index;
  Vector direction;
  double value;  // ||D^T c||^2
};

/// Scales every column to unit l2 norm. Throws std::domain_error naming the
/// first all-zero column.
DataMatrix normalize_columns(const DataMatrix& d);

/// x(i) = 1 / ||v_i||^2 (inverse leverage).
ScoreVector ancp_scores(const Matrix& right);

/// x(i) = sum_j cos^2(v_i, v_j), self term included. Works on column blocks
/// so memory stays O(r_d * M2).
ScoreVector sncp_scores(const Matrix& right);

/// x(i) = sum_j (d_i^T d_j)^2 on a column-normalized matrix.
ScoreVector cop_scores(const DataMatrix& normalized);

/// Closed-form minimizer expressed in SVD coordinates:
///   c = U' S^-2 t_i / (t_i^T S^-2 t_i),  t_i = S v_i
/// which coincides with (DD^T)^-1 d_i / (d_i^T (DD^T)^-1 d_i) when D has full
/// row rank and stays defined otherwise.
InnovationDirection innovation_direction(const SvdFactors& f, std::size_t i);

/// Full scoring pipeline: normalize, thin SVD (for ANCP/SNCP), score.
/// rank_tol selects r_d as the count of singular values above rank_tol * s1;
/// pass kNoisyRankRatio for noisy data.
ScoreVector score(const DataMatrix& d, Method method, double rank_tol = kDefaultRankTol);

}  // namespace ncp
