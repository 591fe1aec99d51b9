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

#include "ncp/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ncp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t numerical_rank(const Matrix& m, double tol) {
  if (m.cols() == 0) return 0;
  const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (!(s(0) > 0.0)) return 0;
  return estimate_rank(s, tol);
}

Matrix gather(const Matrix& d, const std::vector<std::size_t>& idx) {
  Matrix out(d.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = d.col(static_cast<Eigen::Index>(idx[k]));
  return out;
}

RecoveryResult rank_greedy(const Matrix& d, const ScoreVector& x, const RankGreedy& s) {
  if (s.target_rank < 1) throw std::invalid_argument("target rank must be at least 1");
  std::vector<std::size_t> selected;
  Matrix kept(d.rows(), 0);
  for (std::size_t j : rank_order(x.values)) {
    Matrix candidate(d.rows(), kept.cols() + 1);
    candidate << kept, d.col(static_cast<Eigen::Index>(j));
    if (numerical_rank(candidate, s.tol) > selected.size()) {
      kept = std::move(candidate);
      selected.push_back(j);
      if (selected.size() == s.target_rank) break;
    }
  }
  if (selected.size() < s.target_rank) throw std::runtime_error("insufficient rank");
  SubspaceBasis basis = orthonormalize(kept, s.tol);
  return {std::move(basis), std::move(selected), x};
}

RecoveryResult fixed_fraction(const Matrix& d, const ScoreVector& x, const FixedFraction& s) {
  if (!(s.keep_fraction > 0.0 && s.keep_fraction <= 1.0)) {
    throw std::invalid_argument("keep fraction must lie in (0, 1]");
  }
  const auto m2 = static_cast<std::size_t>(d.cols());
  auto keep = static_cast<std::size_t>(std::ceil(s.keep_fraction * static_cast<double>(m2) - 1e-12));
  keep = std::clamp<std::size_t>(keep, 1, m2);
  std::vector<std::size_t> order = rank_order(x.values);
  order.resize(keep);
  const Matrix y = gather(d, order);
  if (s.target_rank == 0) return {orthonormalize(y, kSelectionRankTol), std::move(order), x};

  if (numerical_rank(y, kSelectionRankTol) < s.target_rank) throw std::runtime_error("insufficient rank");
  Eigen::BDCSVD<Matrix> svd(y, Eigen::ComputeThinU);
  Matrix top = svd.matrixU().leftCols(static_cast<Eigen::Index>(s.target_rank));
  SubspaceBasis basis = orthonormalize(top, kSelectionRankTol);
  return {std::move(basis), std::move(order), x};
}

RecoveryResult adaptive_projection(const Matrix& d, const ScoreVector& x,
                                   const AdaptiveProjection& s) {
  if (s.target_rank < 1) throw std::invalid_argument("target rank must be at least 1");
  Matrix residual = d;
  std::vector<bool> active(static_cast<std::size_t>(d.cols()), true);
  Matrix q(d.rows(), 0);
  std::vector<std::size_t> selected;
  const std::vector<std::size_t> order = rank_order(x.values);

  while (selected.size() < s.target_rank) {
    auto next = std::find_if(order.begin(), order.end(), [&](std::size_t j) { return active[j]; });
    if (next == order.end()) throw std::runtime_error("insufficient rank");
    const auto j = static_cast<Eigen::Index>(*next);
    active[*next] = false;

    Vector dir = residual.col(j);
    // Second Gram-Schmidt pass against the accumulated basis.
    dir -= q * (q.transpose() * dir);
    const double norm = dir.norm();
    if (norm < s.tol) continue;
    dir /= norm;

    residual -= dir * (dir.transpose() * residual);
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = dir;
    selected.push_back(*next);

    for (Eigen::Index c = 0; c < residual.cols(); ++c) {
      if (active[static_cast<std::size_t>(c)] && residual.col(c).norm() < s.tol) {
        active[static_cast<std::size_t>(c)] = false;
      }
    }
  }
  SubspaceBasis basis(static_cast<std::size_t>(d.rows()), std::move(q));
  return {std::move(basis), std::move(selected), x};
}

void check_mask(std::size_t n, const std::vector<bool>& mask) {
  if (mask.size() != n) throw std::invalid_argument("mask length does not match score length");
  const auto outliers = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  if (outliers == 0) throw std::invalid_argument("mask has no outliers");
  if (outliers == n) throw std::invalid_argument("mask has no inliers");
}

// Returns {min over inliers, max over outliers}.
std::pair<double, double> inlier_min_outlier_max(const Vector& v, const std::vector<bool>& mask) {
  check_mask(static_cast<std::size_t>(v.size()), mask);
  double inlier_min = std::numeric_limits<double>::infinity();
  double outlier_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double value = v(static_cast<Eigen::Index>(i));
    if (mask[i]) {
      outlier_max = std::max(outlier_max, value);
    } else {
      inlier_min = std::min(inlier_min, value);
    }
  }
  return {inlier_min, outlier_max};
}

}  // namespace

std::string strategy_name(const SelectionStrategy& s) {
  return std::visit(Overloaded{[](const RankGreedy&) { return std::string("rank-greedy"); },
                               [](const FixedFraction&) { return std::string("fixed-fraction"); },
                               [](const AdaptiveProjection&) { return std::string("adaptive-projection"); }},
                    s);
}

std::vector<std::size_t> rank_order(const Vector& scores) {
  std::vector<std::size_t> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
  });
  return order;
}

RecoveryResult select_columns(const DataMatrix& d, const ScoreVector& x,
                              const SelectionStrategy& strategy) {
  if (static_cast<std::size_t>(x.values.size()) != d.cols()) {
    throw std::invalid_argument("score length does not match column count");
  }
  const Matrix normalized = normalize_columns(d).values();
  return std::visit(
      Overloaded{[&](const RankGreedy& s) { return rank_greedy(normalized, x, s); },
                 [&](const FixedFraction& s) { return fixed_fraction(normalized, x, s); },
                 [&](const AdaptiveProjection& s) { return adaptive_projection(normalized, x, s); }},
      strategy);
}

bool separation_holds(const Vector& scores, const std::vector<bool>& outlier_mask) {
  const auto [inlier_min, outlier_max] = inlier_min_outlier_max(scores, outlier_mask);
  return inlier_min > outlier_max;
}

bool trial_success_exact(const SubspaceBasis& u_true, const SubspaceBasis& u_hat) {
  return recovery_error(u_true, u_hat) < kExactRecoveryThreshold;
}

bool trial_success_residual(const DataMatrix& d, const SubspaceBasis& u_hat,
                            const std::vector<bool>& outlier_mask) {
  const Vector f = complement_residual_norms(d, u_hat);
  const auto [inlier_min, outlier_max] = inlier_min_outlier_max(-f, outlier_mask);
  // Negated residuals: max inlier f < min outlier f.
  return inlier_min > outlier_max;
}

}  // namespace ncp
