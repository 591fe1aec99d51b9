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
#include "ncp/synthgen.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

namespace {

using ncp::DataMatrix;
using ncp::Matrix;
using ncp::Method;
using ncp::ScoreVector;
using ncp::SubspaceBasis;
using ncp::Vector;

ScoreVector scores(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double s : v) x(i++) = s;
  return {Method::kAncp, x};
}

std::vector<std::size_t> selected(const DataMatrix& d, const ScoreVector& x, const ncp::SelectionStrategy& s) {
  return ncp::select_columns(d, x, s).selected;
}

TEST(RankOrder, DescendingWithLowIndexTies) {
  const auto order = ncp::rank_order((Vector(5) << 1, 3, 3, 0, 3).finished());
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 2, 4, 0, 3}));
}

TEST(RankGreedy, SpecExamples) {
  EXPECT_EQ(selected(DataMatrix(Matrix::Identity(3, 3)), scores({3, 2, 1}), ncp::RankGreedy{2}),
            (std::vector<std::size_t>{0, 1}));
  Matrix d(2, 3);
  d << 1, 1, 0,
       0, 0, 1;
  EXPECT_EQ(selected(DataMatrix(d), scores({2, 2, 1}), ncp::RankGreedy{2}), (std::vector<std::size_t>{0, 2}));
}

TEST(RankGreedy, InsufficientRank) {
  Matrix d(3, 3);
  d << 1, 2, 3,
       0, 0, 0,
       0, 0, 0;
  try {
    ncp::select_columns(DataMatrix(d), scores({1, 2, 3}), ncp::RankGreedy{2});
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "insufficient rank");
  }
  EXPECT_THROW(ncp::select_columns(DataMatrix(d), scores({1, 2, 3}), ncp::RankGreedy{0}), std::invalid_argument);
}

TEST(SelectColumns, LengthMismatch) {
  EXPECT_THROW(ncp::select_columns(DataMatrix(Matrix::Identity(3, 3)), scores({1, 2}), ncp::RankGreedy{1}),
               std::invalid_argument);
}

TEST(RankGreedy, RecoversUnstructured) {
  const auto ds = ncp::generate({ncp::Unstructured{50, 4, 100, 500}}, 11);
  const auto x = ncp::score(ds.d, Method::kSncp);
  const auto rec = ncp::select_columns(ds.d, x, ncp::RankGreedy{4});
  EXPECT_EQ(rec.basis.dim(), 4u);
  EXPECT_LT(ncp::recovery_error(ds.u_true, rec.basis), 1e-3);
  EXPECT_TRUE(ncp::trial_success_exact(ds.u_true, rec.basis));
  const std::set<std::size_t> distinct(rec.selected.begin(), rec.selected.end());
  EXPECT_EQ(distinct.size(), rec.selected.size());
}

TEST(RankGreedy, SeparationImpliesInlierSelection) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto ds = ncp::generate({ncp::Unstructured{30, 3, 40, 80}}, seed);
    const auto x = ncp::score(ds.d, Method::kAncp);
    if (!ncp::separation_holds(x.values, ds.outlier_mask)) continue;
    ++checked;
    const auto rec = ncp::select_columns(ds.d, x, ncp::RankGreedy{3});
    for (std::size_t j : rec.selected) EXPECT_FALSE(ds.outlier_mask[j]) << "seed " << seed;
    EXPECT_TRUE(ncp::trial_success_exact(ds.u_true, rec.basis));
  }
  EXPECT_GT(checked, 10);
}

TEST(RankGreedy, Deterministic) {
  const auto ds = ncp::generate({ncp::Unstructured{20, 3, 30, 30}}, 3);
  const auto x = ncp::score(ds.d, Method::kSncp);
  const auto a = ncp::select_columns(ds.d, x, ncp::RankGreedy{3});
  const auto b = ncp::select_columns(ds.d, x, ncp::RankGreedy{3});
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.basis.basis(), b.basis.basis());
}

TEST(FixedFraction, KeepsCeilFraction) {
  const DataMatrix d(Matrix::Identity(5, 5));
  const auto rec = ncp::select_columns(d, scores({5, 4, 3, 2, 1}), ncp::FixedFraction{0.5});
  EXPECT_EQ(rec.selected, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(rec.basis.dim(), 3u);
  EXPECT_THROW(ncp::select_columns(d, scores({5, 4, 3, 2, 1}), ncp::FixedFraction{0.0}), std::invalid_argument);
  EXPECT_THROW(ncp::select_columns(d, scores({5, 4, 3, 2, 1}), ncp::FixedFraction{1.5}), std::invalid_argument);
}

TEST(FixedFraction, TargetRankTakesTopDirections) {
  // Three columns along e1 (with slight tilt) and one along e2; rank-1 summary is ~e1.
  Matrix d(2, 4);
  d << 1, 1, 1, 0,
       0.01, -0.01, 0, 1;
  const auto rec = ncp::select_columns(DataMatrix(d), scores({4, 3, 2, 1}), ncp::FixedFraction{1.0, 1});
  ASSERT_EQ(rec.basis.dim(), 1u);
  EXPECT_GT(std::abs(rec.basis.basis()(0, 0)), 0.99);
  EXPECT_THROW(ncp::select_columns(DataMatrix(d), scores({4, 3, 2, 1}), ncp::FixedFraction{0.25, 2}),
               std::runtime_error);
}

TEST(FixedFraction, NoisyDataResidualSeparation) {
  auto base = std::make_shared<const ncp::ModelSpec>(ncp::ModelSpec{ncp::OutlierSubspace{200, 5, 10, 100, 100}});
  const auto ds = ncp::generate({ncp::NoisyInliers{base, 0.1}}, 4);
  const auto d = ncp::normalize_columns(ds.d);
  const auto x = ncp::score(d, Method::kSncp, ncp::kNoisyRankRatio);
  const auto rec = ncp::select_columns(d, x, ncp::FixedFraction{0.5, 5});
  EXPECT_TRUE(ncp::trial_success_residual(d, rec.basis, ds.outlier_mask));
}

TEST(AdaptiveProjection, SkipsRedundantColumns) {
  Matrix d(3, 4);
  d << 1, 1, 0, 0,
       0, 0, 1, 0,
       0, 0, 0, 1;
  const auto rec = ncp::select_columns(DataMatrix(d), scores({4, 3, 2, 1}), ncp::AdaptiveProjection{3});
  EXPECT_EQ(rec.selected, (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(rec.basis.dim(), 3u);
  EXPECT_THROW(ncp::select_columns(DataMatrix(d), scores({4, 3, 2, 1}), ncp::AdaptiveProjection{4}),
               std::runtime_error);
}

TEST(AdaptiveProjection, AgreesWithRankGreedyOnCleanData) {
  const auto ds = ncp::generate({ncp::Unstructured{40, 4, 60, 200}}, 8);
  const auto x = ncp::score(ds.d, Method::kSncp);
  const auto a = ncp::select_columns(ds.d, x, ncp::RankGreedy{4});
  const auto b = ncp::select_columns(ds.d, x, ncp::AdaptiveProjection{4});
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_LT(ncp::recovery_error(a.basis, b.basis), 1e-10);
}

TEST(StrategyName, Strings) {
  EXPECT_EQ(ncp::strategy_name(ncp::RankGreedy{1}), "rank-greedy");
  EXPECT_EQ(ncp::strategy_name(ncp::FixedFraction{}), "fixed-fraction");
  EXPECT_EQ(ncp::strategy_name(ncp::AdaptiveProjection{1}), "adaptive-projection");
}

TEST(Separation, SpecExamples) {
  EXPECT_TRUE(ncp::separation_holds((Vector(4) << 1, 1, 9, 9).finished(), {true, true, false, false}));
  EXPECT_FALSE(ncp::separation_holds((Vector(4) << 5, 1, 4, 9).finished(), {true, false, false, false}));
  EXPECT_FALSE(ncp::separation_holds((Vector(2) << 3, 3).finished(), {true, false}));
}

TEST(Separation, MaskErrors) {
  const Vector x = Vector::Ones(3);
  EXPECT_THROW(ncp::separation_holds(x, {true, true, true}), std::invalid_argument);
  EXPECT_THROW(ncp::separation_holds(x, {false, false, false}), std::invalid_argument);
  EXPECT_THROW(ncp::separation_holds(x, {true, false}), std::invalid_argument);
}

TEST(TrialSuccess, Exact) {
  const SubspaceBasis u = ncp::orthonormalize(oracle::gaussian(10, 2, 1));
  EXPECT_TRUE(ncp::trial_success_exact(u, u));
  const Matrix p = Matrix::Identity(10, 10) - u.basis() * u.basis().transpose();
  const SubspaceBasis orth = ncp::orthonormalize(p * oracle::gaussian(10, 2, 2));
  EXPECT_FALSE(ncp::trial_success_exact(u, orth));
}

TEST(TrialSuccess, Residual) {
  // Inliers on span(e1), outliers off it.
  Matrix in(3, 4);
  in << 1, 1, 0.5, 0.2,
        0, 0, 0.8, 0.9,
        0, 0, 0.1, 0.3;
  const std::vector<bool> mask{false, false, true, true};
  Matrix e1 = Matrix::Zero(3, 1);
  e1(0, 0) = 1;
  EXPECT_TRUE(ncp::trial_success_residual(DataMatrix(in), SubspaceBasis(3, e1), mask));
  // A basis orthogonal to every column makes all residuals equal norms.
  Matrix dz = Matrix::Zero(4, 3);
  dz.topRows(3) = Matrix::Identity(3, 3);
  Matrix e4 = Matrix::Zero(4, 1);
  e4(3, 0) = 1;
  EXPECT_FALSE(ncp::trial_success_residual(DataMatrix(dz), SubspaceBasis(4, e4), {true, false, false}));
}

}  // namespace
