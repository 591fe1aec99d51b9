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
#include "ncp/rng.hpp"
#include "ncp/synthgen.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace {

using ncp::Dataset;
using ncp::Matrix;
using ncp::ModelSpec;
using ncp::SubspaceBasis;
using ncp::Vector;

double max_inlier_residual(const Dataset& ds) {
  const Vector f = ncp::complement_residual_norms(ds.d, ds.u_true);
  double worst = 0.0;
  for (std::size_t j = 0; j < ds.outlier_mask.size(); ++j) {
    if (!ds.outlier_mask[j]) worst = std::max(worst, f(static_cast<Eigen::Index>(j)));
  }
  return worst;
}

void expect_outliers_first(const Dataset& ds, std::size_t n_o) {
  ASSERT_EQ(ds.outlier_count(), n_o);
  for (std::size_t j = 0; j < ds.outlier_mask.size(); ++j) EXPECT_EQ(ds.outlier_mask[j], j < n_o);
}

void expect_unit_columns(const Dataset& ds, double tol = 1e-12) {
  EXPECT_LE((ds.d.values().colwise().norm().array() - 1.0).abs().maxCoeff(), tol);
}

std::shared_ptr<const ModelSpec> share(ModelSpec s) { return std::make_shared<const ModelSpec>(std::move(s)); }

TEST(Rng, CounterStreamsAreReproducibleAndDistinct) {
  ncp::CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  EXPECT_NE(ncp::derive_key(1, {2, 3}), ncp::derive_key(1, {3, 2}));
  EXPECT_NE(ncp::derive_key(1, "a"), ncp::derive_key(1, "b"));
}

TEST(Rng, UniformAndNormalMoments) {
  ncp::CounterRng g(7);
  double su = 0, sn = 0, sn2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = g.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(Rng, ColumnSubstreamsIndependentOfShape) {
  const ncp::CounterRng root(9);
  const Matrix wide = ncp::gaussian_matrix(root, 4, 10);
  const Matrix narrow = ncp::gaussian_matrix(root, 4, 3);
  EXPECT_EQ(wide.leftCols(3), narrow);
}

TEST(RandomUnitVectors, OneDimensionalSphere) {
  const Matrix m = ncp::random_unit_vectors(1, 50, 3);
  for (Eigen::Index j = 0; j < m.cols(); ++j) EXPECT_EQ(std::abs(m(0, j)), 1.0);
}

TEST(RandomUnitVectors, UnitNormsAndProjectionMean) {
  const Matrix g = ncp::random_unit_vectors(10, 10000, 5);
  EXPECT_LE((g.colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-12);
  const Matrix u = oracle::column_space(oracle::gaussian(10, 3, 1));
  const double mean = (u.transpose() * g).colwise().squaredNorm().mean();
  EXPECT_NEAR(mean, 0.3, 0.02);
}

TEST(RandomSubspace, Basics) {
  EXPECT_EQ(ncp::random_subspace(5, 5, 1).dim(), 5u);
  const SubspaceBasis b = ncp::random_subspace(30, 4, 2);
  EXPECT_LE((b.basis().transpose() * b.basis() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(ncp::random_subspace(3, 4, 1), std::invalid_argument);
}

TEST(RandomSubspace, IndependentDrawsAreNotAligned) {
  int aligned = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SubspaceBasis a = ncp::random_subspace(50, 4, 2 * seed);
    const SubspaceBasis b = ncp::random_subspace(50, 4, 2 * seed + 1);
    if (ncp::affinity_norm(a, b) >= 0.9) ++aligned;
  }
  EXPECT_LE(aligned, 2);
}

TEST(Generate, UnstructuredConstruction) {
  const Dataset ds = ncp::generate({ncp::Unstructured{50, 4, 100, 500}}, 7);
  EXPECT_EQ(ds.d.rows(), 50u);
  EXPECT_EQ(ds.d.cols(), 600u);
  expect_outliers_first(ds, 500);
  expect_unit_columns(ds);
  EXPECT_LT(max_inlier_residual(ds), 1e-10);
  ASSERT_TRUE(ds.psi.has_value());
  EXPECT_DOUBLE_EQ(*ds.psi, ncp::compute_psi(ds));
  EXPECT_FALSE(ds.snr.has_value());
}

TEST(Generate, BitIdenticalForSameSeed) {
  const ModelSpec spec{ncp::ClusteredOutliers{30, 3, 40, 20, 0.5}};
  const Dataset a = ncp::generate(spec, 99);
  const Dataset b = ncp::generate(spec, 99);
  const Dataset c = ncp::generate(spec, 100);
  EXPECT_EQ(a.d.values(), b.d.values());
  EXPECT_EQ(a.u_true.basis(), b.u_true.basis());
  EXPECT_NE(a.d.values(), c.d.values());
}

TEST(Generate, OutlierSubspaceOutliersLieInUo) {
  const Dataset ds = ncp::generate({ncp::OutlierSubspace{40, 3, 5, 50, 30}}, 2);
  expect_outliers_first(ds, 30);
  expect_unit_columns(ds);
  ASSERT_TRUE(ds.outlier_basis.has_value());
  const Vector f = ncp::complement_residual_norms(ds.d, *ds.outlier_basis);
  EXPECT_LT(f.head(30).maxCoeff(), 1e-10);
  EXPECT_LT(max_inlier_residual(ds), 1e-10);
}

TEST(Generate, NoisyInliersSnr) {
  const Dataset ds = ncp::generate({ncp::NoisyInliers{share({ncp::Unstructured{50, 4, 400, 100}}), 0.5}}, 3);
  ASSERT_TRUE(ds.snr.has_value());
  EXPECT_NEAR(*ds.snr, 1.0 / 0.25, 0.1 * 4.0);
  expect_outliers_first(ds, 100);
  // Inlier norms stay within [1 - sigma, 1 + sigma]; columns are not renormalized.
  const Vector norms = ds.d.values().colwise().norm().transpose();
  EXPECT_GE(norms.tail(400).minCoeff(), 0.5);
  EXPECT_LE(norms.tail(400).maxCoeff(), 1.5);
  EXPECT_GT((norms.tail(400).array() - 1.0).abs().maxCoeff(), 1e-6);
}

TEST(Generate, NoisyZeroSigmaKeepsBase) {
  const ModelSpec base{ncp::Unstructured{20, 2, 30, 10}};
  const Dataset clean = ncp::generate({ncp::NoisyInliers{share(base), 0.0}}, 4);
  EXPECT_LT(max_inlier_residual(clean), 1e-10);
}

TEST(Generate, ClusteredOutliersLargeEtaLooksUnstructured) {
  const std::size_t n_o = 400;
  const Dataset clustered = ncp::generate({ncp::ClusteredOutliers{50, 4, 50, n_o, 1e6}}, 8);
  const Dataset uniform = ncp::generate({ncp::Unstructured{50, 4, 50, n_o}}, 8);
  auto mean_abs_cos = [&](const Dataset& ds) {
    const Matrix b = ds.d.values().leftCols(static_cast<Eigen::Index>(n_o));
    const Matrix g = (b.transpose() * b).cwiseAbs();
    return (g.sum() - g.trace()) / static_cast<double>(n_o * (n_o - 1));
  };
  EXPECT_NEAR(mean_abs_cos(clustered), mean_abs_cos(uniform), 0.01);
}

TEST(Generate, ClusteredOutlierNormsFollowMixing) {
  // ||q + eta f|| / sqrt(1 + eta^2) lies in [|1 - eta|, 1 + eta] / sqrt(1 + eta^2).
  const double eta = 0.5;
  const Dataset ds = ncp::generate({ncp::ClusteredOutliers{20, 3, 30, 50, eta}}, 6);
  const Vector norms = ds.d.values().leftCols(50).colwise().norm().transpose();
  const double scale = std::sqrt(1.0 + eta * eta);
  EXPECT_GE(norms.minCoeff(), (1.0 - eta) / scale - 1e-12);
  EXPECT_LE(norms.maxCoeff(), (1.0 + eta) / scale + 1e-12);
}

TEST(Generate, ClusteredOutliersCenterOffU) {
  const Dataset ds = ncp::generate({ncp::ClusteredOutliers{20, 3, 30, 10, 0.1}}, 5);
  ASSERT_TRUE(ds.cluster_center.has_value());
  const Vector q = *ds.cluster_center;
  EXPECT_NEAR(q.norm(), 1.0, 1e-12);
  const Matrix u = ds.u_true.basis();
  EXPECT_GE((q - u * (u.transpose() * q)).norm(), 0.1);
  EXPECT_FALSE(ds.notes.empty());
}

TEST(Generate, UnionInliersSpanDirectSum) {
  const Dataset ds = ncp::generate({ncp::UnionInliers{60, 3, 4, {20, 30, 25}, 40}}, 6);
  EXPECT_EQ(ds.u_true.dim(), 12u);
  ASSERT_EQ(ds.cluster_bases.size(), 3u);
  expect_outliers_first(ds, 40);
  expect_unit_columns(ds);
  // Each inlier lies in exactly one cluster subspace, in order.
  Eigen::Index col = 40;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t count = std::vector<std::size_t>{20, 30, 25}[k];
    const Matrix block = ds.d.values().middleCols(col, static_cast<Eigen::Index>(count));
    EXPECT_LT(ncp::complement_residual_norms(block, ds.cluster_bases[k]).maxCoeff(), 1e-10);
    col += static_cast<Eigen::Index>(count);
  }
}

TEST(Generate, ClusteredInliers) {
  const Dataset ds = ncp::generate({ncp::ClusteredInliers{40, 5, 60, 0.2, 30, 10}}, 9);
  expect_outliers_first(ds, 30);
  expect_unit_columns(ds);
  EXPECT_LT(max_inlier_residual(ds), 1e-10);
  // Tight cluster: inliers strongly correlated with each other.
  const Matrix a = ds.d.values().rightCols(60);
  EXPECT_GT((a.transpose() * a).cwiseAbs().minCoeff(), 0.5);
}

TEST(Generate, NearSubspaceOutliers) {
  const Dataset ds = ncp::generate({ncp::NearSubspaceOutliers{100, 8, 180, 40, 4}}, 10);
  expect_outliers_first(ds, 40);
  expect_unit_columns(ds);
  ASSERT_TRUE(ds.outlier_basis.has_value());
  EXPECT_EQ(ds.outlier_basis->dim(), 12u);
  const Vector f = ncp::complement_residual_norms(ds.d, *ds.outlier_basis);
  EXPECT_LT(f.maxCoeff(), 1e-10);
}

TEST(Generate, InvalidSpecs) {
  EXPECT_THROW(ncp::generate({ncp::Unstructured{5, 6, 10, 10}}, 1), std::invalid_argument);
  EXPECT_THROW(ncp::generate({ncp::ClusteredOutliers{10, 2, 5, 5, 0.0}}, 1), std::invalid_argument);
  EXPECT_THROW(ncp::generate({ncp::UnionInliers{10, 3, 4, {1, 1, 1}, 5}}, 1), std::invalid_argument);
  EXPECT_THROW(ncp::generate({ncp::UnionInliers{20, 3, 4, {1, 1}, 5}}, 1), std::invalid_argument);
  EXPECT_THROW(ncp::generate({ncp::ClusteredInliers{10, 2, 5, -1.0}}, 1), std::invalid_argument);
  EXPECT_THROW(ncp::generate({ncp::NoisyInliers{share({ncp::Unstructured{10, 2, 5, 5}}), -0.1}}, 1),
               std::invalid_argument);
  EXPECT_THROW(ncp::generate({ncp::NoisyInliers{nullptr, 0.1}}, 1), std::invalid_argument);
}

TEST(PermutedRegression, CleanColumnsInSubspace) {
  const Dataset ds = ncp::permuted_regression_dataset(10, 10, 200, 50, 5);
  expect_outliers_first(ds, 50);
  expect_unit_columns(ds);
  const Vector f = ncp::complement_residual_norms(ds.d, ds.u_true);
  EXPECT_LT(f.tail(200).maxCoeff(), 1e-10);
  EXPECT_GT(f.head(50).minCoeff(), 1e-6);
}

TEST(PermutedRegression, NoDisplacement) {
  const Dataset ds = ncp::permuted_regression_dataset(4, 3, 30, 0, 1);
  EXPECT_EQ(ds.outlier_count(), 0u);
  const auto f = ncp::thin_svd(ds.d);
  EXPECT_EQ(f.effective_rank(), 4u);
  EXPECT_FALSE(ds.psi.has_value());
}

TEST(PermutedRegression, InvalidCounts) {
  EXPECT_THROW(ncp::permuted_regression_dataset(4, 3, 30, 1, 1), std::invalid_argument);
  EXPECT_THROW(ncp::permuted_regression_dataset(10, 3, 5, 3, 1), std::invalid_argument);
}

TEST(PermutedRegression, EndToEndRecovery) {
  const Dataset ds = ncp::permuted_regression_dataset(10, 10, 200, 50, 5);
  const auto x = ncp::score(ds.d, ncp::Method::kSncp);
  const auto rec = ncp::select_columns(ds.d, x, ncp::RankGreedy{10});
  EXPECT_LT(ncp::recovery_error(ds.u_true, rec.basis), 1e-3);
}

TEST(Psi, SimpleCases) {
  const SubspaceBasis u(3, Matrix::Identity(3, 3).leftCols(1));
  Matrix b(3, 1);
  b << 0, 1, 0;
  EXPECT_DOUBLE_EQ(ncp::compute_psi(b, u), 1.0);
  // ||(I - UU^T) b||^2 = 0.25.
  b << std::sqrt(0.75), 0.5, 0;
  EXPECT_NEAR(ncp::compute_psi(b, u), 4.0, 1e-12);
  b << 1, 0, 0;
  try {
    ncp::compute_psi(b, u);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "degenerate outlier (psi infinite)");
  }
}

TEST(Psi, ExpectedComplementEnergy) {
  // E ||b^T R||^2 = (M1 - r) / M1 = 0.92 for M1 = 50, r = 4.
  double total = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset ds = ncp::generate({ncp::Unstructured{50, 4, 10, 500}}, seed);
    const Vector f = ncp::complement_residual_norms(ds.d.values().leftCols(500), ds.u_true);
    total += f.squaredNorm();
    count += 500;
    EXPECT_GE(*ds.psi, 1.0);
  }
  EXPECT_NEAR(total / static_cast<double>(count), 0.92, 0.02 * 0.92);
}

TEST(ModelName, Strings) {
  EXPECT_EQ(ncp::model_name({ncp::Unstructured{1, 1, 1, 0}}), "unstructured");
  EXPECT_EQ(ncp::model_name({ncp::PermutedRegression{1, 1, 2, 0}}), "perm-reg");
}

}  // namespace
