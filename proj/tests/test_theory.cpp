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

#include "ncp/synthgen.hpp"
#include "ncp/theory.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

namespace {

using ncp::ConditionParams;
using ncp::Matrix;
using ncp::SubspaceBasis;
using ncp::Theorem;
using ncp::Vector;

double term(const ncp::ConditionReport& r, const std::string& name) {
  for (const auto& [k, v] : r.terms) {
    if (k == name) return v;
  }
  ADD_FAILURE() << "missing term " << name;
  return 0.0;
}

ConditionParams t1(double n_i, double r, double n_o, double m1, double psi, double delta) {
  ConditionParams p;
  p.theorem = Theorem::kT1;
  p.n_i = n_i;
  p.r = r;
  p.n_o = n_o;
  p.m1 = m1;
  p.psi = psi;
  p.delta = delta;
  return p;
}

TEST(Theorem, ParseAndPrint) {
  EXPECT_EQ(ncp::parse_theorem("t4"), Theorem::kT4);
  EXPECT_EQ(ncp::to_string(Theorem::kT6), "T6");
  EXPECT_THROW(ncp::parse_theorem("T7"), std::invalid_argument);
}

TEST(DeviationTerm, Arithmetic) {
  const double l = std::log(2.0 * 10.0 / 0.05);
  EXPECT_DOUBLE_EQ(ncp::deviation_term(1000, 10, 0.05), std::max(4.0 / 3.0 * l, std::sqrt(4.0 * 100.0 * l)));
  EXPECT_DOUBLE_EQ(ncp::deviation_term(1, 10, 0.05), 4.0 / 3.0 * l);
}

TEST(T1, LargeInlierCountHolds) {
  const auto r = ncp::evaluate_condition(t1(1e9, 2, 10, 100, 1.2, 0.1));
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.margin(), 0.0);
  EXPECT_DOUBLE_EQ(r.probability_floor, 0.7);
}

TEST(T1, HandArithmetic) {
  const auto r = ncp::evaluate_condition(t1(400, 4, 50, 100, 1.5, 0.1));
  const double li = std::log(2.0 * 4 / 0.1), lo = std::log(2.0 * 100 / 0.1);
  const double lhs = 100.0 - std::max(4.0 / 3.0 * li, std::sqrt(4.0 * 100.0 * li));
  const double rhs = 0.5 * 50.0 / 100.0 + std::max(8.0 / 3.0 * lo, std::sqrt(16.0 * 0.5 * lo));
  EXPECT_NEAR(r.lhs, lhs, 1e-12);
  EXPECT_NEAR(r.rhs, rhs, 1e-12);
  EXPECT_EQ(r.holds, lhs > rhs);
  EXPECT_NEAR(term(r, "outlier_proximity"), 0.25, 1e-15);
}

TEST(T1, InlierCountEqualToRankFails) {
  const auto r = ncp::evaluate_condition(t1(4, 4, 10, 100, 1.2, 0.1));
  EXPECT_FALSE(r.holds);
  EXPECT_LT(r.lhs, 1.0);
}

TEST(T1, Monotonicity) {
  const auto base = ncp::evaluate_condition(t1(400, 4, 50, 100, 1.5, 0.05));
  EXPECT_GT(ncp::evaluate_condition(t1(800, 4, 50, 100, 1.5, 0.05)).lhs, base.lhs);
  EXPECT_GT(ncp::evaluate_condition(t1(400, 4, 50, 100, 2.0, 0.05)).rhs, base.rhs);
  EXPECT_GT(ncp::evaluate_condition(t1(400, 4, 5000, 100, 1.5, 0.05)).rhs, base.rhs);
}

TEST(T1, MissingFieldNamed) {
  ConditionParams p = t1(400, 4, 50, 100, 1.5, 0.05);
  p.psi.reset();
  try {
    ncp::evaluate_condition(p);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("psi"), std::string::npos);
  }
  p = t1(400, 4, 50, 100, 0.5, 0.05);
  EXPECT_THROW(ncp::evaluate_condition(p), std::invalid_argument);
  p = t1(400, 4, 50, 100, 1.5, 0.5);
  EXPECT_THROW(ncp::evaluate_condition(p), std::invalid_argument);  // 1 - 3 delta <= 0
}

TEST(T2, AffinityScalesOutlierSide) {
  ConditionParams p = t1(400, 4, 200, 100, 1.5, 0.05);
  p.theorem = Theorem::kT2;
  p.r_o = 10;
  p.outlier_complement_affinity = 0.0;
  EXPECT_DOUBLE_EQ(ncp::evaluate_condition(p).rhs, 0.0);
  p.outlier_complement_affinity = 0.5;
  const auto half = ncp::evaluate_condition(p);
  p.outlier_complement_affinity = 1.0;
  const auto full = ncp::evaluate_condition(p);
  EXPECT_NEAR(full.rhs, 2.0 * half.rhs, 1e-12);
  EXPECT_DOUBLE_EQ(full.probability_floor, 0.9);
  p.outlier_complement_affinity = 1.5;
  EXPECT_THROW(ncp::evaluate_condition(p), std::invalid_argument);
}

TEST(T3, AffinityLeakage) {
  ConditionParams p;
  p.theorem = Theorem::kT3;
  p.n_i = 400;
  p.r = 4;
  p.n_o = 20;
  p.r_o = 10;
  p.inlier_outlier_affinity = 0.0;
  const auto zero = ncp::evaluate_condition(p);
  EXPECT_DOUBLE_EQ(term(zero, "inlier_leakage"), 0.0);
  p.inlier_outlier_affinity = 1.0;
  const auto one = ncp::evaluate_condition(p);
  // With full affinity the leakage exceeds the inlier side.
  EXPECT_FALSE(one.holds);
}

TEST(T4, ReducesTowardT1StyleAtZeroNoise) {
  ConditionParams p = t1(400, 4, 50, 100, 1.5, 0.05);
  p.theorem = Theorem::kT4;
  p.sigma_n = 0.0;
  p.t_min = 1.0;
  p.t_max = 1.0;
  const auto r = ncp::evaluate_condition(p);
  EXPECT_DOUBLE_EQ(term(r, "noise_shrinkage"), 1.0);
  EXPECT_DOUBLE_EQ(term(r, "noise_leakage"), 0.0);
  EXPECT_DOUBLE_EQ(term(r, "inlier_noise_term"), 0.0);
  EXPECT_FALSE(r.notes.empty());
  EXPECT_DOUBLE_EQ(r.probability_floor, 0.85);

  p.sigma_n = 0.3;
  const auto noisy = ncp::evaluate_condition(p);
  EXPECT_LT(noisy.lhs, r.lhs);
  EXPECT_GT(noisy.rhs, r.rhs);
  p.t_min = 2.0;
  EXPECT_THROW(ncp::evaluate_condition(p), std::invalid_argument);
}

TEST(T5, LargeEtaApproachesAnalyticLimit) {
  ConditionParams p = t1(400, 2, 10, 100, 1.2, 0.1);
  p.theorem = Theorem::kT5;
  p.eta = 1e6;
  p.q_perp = 0.7;
  const auto r = ncp::evaluate_condition(p);
  // eta -> infinity: center and cross terms vanish, spread terms tend to
  // psi n_o / M1 + psi * max(4/3 log(2 M1/delta), sqrt(n_o/M1 log(2 M1/delta))).
  const double limit = 1.2 * 10.0 / 100.0 + 1.2 * ncp::deviation_term(10, 100, 0.1, 4.0 / 3.0, 1.0);
  EXPECT_NEAR(r.rhs / limit, 1.0, 0.01);
  EXPECT_DOUBLE_EQ(r.probability_floor, 0.6);
  EXPECT_NEAR(r.lhs, ncp::evaluate_condition(t1(400, 2, 10, 100, 1.2, 0.1)).lhs, 1e-12);
}

TEST(T5, CenterTermDominatesAtSmallEta) {
  ConditionParams p = t1(400, 2, 10, 100, 1.2, 0.1);
  p.theorem = Theorem::kT5;
  p.eta = 1e-3;
  p.q_perp = 1.0;
  const auto r = ncp::evaluate_condition(p);
  EXPECT_NEAR(term(r, "center_term"), 10.0 * 1.2, 1e-4);
}

TEST(T6, SmallestClusterDrivesLhs) {
  ConditionParams p;
  p.theorem = Theorem::kT6;
  p.n_o = 20;
  p.m1 = 100;
  p.psi = 1.2;
  p.m = 2;
  p.d = 2;
  p.vartheta = 0.8;
  p.n_i_k = {1000, 300};
  const auto r = ncp::evaluate_condition(p);
  const double l = std::log(2.0 * 4.0 / 0.05);
  const double small = 150.0 - std::max(4.0 / 3.0 * l, std::sqrt(4.0 * 150.0 * l));
  EXPECT_NEAR(r.lhs, 0.8 * small, 1e-10);
  p.n_i_k = {1000};
  EXPECT_THROW(ncp::evaluate_condition(p), std::invalid_argument);
  p.n_i_k = {1000, 300};
  p.vartheta = 3.0;
  EXPECT_THROW(ncp::evaluate_condition(p), std::invalid_argument);
}

TEST(SphereExtremes, SingleSample) {
  const auto e = ncp::sphere_concentration_extremes(1, 5, 3);
  EXPECT_NEAR(e.sup, 1.0, 1e-12);
  EXPECT_NEAR(e.inf, 0.0, 1e-12);
  EXPECT_THROW(ncp::sphere_concentration_extremes(10, 2, 1), std::invalid_argument);
}

TEST(SphereExtremes, TraceSandwich) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto e = ncp::sphere_concentration_extremes(500, 8, seed);
    EXPECT_LE(e.inf, 500.0 / 8.0 + 1e-9);
    EXPECT_GE(e.sup, 500.0 / 8.0 - 1e-9);
  }
}

TEST(SphereExtremes, MatchesSvdOracle) {
  const Matrix g = ncp::random_unit_vectors(6, 40, 11);
  const Eigen::JacobiSVD<Matrix> svd(g);
  const auto e = ncp::sphere_concentration_extremes(40, 6, 11);
  EXPECT_NEAR(e.sup, svd.singularValues()(0) * svd.singularValues()(0), 1e-9);
  EXPECT_NEAR(e.inf, svd.singularValues()(5) * svd.singularValues()(5), 1e-9);
}

TEST(SphereExtremes, WithinBoundsLargeSample) {
  const auto e = ncp::sphere_concentration_extremes(10000, 10, 1);
  const auto [lo, hi] = ncp::sphere_concentration_bounds(10000, 10, 0.05);
  EXPECT_LE(e.sup, hi);
  EXPECT_GE(e.inf, lo);
}

TEST(AbsProjection, SingleSampleAndMonotoneBound) {
  const auto c = ncp::abs_projection_extreme(1, 5, 2, 0.05);
  EXPECT_NEAR(c.value, 1.0, 1e-12);
  EXPECT_TRUE(c.within);
  double prev = 0.0;
  for (std::size_t n : {1, 10, 100, 1000, 10000}) {
    const double b = ncp::abs_projection_bound(n, 50, 0.05);
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(AbsProjection, ValueIsSumAtBestProbe) {
  // Brute-force: evaluate at every sample direction.
  const std::size_t n = 300, dim = 7;
  const Matrix g = ncp::random_unit_vectors(dim, n, 4);
  const double samples_best = (g.transpose() * g).cwiseAbs().colwise().sum().maxCoeff();
  const auto c = ncp::abs_projection_extreme(n, dim, 4, 0.05);
  EXPECT_GE(c.value, samples_best - 1e-9);
}

TEST(TExtremes, IdentityAndEqualSpectrum) {
  const auto f = ncp::thin_svd(ncp::DataMatrix(Matrix::Identity(3, 3)));
  const auto t = ncp::extract_t_extremes(f, {false, false, false});
  EXPECT_NEAR(t.t_min, 1.0, 1e-14);
  EXPECT_NEAR(t.t_max, 1.0, 1e-14);
  EXPECT_THROW(ncp::extract_t_extremes(f, {true, true, true}), std::invalid_argument);
}

TEST(TExtremes, EqualSingularValuesGiveInverseNorm) {
  // Orthogonal columns scaled so all singular values equal 2: D = 2 Q.
  const Matrix q = oracle::random_orthogonal(4, 9);
  const auto f = ncp::thin_svd(ncp::DataMatrix(2.0 * q));
  const auto t = ncp::extract_t_extremes(f, {false, false, true, false});
  const Vector tn = (f.sigma.asDiagonal() * f.right).colwise().norm();
  EXPECT_NEAR(t.t_min, 1.0 / tn.maxCoeff(), 1e-12);
  EXPECT_NEAR(t.t_max, 1.0 / tn.minCoeff(), 1e-12);
}

TEST(TExtremes, OutlierDominatedNearOne) {
  const auto ds = ncp::generate({ncp::Unstructured{50, 4, 100, 2000}}, 3);
  const auto f = ncp::thin_svd(ds.d);
  const auto t = ncp::extract_t_extremes(f, ds.outlier_mask);
  EXPECT_GT(t.t_min, 0.8);
  EXPECT_LT(t.t_max, 1.25);
  EXPECT_LE(t.t_min, t.t_max);
}

TEST(Vartheta, SingleAndOrthogonalClusters) {
  const SubspaceBasis one = ncp::random_subspace(10, 3, 1);
  EXPECT_NEAR(ncp::compute_vartheta({one}), 1.0, 1e-12);
  const Matrix id = Matrix::Identity(10, 10);
  EXPECT_NEAR(ncp::compute_vartheta({SubspaceBasis(10, id.leftCols(2)), SubspaceBasis(10, id.middleCols(2, 2))}),
              1.0, 1e-12);
}

TEST(Vartheta, KnownPrincipalAngles) {
  // U1 = span(e1, e2); U2 = span(cos a e1 + sin a e3, cos b e2 + sin b e4).
  // On span(e1, e3) the projector sum has eigenvalues 1 +/- cos a; likewise for b.
  const double a = 0.4, b = 1.1;
  const Matrix id = Matrix::Identity(10, 10);
  Matrix u2(10, 2);
  u2.col(0) = std::cos(a) * id.col(0) + std::sin(a) * id.col(2);
  u2.col(1) = std::cos(b) * id.col(1) + std::sin(b) * id.col(3);
  const double got = ncp::compute_vartheta({SubspaceBasis(10, id.leftCols(2)), SubspaceBasis(10, u2)});
  EXPECT_NEAR(got, 1.0 - std::max(std::cos(a), std::cos(b)), 1e-12);
}

TEST(Vartheta, DegenerateRejected) {
  const SubspaceBasis s = ncp::random_subspace(10, 2, 3);
  EXPECT_THROW(ncp::compute_vartheta({}), std::invalid_argument);
  EXPECT_THROW(ncp::compute_vartheta({s, s}), std::domain_error);
}

}  // namespace
