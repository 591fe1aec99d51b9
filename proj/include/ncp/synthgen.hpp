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
#include "ncp/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ncp {

struct ModelSpec;

/// Inliers uniform on U ∩ S^{M1-1}, outliers uniform on S^{M1-1}.
struct Unstructured {
  std::size_t m1, r, n_i, n_o;
};

/// Outliers uniform on U_o ∩ S^{M1-1} for a random r_o-dimensional U_o.
struct OutlierSubspace {
  std::size_t m1, r, r_o, n_i, n_o;
};

/// Inlier block replaced by (A + sigma_n N) / sqrt(1 + sigma_n^2) with N's
/// columns uniform on the sphere. Columns are not renormalized afterwards.
struct NoisyInliers {
  std::shared_ptr<const ModelSpec> base;
  double sigma_n;
};

/// Outliers b_i = (q + eta f_i) / sqrt(1 + eta^2) around a hidden unit q
/// with ||(I - UU^T) q|| >= 0.1.
struct ClusteredOutliers {
  std::size_t m1, r, n_i, n_o;
  double eta;
};

/// Inliers in a union of m random d-dimensional subspaces whose direct sum
/// is U; outliers uniform on the sphere.
struct UnionInliers {
  std::size_t m1, m, d;
  std::vector<std::size_t> n_i_k;
  std::size_t n_o;
};

/// Inliers a_i = U(w + gamma z_i) / ||U(w + gamma z_i)||. Optional outliers:
/// r_o == 0 draws them on the sphere, r_o > 0 inside a random r_o-dim subspace.
struct ClusteredInliers {
  std::size_t m1, r, n_i;
  double gamma;
  std::size_t n_o = 0;
  std::size_t r_o = 0;
};

/// Outliers [U H] g_i normalized, with H a random h_dim-dimensional subspace
/// and g_i standard Gaussian; outliers sit close to U.
struct NearSubspaceOutliers {
  std::size_t m1 = 100;
  std::size_t r, n_i, n_o;
  std::size_t h_dim = 4;
};

/// Z = [X; Y] with Y = Theta X and n_o columns of Y displaced by a derangement.
struct PermutedRegression {
  std::size_t d, m, n_i, n_o;
};

struct ModelSpec {
  std::variant<Unstructured, OutlierSubspace, NoisyInliers, ClusteredOutliers, UnionInliers,
               ClusteredInliers, NearSubspaceOutliers, PermutedRegression>
      model;
};

std::string model_name(const ModelSpec& spec);
/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ModelSpec& spec);

struct Dataset {
  DataMatrix d;  // outliers occupy the leading columns
  SubspaceBasis u_true;
  std::vector<bool> outlier_mask;
  ModelSpec spec;
  std::uint64_t seed;
  std::optional<double> psi;
  std::optional<double> snr;
  std::optional<SubspaceBasis> outlier_basis;  // U_o or span([U H])
  std::vector<SubspaceBasis> cluster_bases;    // U_k for UnionInliers
  std::optional<Vector> cluster_center;        // q for ClusteredOutliers
  std::vector<std::string> notes;

  std::size_t outlier_count() const;
};

/// Columns i.i.d. uniform on S^{N-1} (normalized Gaussians).
Matrix random_unit_vectors(std::size_t dim, std::size_t count, std::uint64_t seed);
Matrix random_unit_vectors(const CounterRng& rng, std::size_t dim, std::size_t count);

/// Orthonormalized Gaussian N x d matrix.
SubspaceBasis random_subspace(std::size_t dim, std::size_t sub_dim, std::uint64_t seed);
SubspaceBasis random_subspace(const CounterRng& rng, std::size_t dim, std::size_t sub_dim);

Dataset generate(const ModelSpec& spec, std::uint64_t seed);

Dataset permuted_regression_dataset(std::size_t d, std::size_t m, std::size_t n_i,
                                    std::size_t n_o, std::uint64_t seed);

/// psi = max over outliers of 1 / ||(I - UU^T) b||^2, with b scaled to unit
/// norm. Throws std::domain_error for an outlier inside U.
double compute_psi(const Dataset& ds);
double compute_psi(const Matrix& outliers, const SubspaceBasis& u);

}  // namespace ncp
