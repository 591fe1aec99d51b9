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

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace ncp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense M1 x M2 real matrix whose columns are data points.
///
/// Construction rejects empty shapes and non-finite entries, so every
/// DataMatrix in circulation is a valid input for the scoring pipeline.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const { return values_; }
  auto column(std::size_t j) const { return values_.col(static_cast<Eigen::Index>(j)); }

 private:
  Matrix values_;
};

/// Thin SVD D = left * diag(sigma) * right, truncated to the effective rank.
struct SvdFactors {
  Matrix left;   // M1 x r_d, orthonormal columns
  Vector sigma;  // r_d, strictly positive, nonincreasing
  Matrix right;  // r_d x M2, orthonormal rows; column i is v_i

  std::size_t effective_rank() const { return static_cast<std::size_t>(sigma.size()); }
};

/// Orthonormal basis of a subspace of R^ambient. A zero-dimensional basis is
/// representable (it spans {0}).
class SubspaceBasis {
 public:
  SubspaceBasis(std::size_t ambient, Matrix basis);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

 private:
  std::size_t ambient_;
  Matrix basis_;
};

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kNoisyRankRatio = 1.0 / 20.0;

/// Thin SVD keeping singular values strictly greater than rank_tol * s1.
/// Sign convention: the largest-magnitude entry of every left singular
/// vector is positive.
///
/// Throws std::domain_error("zero matrix") when D vanishes.
SvdFactors thin_svd(const DataMatrix& d, double rank_tol = kDefaultRankTol);

/// Count of singular values strictly greater than ratio * s1.
std::size_t estimate_rank(const Vector& sigma, double ratio = kNoisyRankRatio);

/// Basis for the numerical column space; singular values <= tol * s1 are
/// discarded. A zero input yields a 0-dimensional basis.
SubspaceBasis orthonormalize(const Matrix& columns, double tol = 1e-10);

/// f(k) = ||(I - U U^T) d_k||_2 for every column of D.
Vector complement_residual_norms(const DataMatrix& d, const SubspaceBasis& u);
Vector complement_residual_norms(const Matrix& d, const SubspaceBasis& u);

/// ||(I - U U^T) U_hat||_F / ||U||_F.
double recovery_error(const SubspaceBasis& u_true, const SubspaceBasis& u_hat);

/// Spectral norm of A^T B for two bases of the same ambient space.
double affinity_norm(const SubspaceBasis& a, const SubspaceBasis& b);

/// Spectral norm of A^T R, where R is any orthonormal basis of span(B)'s
/// complement; computed as ||(I - B B^T) A||.
double complement_affinity_norm(const SubspaceBasis& a, const SubspaceBasis& b);

}  // namespace ncp
