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

#include "ncp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ncp {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("data matrix must have at least one row and one column");
  }
  if (!values_.allFinite()) throw std::domain_error("non-finite input");
}

SubspaceBasis::SubspaceBasis(std::size_t ambient, Matrix basis)
    : ambient_(ambient), basis_(std::move(basis)) {
  if (basis_.cols() == 0) {
    basis_.resize(static_cast<Eigen::Index>(ambient_), 0);
    return;
  }
  if (static_cast<std::size_t>(basis_.rows()) != ambient_) {
    throw std::invalid_argument("basis row count does not match ambient dimension");
  }
  if (dim() > ambient_) throw std::invalid_argument("basis dimension exceeds ambient dimension");
  const Matrix gram = basis_.transpose() * basis_;
  const double dev = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-10)) {
    throw std::invalid_argument("basis columns are not orthonormal (deviation " +
                                std::to_string(dev) + ")");
  }
}

SvdFactors thin_svd(const DataMatrix& d, double rank_tol) {
  const Matrix& a = d.values();
  if (a.cwiseAbs().maxCoeff() == 0.0) throw std::domain_error("zero matrix");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const auto k = static_cast<Eigen::Index>(estimate_rank(s, rank_tol));

  SvdFactors f;
  f.sigma = s.head(k);
  f.left = svd.matrixU().leftCols(k);
  f.right = svd.matrixV().leftCols(k).transpose();

  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index at = 0;
    f.left.col(c).cwiseAbs().maxCoeff(&at);
    if (f.left(at, c) < 0.0) {
      f.left.col(c) *= -1.0;
      f.right.row(c) *= -1.0;
    }
  }
  return f;
}

std::size_t estimate_rank(const Vector& sigma, double ratio) {
  if (sigma.size() == 0) throw std::invalid_argument("empty singular value list");
  const double s1 = sigma(0);
  if (!(s1 > 0.0)) throw std::domain_error("leading singular value must be positive");
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > ratio * s1) ++count;
  }
  return count;
}

SubspaceBasis orthonormalize(const Matrix& columns, double tol) {
  const auto ambient = static_cast<std::size_t>(columns.rows());
  if (!columns.allFinite()) throw std::domain_error("non-finite input");
  if (columns.cols() == 0 || columns.cwiseAbs().maxCoeff() == 0.0) {
    return SubspaceBasis(ambient, Matrix(columns.rows(), 0));
  }
  Eigen::BDCSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto k = static_cast<Eigen::Index>(estimate_rank(svd.singularValues(), tol));
  Matrix q = svd.matrixU().leftCols(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index at = 0;
    q.col(c).cwiseAbs().maxCoeff(&at);
    if (q(at, c) < 0.0) q.col(c) *= -1.0;
  }
  return SubspaceBasis(ambient, std::move(q));
}

Vector complement_residual_norms(const Matrix& d, const SubspaceBasis& u) {
  if (static_cast<std::size_t>(d.rows()) != u.ambient()) {
    throw std::invalid_argument("dimension mismatch: data has " + std::to_string(d.rows()) +
                                " rows, basis ambient dimension is " +
                                std::to_string(u.ambient()));
  }
  const Matrix& b = u.basis();
  const Matrix residual = d - b * (b.transpose() * d);
  return residual.colwise().norm().transpose();
}

Vector complement_residual_norms(const DataMatrix& d, const SubspaceBasis& u) {
  return complement_residual_norms(d.values(), u);
}

double recovery_error(const SubspaceBasis& u_true, const SubspaceBasis& u_hat) {
  if (u_true.dim() == 0 || u_hat.dim() == 0) {
    throw std::invalid_argument("recovery error needs nonempty bases");
  }
  if (u_true.ambient() != u_hat.ambient()) {
    throw std::invalid_argument("recovery error: ambient dimensions differ");
  }
  const Matrix& u = u_true.basis();
  const Matrix& h = u_hat.basis();
  const Matrix residual = h - u * (u.transpose() * h);
  return residual.norm() / u.norm();
}

double affinity_norm(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("affinity: ambient dimensions differ");
  if (a.dim() == 0 || b.dim() == 0) return 0.0;
  const Matrix cross = a.basis().transpose() * b.basis();
  return Eigen::JacobiSVD<Matrix>(cross).singularValues()(0);
}

double complement_affinity_norm(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("affinity: ambient dimensions differ");
  if (a.dim() == 0) return 0.0;
  const Matrix& p = b.basis();
  const Matrix residual = a.basis() - p * (p.transpose() * a.basis());
  return Eigen::JacobiSVD<Matrix>(residual).singularValues()(0);
}

}  // namespace ncp
