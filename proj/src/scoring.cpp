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

#include "ncp/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace ncp {

namespace {

constexpr Eigen::Index kBlock = 512;

Vector squared_column_norms(const Matrix& right) {
  Vector sq = right.colwise().squaredNorm().transpose();
  for (Eigen::Index i = 0; i < sq.size(); ++i) {
    if (!(sq(i) > 0.0)) {
      throw std::domain_error("right singular vector column " + std::to_string(i) + " is zero");
    }
  }
  return sq;
}

// Row sums of the elementwise-squared Gram matrix X^T X, one column block at
// a time.
Vector squared_gram_row_sums(const Matrix& x) {
  const Eigen::Index n = x.cols();
  Vector sums = Vector::Zero(n);
  for (Eigen::Index start = 0; start < n; start += kBlock) {
    const Eigen::Index width = std::min(kBlock, n - start);
    const Matrix block = x.transpose() * x.middleCols(start, width);
    sums.segment(start, width) = block.array().square().colwise().sum().transpose();
  }
  return sums;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kAncp: return "ancp";
    case Method::kSncp: return "sncp";
    case Method::kCop: return "cop";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ancp") return Method::kAncp;
  if (lower == "sncp") return Method::kSncp;
  if (lower == "cop") return Method::kCop;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

DataMatrix normalize_columns(const DataMatrix& d) {
  Matrix out = d.values();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm == 0.0) throw std::domain_error("column " + std::to_string(j) + " is all zero");
    out.col(j) /= norm;
  }
  return DataMatrix(std::move(out));
}

ScoreVector ancp_scores(const Matrix& right) {
  return {Method::kAncp, squared_column_norms(right).cwiseInverse()};
}

ScoreVector sncp_scores(const Matrix& right) {
  const Vector sq = squared_column_norms(right);
  Matrix unit = right;
  for (Eigen::Index i = 0; i < unit.cols(); ++i) unit.col(i) /= std::sqrt(sq(i));
  return {Method::kSncp, squared_gram_row_sums(unit)};
}

ScoreVector cop_scores(const DataMatrix& normalized) {
  return {Method::kCop, squared_gram_row_sums(normalized.values())};
}

InnovationDirection innovation_direction(const SvdFactors& f, std::size_t i) {
  const auto cols = static_cast<std::size_t>(f.right.cols());
  if (i >= cols) {
    throw std::out_of_range("column index " + std::to_string(i) + " out of range (" +
                            std::to_string(cols) + " columns)");
  }
  const Vector v = f.right.col(static_cast<Eigen::Index>(i));
  const double leverage = v.squaredNorm();
  if (!(leverage > 0.0)) throw std::domain_error("column " + std::to_string(i) + " is zero");

  // S^-2 t_i = S^-1 v_i and t_i^T S^-2 t_i = ||v_i||^2.
  const Vector weighted = v.cwiseQuotient(f.sigma);
  Vector c = f.left * weighted / leverage;

  // D^T c with D = U' S V.
  const Vector projected = f.right.transpose() * f.sigma.cwiseProduct(f.left.transpose() * c);
  return {i, std::move(c), projected.squaredNorm()};
}

ScoreVector score(const DataMatrix& d, Method method, double rank_tol) {
  const DataMatrix normalized = normalize_columns(d);
  if (method == Method::kCop) return cop_scores(normalized);
  const SvdFactors f = thin_svd(normalized, rank_tol);
  return method == Method::kAncp ? ancp_scores(f.right) : sncp_scores(f.right);
}

}  // namespace ncp
