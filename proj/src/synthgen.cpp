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

#include <algorithm>
#include <cmath>
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

using Index = Eigen::Index;

Index idx(std::size_t n) { return static_cast<Index>(n); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

Vector unit_vector(CounterRng rng, std::size_t dim) {
  Vector g(idx(dim));
  double norm = 0.0;
  while (norm == 0.0) {
    for (Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
    norm = g.norm();
  }
  return g / norm;
}

// Uniform on U ∩ S: normalize U s with s standard Gaussian.
Matrix unit_vectors_in(const CounterRng& rng, const SubspaceBasis& u, std::size_t count) {
  const Matrix coeffs = random_unit_vectors(rng, u.dim(), count);
  Matrix out = u.basis() * coeffs;
  out.colwise().normalize();
  return out;
}

struct Parts {
  Matrix outliers;
  Matrix inliers;
  SubspaceBasis u;
  std::optional<SubspaceBasis> outlier_basis;
  std::vector<SubspaceBasis> cluster_bases;
  std::optional<Vector> cluster_center;
  std::vector<std::string> notes;
};

Dataset assemble(Parts parts, const ModelSpec& spec, std::uint64_t seed) {
  const Index n_o = parts.outliers.cols();
  const Index n_i = parts.inliers.cols();
  Matrix d(parts.u.ambient(), n_o + n_i);
  if (n_o) d.leftCols(n_o) = parts.outliers;
  if (n_i) d.rightCols(n_i) = parts.inliers;

  std::vector<bool> mask(static_cast<std::size_t>(n_o + n_i), false);
  std::fill(mask.begin(), mask.begin() + n_o, true);

  std::optional<double> psi;
  if (n_o > 0) psi = compute_psi(parts.outliers, parts.u);

  return Dataset{DataMatrix(std::move(d)),
                 std::move(parts.u),
                 std::move(mask),
                 spec,
                 seed,
                 psi,
                 std::nullopt,
                 std::move(parts.outlier_basis),
                 std::move(parts.cluster_bases),
                 std::move(parts.cluster_center),
                 std::move(parts.notes)};
}

Parts make_unstructured(const Unstructured& s, const CounterRng& rng) {
  SubspaceBasis u = random_subspace(rng.substream("U"), s.m1, s.r);
  Matrix inliers = unit_vectors_in(rng.substream("inliers"), u, s.n_i);
  Matrix outliers = random_unit_vectors(rng.substream("outliers"), s.m1, s.n_o);
  return Parts{std::move(outliers), std::move(inliers), std::move(u), {}, {}, {}, {}};
}

Parts make_outlier_subspace(const OutlierSubspace& s, const CounterRng& rng) {
  SubspaceBasis u = random_subspace(rng.substream("U"), s.m1, s.r);
  SubspaceBasis uo = random_subspace(rng.substream("U_o"), s.m1, s.r_o);
  Matrix inliers = unit_vectors_in(rng.substream("inliers"), u, s.n_i);
  Matrix outliers = unit_vectors_in(rng.substream("outliers"), uo, s.n_o);
  return Parts{std::move(outliers), std::move(inliers), std::move(u), std::move(uo), {}, {}, {}};
}

Parts make_clustered_outliers(const ClusteredOutliers& s, const CounterRng& rng) {
  SubspaceBasis u = random_subspace(rng.substream("U"), s.m1, s.r);
  Matrix inliers = unit_vectors_in(rng.substream("inliers"), u, s.n_i);

  const CounterRng q_rng = rng.substream("q");
  Vector q;
  std::uint64_t attempt = 0;
  for (;; ++attempt) {
    q = unit_vector(q_rng.substream(attempt), s.m1);
    const Vector off = q - u.basis() * (u.basis().transpose() * q);
    if (off.norm() >= 0.1) break;
    if (attempt > 10000) throw std::runtime_error("could not draw cluster center off U");
  }

  const Matrix f = random_unit_vectors(rng.substream("outliers"), s.m1, s.n_o);
  const double scale = 1.0 / std::sqrt(1.0 + s.eta * s.eta);
  Matrix outliers = (s.eta * f).colwise() + q;
  outliers *= scale;

  Parts p{std::move(outliers), std::move(inliers), std::move(u), {}, {}, q, {}};
  p.notes.push_back("cluster center drawn with ||(I-UU^T)q|| >= 0.1 after " +
                    std::to_string(attempt + 1) + " attempt(s)");
  return p;
}

Parts make_union_inliers(const UnionInliers& s, const CounterRng& rng) {
  std::vector<SubspaceBasis> clusters;
  Matrix stacked(idx(s.m1), idx(s.m * s.d));
  for (std::size_t k = 0; k < s.m; ++k) {
    clusters.push_back(random_subspace(rng.substream("cluster").substream(k), s.m1, s.d));
    stacked.middleCols(idx(k * s.d), idx(s.d)) = clusters.back().basis();
  }
  SubspaceBasis u = orthonormalize(stacked, 1e-10);
  if (u.dim() != s.m * s.d) {
    throw std::runtime_error("cluster subspaces are not independent: achieved rank " +
                             std::to_string(u.dim()) + ", expected " + std::to_string(s.m * s.d));
  }
  const std::size_t n_i = std::accumulate(s.n_i_k.begin(), s.n_i_k.end(), std::size_t{0});
  Matrix inliers(idx(s.m1), idx(n_i));
  Index at = 0;
  for (std::size_t k = 0; k < s.m; ++k) {
    const auto cnt = idx(s.n_i_k[k]);
    inliers.middleCols(at, cnt) = unit_vectors_in(rng.substream("inliers").substream(k), clusters[k], s.n_i_k[k]);
    at += cnt;
  }
  Matrix outliers = random_unit_vectors(rng.substream("outliers"), s.m1, s.n_o);
  return Parts{std::move(outliers), std::move(inliers), std::move(u), {}, std::move(clusters), {}, {}};
}

Parts make_clustered_inliers(const ClusteredInliers& s, const CounterRng& rng) {
  SubspaceBasis u = random_subspace(rng.substream("U"), s.m1, s.r);
  const Vector w = unit_vector(rng.substream("w"), s.r);
  const Matrix z = random_unit_vectors(rng.substream("z"), s.r, s.n_i);
  Matrix coeffs = (s.gamma * z).colwise() + w;
  Matrix inliers = u.basis() * coeffs;
  inliers.colwise().normalize();

  Parts p{Matrix(idx(s.m1), 0), std::move(inliers), std::move(u), {}, {}, {}, {}};
  if (s.n_o > 0) {
    if (s.r_o > 0) {
      SubspaceBasis uo = random_subspace(rng.substream("U_o"), s.m1, s.r_o);
      p.outliers = unit_vectors_in(rng.substream("outliers"), uo, s.n_o);
      p.outlier_basis = std::move(uo);
    } else {
      p.outliers = random_unit_vectors(rng.substream("outliers"), s.m1, s.n_o);
    }
  }
  return p;
}

Parts make_near_subspace(const NearSubspaceOutliers& s, const CounterRng& rng) {
  SubspaceBasis u = random_subspace(rng.substream("U"), s.m1, s.r);
  SubspaceBasis h = random_subspace(rng.substream("H"), s.m1, s.h_dim);
  Matrix span(idx(s.m1), idx(s.r + s.h_dim));
  span << u.basis(), h.basis();
  const Matrix g = gaussian_matrix(rng.substream("G"), idx(s.r + s.h_dim), idx(s.n_o));
  Matrix outliers = span * g;
  outliers.colwise().normalize();
  Matrix inliers = unit_vectors_in(rng.substream("inliers"), u, s.n_i);
  SubspaceBasis joint = orthonormalize(span, 1e-10);
  return Parts{std::move(outliers), std::move(inliers), std::move(u), std::move(joint), {}, {}, {}};
}

Dataset make_noisy(const NoisyInliers& s, const ModelSpec& spec, std::uint64_t seed,
                   const CounterRng& rng);

Dataset generate_with(const ModelSpec& spec, std::uint64_t seed, const CounterRng& rng) {
  return std::visit(
      Overloaded{
          [&](const Unstructured& s) { return assemble(make_unstructured(s, rng), spec, seed); },
          [&](const OutlierSubspace& s) { return assemble(make_outlier_subspace(s, rng), spec, seed); },
          [&](const NoisyInliers& s) { return make_noisy(s, spec, seed, rng); },
          [&](const ClusteredOutliers& s) { return assemble(make_clustered_outliers(s, rng), spec, seed); },
          [&](const UnionInliers& s) { return assemble(make_union_inliers(s, rng), spec, seed); },
          [&](const ClusteredInliers& s) { return assemble(make_clustered_inliers(s, rng), spec, seed); },
          [&](const NearSubspaceOutliers& s) { return assemble(make_near_subspace(s, rng), spec, seed); },
          [&](const PermutedRegression& s) {
            return permuted_regression_dataset(s.d, s.m, s.n_i, s.n_o, seed);
          }},
      spec.model);
}

Dataset make_noisy(const NoisyInliers& s, const ModelSpec& spec, std::uint64_t seed,
                   const CounterRng& rng) {
  Dataset base = generate_with(*s.base, seed, rng.substream("base"));
  Matrix d = base.d.values();
  const std::size_t n_o = base.outlier_count();
  const Index n_i = d.cols() - idx(n_o);

  const Matrix clean = d.rightCols(n_i);
  const Matrix noise = s.sigma_n * random_unit_vectors(rng.substream("noise"), base.d.rows(),
                                                       static_cast<std::size_t>(n_i));
  d.rightCols(n_i) = (clean + noise) / std::sqrt(1.0 + s.sigma_n * s.sigma_n);

  std::optional<double> snr;
  if (s.sigma_n > 0.0) snr = clean.squaredNorm() / noise.squaredNorm();

  std::vector<std::string> notes = std::move(base.notes);
  notes.push_back("noisy inlier columns are not renormalized");
  return Dataset{DataMatrix(std::move(d)),
                 std::move(base.u_true),
                 std::move(base.outlier_mask),
                 spec,
                 seed,
                 base.psi,
                 snr,
                 std::move(base.outlier_basis),
                 std::move(base.cluster_bases),
                 std::move(base.cluster_center),
                 std::move(notes)};
}

}  // namespace

std::size_t Dataset::outlier_count() const {
  return static_cast<std::size_t>(std::count(outlier_mask.begin(), outlier_mask.end(), true));
}

std::string model_name(const ModelSpec& spec) {
  return std::visit(Overloaded{[](const Unstructured&) { return std::string("unstructured"); },
                               [](const OutlierSubspace&) { return std::string("outlier-subspace"); },
                               [](const NoisyInliers&) { return std::string("noisy-inliers"); },
                               [](const ClusteredOutliers&) { return std::string("clustered-outliers"); },
                               [](const UnionInliers&) { return std::string("union-inliers"); },
                               [](const ClusteredInliers&) { return std::string("clustered-inliers"); },
                               [](const NearSubspaceOutliers&) { return std::string("near-subspace"); },
                               [](const PermutedRegression&) { return std::string("perm-reg"); }},
                    spec.model);
}

void validate(const ModelSpec& spec) {
  std::visit(
      Overloaded{
          [](const Unstructured& s) {
            require(s.m1 >= 1 && s.r >= 1, "unstructured: m1 and r must be positive");
            require(s.r <= s.m1, "unstructured: r must not exceed m1");
            require(s.n_i >= 1, "unstructured: n_i must be positive");
          },
          [](const OutlierSubspace& s) {
            require(s.m1 >= 1 && s.r >= 1 && s.r_o >= 1, "outlier-subspace: m1, r, r_o must be positive");
            require(s.r <= s.m1 && s.r_o <= s.m1, "outlier-subspace: r and r_o must not exceed m1");
            require(s.n_i >= 1 && s.n_o >= 1, "outlier-subspace: n_i and n_o must be positive");
          },
          [](const NoisyInliers& s) {
            require(s.base != nullptr, "noisy-inliers: missing base model");
            require(!std::holds_alternative<NoisyInliers>(s.base->model),
                    "noisy-inliers: base model cannot itself be noisy");
            require(!std::holds_alternative<PermutedRegression>(s.base->model),
                    "noisy-inliers: perm-reg base is not supported");
            require(std::isfinite(s.sigma_n) && s.sigma_n >= 0.0, "noisy-inliers: sigma_n must be >= 0");
            validate(*s.base);
          },
          [](const ClusteredOutliers& s) {
            require(s.m1 >= 1 && s.r >= 1, "clustered-outliers: m1 and r must be positive");
            require(s.r < s.m1, "clustered-outliers: r must be smaller than m1 so q can leave U");
            require(s.n_i >= 1 && s.n_o >= 1, "clustered-outliers: n_i and n_o must be positive");
            require(std::isfinite(s.eta) && s.eta > 0.0, "clustered-outliers: eta must be positive");
          },
          [](const UnionInliers& s) {
            require(s.m1 >= 1 && s.m >= 1 && s.d >= 1, "union-inliers: m1, m, d must be positive");
            require(s.m * s.d <= s.m1, "union-inliers: m*d must not exceed m1");
            require(s.n_i_k.size() == s.m, "union-inliers: n_i_k needs exactly m entries");
            for (std::size_t n : s.n_i_k) require(n >= 1, "union-inliers: every n_i_k must be positive");
          },
          [](const ClusteredInliers& s) {
            require(s.m1 >= 1 && s.r >= 1, "clustered-inliers: m1 and r must be positive");
            require(s.r <= s.m1 && s.r_o <= s.m1, "clustered-inliers: r and r_o must not exceed m1");
            require(s.n_i >= 1, "clustered-inliers: n_i must be positive");
            require(std::isfinite(s.gamma) && s.gamma > 0.0, "clustered-inliers: gamma must be positive");
          },
          [](const NearSubspaceOutliers& s) {
            require(s.m1 >= 1 && s.r >= 1 && s.h_dim >= 1, "near-subspace: m1, r, h_dim must be positive");
            require(s.r + s.h_dim <= s.m1, "near-subspace: r + h_dim must not exceed m1");
            require(s.n_i >= 1 && s.n_o >= 1, "near-subspace: n_i and n_o must be positive");
          },
          [](const PermutedRegression& s) {
            require(s.d >= 1 && s.m >= 1, "perm-reg: d and m must be positive");
            require(s.n_i + s.n_o > s.d, "perm-reg: n_i + n_o must exceed d");
            require(s.n_o != 1, "perm-reg: a single displaced column admits no derangement");
          }},
      spec.model);
}

Matrix random_unit_vectors(const CounterRng& rng, std::size_t dim, std::size_t count) {
  if (dim < 1) throw std::invalid_argument("sphere dimension must be positive");
  Matrix out(idx(dim), idx(count));
  for (std::size_t j = 0; j < count; ++j) out.col(idx(j)) = unit_vector(rng.substream(j), dim);
  return out;
}

Matrix random_unit_vectors(std::size_t dim, std::size_t count, std::uint64_t seed) {
  return random_unit_vectors(CounterRng(derive_key(seed, "sphere")), dim, count);
}

SubspaceBasis random_subspace(const CounterRng& rng, std::size_t dim, std::size_t sub_dim) {
  if (sub_dim > dim) {
    throw std::invalid_argument("subspace dimension " + std::to_string(sub_dim) +
                                " exceeds ambient dimension " + std::to_string(dim));
  }
  if (sub_dim == 0) return SubspaceBasis(dim, Matrix(idx(dim), 0));
  const Matrix g = gaussian_matrix(rng, idx(dim), idx(sub_dim));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(idx(dim), idx(sub_dim));
  return SubspaceBasis(dim, std::move(q));
}

SubspaceBasis random_subspace(std::size_t dim, std::size_t sub_dim, std::uint64_t seed) {
  return random_subspace(CounterRng(derive_key(seed, "subspace")), dim, sub_dim);
}

Dataset generate(const ModelSpec& spec, std::uint64_t seed) {
  validate(spec);
  return generate_with(spec, seed, CounterRng(derive_key(seed, "ncp-synth")));
}

Dataset permuted_regression_dataset(std::size_t d, std::size_t m, std::size_t n_i,
                                    std::size_t n_o, std::uint64_t seed) {
  const ModelSpec spec{PermutedRegression{d, m, n_i, n_o}};
  validate(spec);
  const CounterRng rng(derive_key(seed, "ncp-perm-reg"));
  const std::size_t n = n_i + n_o;

  const Matrix x = gaussian_matrix(rng.substream("X"), idx(d), idx(n));
  const Matrix theta = gaussian_matrix(rng.substream("Theta"), idx(m), idx(d));
  const Matrix y = theta * x;

  // Positions to displace, then a derangement among them.
  CounterRng pick = rng.substream("positions");
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::shuffle(positions.begin(), positions.end(), pick);
  positions.resize(n_o);
  std::sort(positions.begin(), positions.end());

  std::vector<std::size_t> target(positions);
  CounterRng perm = rng.substream("derangement");
  if (n_o >= 2) {
    for (;;) {
      std::shuffle(target.begin(), target.end(), perm);
      bool fixed = false;
      for (std::size_t k = 0; k < n_o; ++k) fixed = fixed || target[k] == positions[k];
      if (!fixed) break;
    }
  }

  Matrix y_obs = y;
  for (std::size_t k = 0; k < n_o; ++k) y_obs.col(idx(positions[k])) = y.col(idx(target[k]));

  std::vector<bool> displaced(n, false);
  for (std::size_t p : positions) displaced[p] = true;
  std::vector<std::size_t> order(positions);
  for (std::size_t j = 0; j < n; ++j) {
    if (!displaced[j]) order.push_back(j);
  }

  Matrix z(idx(d + m), idx(n));
  for (std::size_t k = 0; k < n; ++k) {
    z.col(idx(k)) << x.col(idx(order[k])), y_obs.col(idx(order[k]));
  }
  z.colwise().normalize();

  Matrix span(idx(d + m), idx(d));
  span << Matrix::Identity(idx(d), idx(d)), theta;
  SubspaceBasis u = orthonormalize(span, 1e-10);

  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + idx(n_o), true);
  std::optional<double> psi;
  if (n_o > 0) psi = compute_psi(z.leftCols(idx(n_o)), u);

  return Dataset{DataMatrix(std::move(z)), std::move(u), std::move(mask), spec, seed, psi,
                 std::nullopt, std::nullopt, {}, std::nullopt, {}};
}

double compute_psi(const Matrix& outliers, const SubspaceBasis& u) {
  if (outliers.cols() == 0) throw std::invalid_argument("psi needs at least one outlier");
  const Vector norms = outliers.colwise().norm().transpose();
  const Vector residual = complement_residual_norms(outliers, u);
  double psi = 0.0;
  for (Index i = 0; i < residual.size(); ++i) {
    const double rel = norms(i) > 0.0 ? residual(i) / norms(i) : 0.0;
    if (rel < 1e-12) throw std::domain_error("degenerate outlier (psi infinite)");
    psi = std::max(psi, 1.0 / (rel * rel));
  }
  return psi;
}

double compute_psi(const Dataset& ds) {
  const auto n_o = idx(ds.outlier_count());
  if (n_o == 0) throw std::invalid_argument("psi needs at least one outlier");
  return compute_psi(ds.d.values().leftCols(n_o), ds.u_true);
}

}  // namespace ncp
