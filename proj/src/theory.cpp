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

#include "ncp/theory.hpp"

#include "ncp/synthgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ncp {

namespace {

// max(log_coeff * log(2 log_dim / delta), sqrt(sqrt_coeff * ratio * log(2 log_dim / delta)))
double bernstein(double ratio, double log_dim, double delta, double log_coeff, double sqrt_coeff) {
  const double l = std::log(2.0 * log_dim / delta);
  return std::max(log_coeff * l, std::sqrt(sqrt_coeff * ratio * l));
}

class Fields {
 public:
  explicit Fields(const ConditionParams& p) : p_(p) {}

  double get(const std::optional<double>& v, const char* name) const {
    if (!v) throw std::invalid_argument(std::string(to_string(p_.theorem)) + ": missing field '" + name + "'");
    if (!std::isfinite(*v)) throw std::invalid_argument(std::string("field '") + name + "' must be finite");
    return *v;
  }
  double positive(const std::optional<double>& v, const char* name) const {
    const double x = get(v, name);
    if (!(x > 0.0)) throw std::invalid_argument(std::string("field '") + name + "' must be positive");
    return x;
  }
  double nonnegative(const std::optional<double>& v, const char* name) const {
    const double x = get(v, name);
    if (!(x >= 0.0)) throw std::invalid_argument(std::string("field '") + name + "' must be >= 0");
    return x;
  }
  double unit_interval(const std::optional<double>& v, const char* name) const {
    const double x = get(v, name);
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string("field '") + name + "' must lie in [0, 1]");
    return x;
  }
  double psi() const {
    const double x = get(p_.psi, "psi");
    if (!(x >= 1.0)) throw std::invalid_argument("field 'psi' must be >= 1");
    return x;
  }

 private:
  const ConditionParams& p_;
};

struct Builder {
  ConditionReport report;

  double add(std::string name, double value) {
    report.terms.emplace_back(std::move(name), value);
    return value;
  }
};

// n_i / r - max(4/3 log(2r/delta), sqrt(4 n_i/r log(2r/delta))), shared by T1-T5.
double inlier_side(Builder& b, double n_i, double r, double delta) {
  const double mean = b.add("inlier_mean", n_i / r);
  const double dev = b.add("inlier_deviation", bernstein(n_i / r, r, delta, 4.0 / 3.0, 4.0));
  return mean - dev;
}

ConditionReport finish(Builder b, Theorem t, double lhs, double rhs, double delta, int k) {
  const double floor = 1.0 - k * delta;
  if (!(floor > 0.0)) {
    throw std::invalid_argument("delta too large: probability floor 1 - " + std::to_string(k) +
                                "*delta is not positive");
  }
  b.report.theorem = t;
  b.report.lhs = lhs;
  b.report.rhs = rhs;
  b.report.holds = lhs > rhs;
  b.report.probability_floor = floor;
  return std::move(b.report);
}

}  // namespace

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::kT1: return "T1";
    case Theorem::kT2: return "T2";
    case Theorem::kT3: return "T3";
    case Theorem::kT4: return "T4";
    case Theorem::kT5: return "T5";
    case Theorem::kT6: return "T6";
  }
  return "T?";
}

Theorem parse_theorem(std::string_view id) {
  std::string s(id);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Theorem t : {Theorem::kT1, Theorem::kT2, Theorem::kT3, Theorem::kT4, Theorem::kT5, Theorem::kT6}) {
    if (s == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown theorem id '" + std::string(id) + "' (expected T1..T6)");
}

double deviation_term(double n, double dim, double delta, double log_coeff, double sqrt_coeff) {
  return bernstein(n / dim, dim, delta, log_coeff, sqrt_coeff);
}

ConditionReport evaluate_condition(const ConditionParams& p) {
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const Fields f(p);
  const double delta = p.delta;
  Builder b;

  switch (p.theorem) {
    case Theorem::kT1: {
      const double n_i = f.positive(p.n_i, "n_i"), r = f.positive(p.r, "r");
      const double n_o = f.nonnegative(p.n_o, "n_o"), m1 = f.positive(p.m1, "m1");
      const double psi = f.psi();
      const double lhs = inlier_side(b, n_i, r, delta);
      const double prox = b.add("outlier_proximity", (psi - 1.0) * n_o / m1);
      const double dev = b.add("outlier_deviation", deviation_term(n_o, m1, delta, 8.0 / 3.0, 16.0));
      return finish(std::move(b), p.theorem, lhs, prox + dev, delta, 3);
    }
    case Theorem::kT2: {
      const double n_i = f.positive(p.n_i, "n_i"), r = f.positive(p.r, "r");
      const double n_o = f.nonnegative(p.n_o, "n_o"), r_o = f.positive(p.r_o, "r_o");
      const double psi = f.psi();
      const double aff = f.unit_interval(p.outlier_complement_affinity, "outlier_complement_affinity");
      const double lhs = inlier_side(b, n_i, r, delta);
      const double mean = b.add("outlier_mean", psi * n_o / r_o);
      const double dev = b.add("outlier_deviation", psi * deviation_term(n_o, r_o, delta, 4.0 / 3.0, 1.0));
      b.add("affinity", aff);
      return finish(std::move(b), p.theorem, lhs, aff * (mean + dev), delta, 2);
    }
    case Theorem::kT3: {
      const double n_i = f.positive(p.n_i, "n_i"), r = f.positive(p.r, "r");
      const double n_o = f.nonnegative(p.n_o, "n_o"), r_o = f.positive(p.r_o, "r_o");
      const double aff = f.unit_interval(p.inlier_outlier_affinity, "inlier_outlier_affinity");
      const double lhs = inlier_side(b, n_i, r, delta);
      const double inlier_dev = bernstein(n_i / r, r, delta, 4.0 / 3.0, 4.0);
      const double leak = b.add("inlier_leakage", aff * aff * (n_i / r + inlier_dev));
      const double mean = b.add("outlier_mean", n_o / r_o);
      const double dev = b.add("outlier_deviation", deviation_term(n_o, r_o, delta, 4.0 / 3.0, 4.0));
      return finish(std::move(b), p.theorem, lhs, leak + mean + dev, delta, 3);
    }
    case Theorem::kT4: {
      const double n_i = f.positive(p.n_i, "n_i"), r = f.positive(p.r, "r");
      const double n_o = f.nonnegative(p.n_o, "n_o"), m1 = f.positive(p.m1, "m1");
      const double psi = f.psi();
      const double sigma = f.nonnegative(p.sigma_n, "sigma_n");
      const double t_min = f.positive(p.t_min, "t_min"), t_max = f.positive(p.t_max, "t_max");
      if (t_min > t_max) throw std::invalid_argument("t_min must not exceed t_max");
      const double s2 = sigma * sigma;
      const double shrink = b.add("noise_shrinkage", std::pow(std::sqrt(1.0 + s2) - t_max * sigma, 2) / (1.0 + s2));
      const double lhs = shrink * inlier_side(b, n_i, r, delta);
      const double noise = b.add("noise_leakage", 2.0 * sigma * n_i * t_max * t_max);
      const double outl = b.add("outlier_term", psi * (n_o / m1 + deviation_term(n_o, m1, delta, 4.0 / 3.0, 4.0)));
      const double in_noise = b.add("inlier_noise_term", s2 * psi / (1.0 + s2) *
                                                             (n_i / m1 + deviation_term(n_i, m1, delta, 4.0 / 3.0, 4.0)));
      ConditionReport rep = finish(std::move(b), p.theorem, lhs, noise + outl + in_noise, delta, 3);
      rep.notes.push_back("stated probability floor 1-3*delta; counting every failure event gives 1-7*delta");
      return rep;
    }
    case Theorem::kT5: {
      const double n_i = f.positive(p.n_i, "n_i"), r = f.positive(p.r, "r");
      const double n_o = f.nonnegative(p.n_o, "n_o"), m1 = f.positive(p.m1, "m1");
      const double psi = f.psi();
      const double eta = f.positive(p.eta, "eta");
      const double q = f.unit_interval(p.q_perp, "q_perp");
      if (!(m1 > 1.0)) throw std::invalid_argument("field 'm1' must exceed 1 for T5");
      const double e2 = eta * eta;
      const double lhs = inlier_side(b, n_i, r, delta);
      const double center = b.add("center_term", n_o * psi * q * q / (1.0 + e2));
      const double spread = b.add("spread_mean", psi * e2 * n_o / ((1.0 + e2) * m1));
      const double spread_dev = b.add("spread_deviation", e2 * psi / (1.0 + e2) * deviation_term(n_o, m1, delta, 4.0 / 3.0, 1.0));
      const double cross = b.add("cross_term", eta * std::sqrt(psi) / (1.0 + e2) * q *
                                                   (n_o / std::sqrt(m1) + 2.0 * std::sqrt(n_o) +
                                                    std::sqrt(2.0 * n_o * std::log(1.0 / delta) / (m1 - 1.0))));
      return finish(std::move(b), p.theorem, lhs, center + spread + spread_dev + cross, delta, 4);
    }
    case Theorem::kT6: {
      const double n_o = f.nonnegative(p.n_o, "n_o"), m1 = f.positive(p.m1, "m1");
      const double psi = f.psi();
      const double m = f.positive(p.m, "m"), d = f.positive(p.d, "d");
      const double vartheta = f.positive(p.vartheta, "vartheta");
      if (vartheta > m) throw std::invalid_argument("field 'vartheta' must not exceed m");
      if (p.n_i_k.size() != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("T6: field 'n_i_k' must list exactly m cluster sizes");
      }
      double smallest = std::numeric_limits<double>::infinity();
      for (double nk : p.n_i_k) {
        if (!(nk > 0.0)) throw std::invalid_argument("field 'n_i_k' entries must be positive");
        smallest = std::min(smallest, nk / d - bernstein(nk / d, m * d, delta, 4.0 / 3.0, 4.0));
      }
      b.add("vartheta", vartheta);
      b.add("min_cluster_term", smallest);
      const double prox = b.add("outlier_proximity", (psi - 1.0) * n_o / m1);
      const double dev = b.add("outlier_deviation", 2.0 * deviation_term(n_o, m1, delta, 4.0 / 3.0, 4.0));
      return finish(std::move(b), p.theorem, vartheta * smallest, prox + dev, delta, 3);
    }
  }
  throw std::invalid_argument("unknown theorem");
}

SphereExtremes sphere_concentration_extremes(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (dim <= 2) throw std::invalid_argument("sphere concentration requires N > 2");
  if (n < 1) throw std::invalid_argument("sample count must be positive");
  const Matrix g = random_unit_vectors(dim, n, seed);
  const Matrix gram = g * g.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  return {ev(ev.size() - 1), std::max(0.0, ev(0))};
}

std::pair<double, double> sphere_concentration_bounds(std::size_t n, std::size_t dim, double delta) {
  const double mean = static_cast<double>(n) / static_cast<double>(dim);
  const double dev = deviation_term(static_cast<double>(n), static_cast<double>(dim), delta);
  return {mean - dev, mean + dev};
}

double abs_projection_bound(std::size_t n, std::size_t dim, double delta) {
  const auto nn = static_cast<double>(n);
  const auto nd = static_cast<double>(dim);
  return nn / std::sqrt(nd) + 2.0 * std::sqrt(nn) + std::sqrt(2.0 * nn * std::log(1.0 / delta) / (nd - 1.0));
}

AbsProjectionCheck abs_projection_extreme(std::size_t n, std::size_t dim, std::uint64_t seed,
                                          double delta) {
  if (dim <= 2) throw std::invalid_argument("abs projection bound requires N > 2");
  if (n < 1) throw std::invalid_argument("sample count must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const Matrix g = random_unit_vectors(dim, n, seed);
  const Matrix random_probes =
      random_unit_vectors(CounterRng(derive_key(seed, "abs-probes")), dim, kAbsProjectionRandomProbes);

  double best = (random_probes.transpose() * g).cwiseAbs().rowwise().sum().maxCoeff();
  constexpr Eigen::Index kBlock = 256;
  const auto cols = static_cast<Eigen::Index>(n);
  for (Eigen::Index start = 0; start < cols; start += kBlock) {
    const Eigen::Index width = std::min(kBlock, cols - start);
    const Matrix block = g.transpose() * g.middleCols(start, width);
    best = std::max(best, block.cwiseAbs().colwise().sum().maxCoeff());
  }
  const double bound = abs_projection_bound(n, dim, delta);
  return {best, bound, best <= bound};
}

TExtremes extract_t_extremes(const SvdFactors& f, const std::vector<bool>& outlier_mask) {
  if (outlier_mask.size() != static_cast<std::size_t>(f.right.cols())) {
    throw std::invalid_argument("mask length does not match column count");
  }
  const Vector inv_sq = f.sigma.array().square().inverse();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < outlier_mask.size(); ++i) {
    if (outlier_mask[i]) continue;
    any = true;
    const Vector t = f.sigma.cwiseProduct(f.right.col(static_cast<Eigen::Index>(i)));
    const Vector w = inv_sq.cwiseProduct(t);
    const double ratio = w.norm() / t.dot(w);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!any) throw std::invalid_argument("t extremes need at least one inlier");
  return {lo, hi};
}

double compute_vartheta(const std::vector<SubspaceBasis>& clusters) {
  if (clusters.empty()) throw std::invalid_argument("vartheta needs at least one cluster");
  const std::size_t ambient = clusters.front().ambient();
  std::size_t total = 0;
  for (const auto& c : clusters) {
    if (c.ambient() != ambient) throw std::invalid_argument("cluster bases differ in ambient dimension");
    total += c.dim();
  }
  Matrix stacked(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(total));
  Matrix projector = Matrix::Zero(stacked.rows(), stacked.rows());
  Eigen::Index at = 0;
  for (const auto& c : clusters) {
    stacked.middleCols(at, c.basis().cols()) = c.basis();
    at += c.basis().cols();
    projector += c.basis() * c.basis().transpose();
  }
  const SubspaceBasis u = orthonormalize(stacked, 1e-10);
  if (u.dim() != total || total == 0) {
    throw std::domain_error("degenerate clusters: direct sum has rank " + std::to_string(u.dim()) +
                            ", expected " + std::to_string(total));
  }
  const Matrix restricted = u.basis().transpose() * projector * u.basis();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(restricted, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace ncp
