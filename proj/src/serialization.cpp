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

#include "ncp/serialization.hpp"

#include "ncp/matrix_io.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace ncp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json columns_to_json(const Matrix& m) {
  Json cols = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Json col = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

std::size_t count(const Json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("model spec: missing field '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x >= 0.0 && x == std::floor(x)) return static_cast<std::size_t>(x);
  }
  throw std::invalid_argument(std::string("model spec: field '") + key + "' must be a nonnegative integer");
}

double real(const Json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw std::invalid_argument(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Json optional_number(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

}  // namespace

Json model_spec_to_json(const ModelSpec& spec) {
  Json j;
  j["model"] = model_name(spec);
  std::visit(Overloaded{
                 [&](const Unstructured& s) {
                   j["m1"] = s.m1; j["r"] = s.r; j["n_i"] = s.n_i; j["n_o"] = s.n_o;
                 },
                 [&](const OutlierSubspace& s) {
                   j["m1"] = s.m1; j["r"] = s.r; j["r_o"] = s.r_o; j["n_i"] = s.n_i; j["n_o"] = s.n_o;
                 },
                 [&](const NoisyInliers& s) {
                   j["sigma_n"] = s.sigma_n;
                   j["base"] = s.base ? model_spec_to_json(*s.base) : Json(nullptr);
                 },
                 [&](const ClusteredOutliers& s) {
                   j["m1"] = s.m1; j["r"] = s.r; j["n_i"] = s.n_i; j["n_o"] = s.n_o; j["eta"] = s.eta;
                 },
                 [&](const UnionInliers& s) {
                   j["m1"] = s.m1; j["m"] = s.m; j["d"] = s.d; j["n_i_k"] = s.n_i_k; j["n_o"] = s.n_o;
                 },
                 [&](const ClusteredInliers& s) {
                   j["m1"] = s.m1; j["r"] = s.r; j["n_i"] = s.n_i; j["gamma"] = s.gamma;
                   j["n_o"] = s.n_o; j["r_o"] = s.r_o;
                 },
                 [&](const NearSubspaceOutliers& s) {
                   j["m1"] = s.m1; j["r"] = s.r; j["n_i"] = s.n_i; j["n_o"] = s.n_o; j["h_dim"] = s.h_dim;
                 },
                 [&](const PermutedRegression& s) {
                   j["d"] = s.d; j["m"] = s.m; j["n_i"] = s.n_i; j["n_o"] = s.n_o;
                 }},
             spec.model);
  return j;
}

ModelSpec model_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("model") || !j.at("model").is_string()) {
    throw std::invalid_argument("model spec must be an object with a string 'model' field");
  }
  const std::string name = j.at("model").get<std::string>();
  if (name == "unstructured") return {Unstructured{count(j, "m1"), count(j, "r"), count(j, "n_i"), count(j, "n_o")}};
  if (name == "outlier-subspace") {
    return {OutlierSubspace{count(j, "m1"), count(j, "r"), count(j, "r_o"), count(j, "n_i"), count(j, "n_o")}};
  }
  if (name == "noisy-inliers") {
    if (!j.contains("base")) throw std::invalid_argument("noisy-inliers: missing field 'base'");
    return {NoisyInliers{std::make_shared<const ModelSpec>(model_spec_from_json(j.at("base"))), real(j, "sigma_n")}};
  }
  if (name == "clustered-outliers") {
    return {ClusteredOutliers{count(j, "m1"), count(j, "r"), count(j, "n_i"), count(j, "n_o"), real(j, "eta")}};
  }
  if (name == "union-inliers") {
    if (!j.contains("n_i_k") || !j.at("n_i_k").is_array()) {
      throw std::invalid_argument("union-inliers: field 'n_i_k' must be an array");
    }
    return {UnionInliers{count(j, "m1"), count(j, "m"), count(j, "d"),
                         j.at("n_i_k").get<std::vector<std::size_t>>(), count(j, "n_o")}};
  }
  if (name == "clustered-inliers") {
    ClusteredInliers s{count(j, "m1"), count(j, "r"), count(j, "n_i"), real(j, "gamma")};
    if (j.contains("n_o")) s.n_o = count(j, "n_o");
    if (j.contains("r_o")) s.r_o = count(j, "r_o");
    return {s};
  }
  if (name == "near-subspace") {
    NearSubspaceOutliers s{count(j, "m1"), count(j, "r"), count(j, "n_i"), count(j, "n_o")};
    if (j.contains("h_dim")) s.h_dim = count(j, "h_dim");
    return {s};
  }
  if (name == "perm-reg") return {PermutedRegression{count(j, "d"), count(j, "m"), count(j, "n_i"), count(j, "n_o")}};
  throw std::invalid_argument("unknown model '" + name + "'");
}

Json truth_to_json(const Dataset& ds) {
  Json j;
  j["mask"] = ds.outlier_mask;
  j["U"] = columns_to_json(ds.u_true.basis());
  j["spec"] = model_spec_to_json(ds.spec);
  j["seed"] = ds.seed;
  j["psi"] = optional_number(ds.psi);
  j["snr"] = optional_number(ds.snr);
  if (ds.outlier_basis) j["outlier_basis"] = columns_to_json(ds.outlier_basis->basis());
  if (!ds.cluster_bases.empty()) {
    Json clusters = Json::array();
    for (const auto& c : ds.cluster_bases) clusters.push_back(columns_to_json(c.basis()));
    j["cluster_bases"] = std::move(clusters);
  }
  if (ds.cluster_center) j["cluster_center"] = std::vector<double>(ds.cluster_center->begin(), ds.cluster_center->end());
  if (!ds.notes.empty()) j["notes"] = ds.notes;
  return j;
}

SubspaceBasis truth_basis_from_json(const Json& j) {
  if (!j.contains("U") || !j.at("U").is_array() || j.at("U").empty()) {
    throw std::invalid_argument("truth: field 'U' must be a nonempty array of columns");
  }
  const Json& cols = j.at("U");
  const std::size_t rows = cols.at(0).size();
  Matrix u(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols.at(c).size() != rows) throw std::invalid_argument("truth: ragged basis columns");
    for (std::size_t r = 0; r < rows; ++r) {
      u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols.at(c).at(r).get<double>();
    }
  }
  return SubspaceBasis(rows, std::move(u));
}

std::vector<bool> truth_mask_from_json(const Json& j) {
  if (!j.contains("mask")) throw std::invalid_argument("truth: missing field 'mask'");
  return j.at("mask").get<std::vector<bool>>();
}

Json recovery_to_json(const RecoveryResult& r, const SelectionStrategy& strategy) {
  Json j;
  j["selected"] = r.selected;
  j["dim"] = r.basis.dim();
  j["basis"] = columns_to_json(r.basis.basis());
  j["method"] = std::string(to_string(r.scores.method));
  j["strategy"] = strategy_name(strategy);
  return j;
}

ConditionParams condition_params_from_json(const Json& input) {
  Json j = input;
  ConditionParams p;
  if (j.is_object() && j.size() == 1 && !j.contains("theorem") && j.begin().value().is_object()) {
    p.theorem = parse_theorem(j.begin().key());
    j = j.begin().value();
  } else if (j.is_object() && j.contains("theorem")) {
    p.theorem = parse_theorem(j.at("theorem").get<std::string>());
  } else {
    throw std::invalid_argument("theory params must name a theorem (\"theorem\": \"T1\" or {\"T1\": {...}})");
  }

  static const std::set<std::string> known{
      "theorem", "delta", "n_i", "n_o", "r", "m1", "psi", "r_o", "outlier_complement_affinity",
      "inlier_outlier_affinity", "sigma_n", "t_min", "t_max", "eta", "q_perp", "m", "d", "vartheta", "n_i_k"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown theory field '" + key + "'");
  }
  auto opt = [&](const char* key, std::optional<double>& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = real(j, key);
  };
  if (j.contains("delta")) p.delta = real(j, "delta");
  opt("n_i", p.n_i); opt("n_o", p.n_o); opt("r", p.r); opt("m1", p.m1); opt("psi", p.psi);
  opt("r_o", p.r_o);
  opt("outlier_complement_affinity", p.outlier_complement_affinity);
  opt("inlier_outlier_affinity", p.inlier_outlier_affinity);
  opt("sigma_n", p.sigma_n); opt("t_min", p.t_min); opt("t_max", p.t_max);
  opt("eta", p.eta); opt("q_perp", p.q_perp);
  opt("m", p.m); opt("d", p.d); opt("vartheta", p.vartheta);
  if (j.contains("n_i_k")) p.n_i_k = j.at("n_i_k").get<std::vector<double>>();
  return p;
}

Json condition_report_to_json(const ConditionReport& r) {
  Json j;
  j["theorem"] = std::string(to_string(r.theorem));
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin();
  j["holds"] = r.holds;
  j["probability_floor"] = r.probability_floor;
  Json terms = Json::object();
  for (const auto& [name, value] : r.terms) terms[name] = value;
  j["terms"] = std::move(terms);
  j["notes"] = r.notes;
  return j;
}

Json experiment_config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["kind"] = std::string(to_string(cfg.kind));
  Json grid = Json::object();
  for (const auto& axis : cfg.grid) grid[axis.name] = axis.values;
  j["grid"] = std::move(grid);
  Json params = Json::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  j["params"] = std::move(params);
  Json methods = Json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = std::move(methods);
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["success_rule"] = std::string(to_string(cfg.success_rule));
  j["rank_ratio"] = optional_number(cfg.rank_ratio);
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("experiment config needs a 'kind'");
  static const std::set<std::string> known{"kind",        "grid",         "params",     "methods", "trials",
                                           "master_seed", "success_rule", "rank_ratio", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config field '" + key + "'");
  }
  ExperimentConfig cfg = default_config(parse_experiment_kind(j.at("kind").get<std::string>()));
  if (j.contains("grid")) {
    cfg.grid.clear();
    const Json& g = j.at("grid");
    if (g.is_object()) {
      for (const auto& [name, values] : g.items()) cfg.grid.push_back({name, values.get<std::vector<double>>()});
    } else if (g.is_array()) {
      for (const auto& axis : g) {
        cfg.grid.push_back({axis.at("name").get<std::string>(), axis.at("values").get<std::vector<double>>()});
      }
    } else {
      throw std::invalid_argument("'grid' must be an object or an array of axes");
    }
    // Swept names override fixed defaults.
    for (const auto& axis : cfg.grid) cfg.params.erase(axis.name);
  }
  if (j.contains("params")) {
    for (const auto& [name, value] : j.at("params").items()) {
      cfg.params[name] = value.get<double>();
      // A fixed value replaces a default sweep over the same parameter.
      if (!j.contains("grid")) {
        std::erase_if(cfg.grid, [&](const GridAxis& a) { return a.name == name; });
      }
    }
  }
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("success_rule")) cfg.success_rule = parse_success_rule(j.at("success_rule").get<std::string>());
  if (j.contains("rank_ratio") && !j.at("rank_ratio").is_null()) cfg.rank_ratio = j.at("rank_ratio").get<double>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<std::size_t>();
  for (const auto& axis : cfg.grid) {
    if (cfg.params.count(axis.name)) {
      throw std::invalid_argument("parameter '" + axis.name + "' is both fixed and swept");
    }
  }
  return cfg;
}

void write_scores_csv(std::ostream& out, const ScoreVector& x) {
  out << "index,score,method\n";
  const auto method = to_string(x.method);
  for (Eigen::Index i = 0; i < x.values.size(); ++i) {
    out << i << ',' << format_double(x.values(i)) << ',' << method << '\n';
  }
}

}  // namespace ncp
