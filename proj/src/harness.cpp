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

#include "ncp/harness.hpp"

#include "ncp/matrix_io.hpp"
#include "ncp/recovery.hpp"
#include "ncp/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace ncp {

namespace {

const std::map<ExperimentKind, std::set<std::string>>& known_params() {
  static const std::map<ExperimentKind, std::set<std::string>> table{
      {ExperimentKind::kPhase, {"m1", "r", "n_i", "n_o"}},
      {ExperimentKind::kNoiseSweep, {"m1", "r", "r_o", "n_i", "n_o", "snr", "gamma", "keep_fraction"}},
      {ExperimentKind::kSeparation, {"m1", "r", "n_i", "n_o", "h_dim"}},
      {ExperimentKind::kPermReg, {"d", "m", "n_i", "n_o"}},
  };
  return table;
}

std::size_t count_param(const std::map<std::string, double>& v, const std::string& name) {
  auto it = v.find(name);
  if (it == v.end()) throw std::invalid_argument("missing experiment parameter '" + name + "'");
  const double x = it->second;
  if (!(x >= 0.0) || x != std::floor(x)) {
    throw std::invalid_argument("parameter '" + name + "' must be a nonnegative integer");
  }
  return static_cast<std::size_t>(x);
}

double real_param(const std::map<std::string, double>& v, const std::string& name) {
  auto it = v.find(name);
  if (it == v.end()) throw std::invalid_argument("missing experiment parameter '" + name + "'");
  return it->second;
}

std::size_t target_rank(const ExperimentConfig& cfg, const std::map<std::string, double>& v) {
  return cfg.kind == ExperimentKind::kPermReg ? count_param(v, "d") : count_param(v, "r");
}

// Noisy data never passes an exact rank test, so the noise sweep spans the
// best keep_fraction of the columns and keeps their top r directions.
SelectionStrategy strategy_for(const ExperimentConfig& cfg, const std::map<std::string, double>& v) {
  const std::size_t r = target_rank(cfg, v);
  if (cfg.kind == ExperimentKind::kNoiseSweep) {
    const double keep = v.count("keep_fraction") ? real_param(v, "keep_fraction") : 0.5;
    return FixedFraction{keep, r};
  }
  return RankGreedy{r};
}

double rank_cut(const ExperimentConfig& cfg) {
  if (cfg.rank_ratio) return *cfg.rank_ratio;
  return cfg.kind == ExperimentKind::kNoiseSweep ? kNoisyRankRatio : kDefaultRankTol;
}

std::map<std::string, double> grid_values(const ExperimentConfig& cfg, std::size_t point,
                                          std::vector<double>& coords) {
  std::map<std::string, double> values = cfg.params;
  coords.assign(cfg.grid.size(), 0.0);
  for (std::size_t a = cfg.grid.size(); a-- > 0;) {
    const auto& axis = cfg.grid[a];
    coords[a] = axis.values[point % axis.values.size()];
    point /= axis.values.size();
    values[axis.name] = coords[a];
  }
  return values;
}

std::size_t grid_size(const ExperimentConfig& cfg) {
  std::size_t n = 1;
  for (const auto& axis : cfg.grid) n *= axis.values.size();
  return n;
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kPhase: return "phase";
    case ExperimentKind::kNoiseSweep: return "noise-sweep";
    case ExperimentKind::kSeparation: return "separation";
    case ExperimentKind::kPermReg: return "perm-reg";
  }
  return "unknown";
}

std::string_view to_string(SuccessRule r) {
  switch (r) {
    case SuccessRule::kExactRecovery: return "exact";
    case SuccessRule::kResidualSeparation: return "residual";
    case SuccessRule::kScoreSeparation: return "score";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::kPhase, ExperimentKind::kNoiseSweep, ExperimentKind::kSeparation,
                 ExperimentKind::kPermReg}) {
    if (s == to_string(k)) return k;
  }
  if (s == "noise" || s == "noisesweep") return ExperimentKind::kNoiseSweep;
  if (s == "permreg") return ExperimentKind::kPermReg;
  throw std::invalid_argument("unknown experiment kind '" + std::string(s) + "'");
}

SuccessRule parse_success_rule(std::string_view s) {
  if (s == "exact" || s == "ExactRecovery") return SuccessRule::kExactRecovery;
  if (s == "residual" || s == "ResidualSeparation") return SuccessRule::kResidualSeparation;
  if (s == "score" || s == "ScoreSeparation") return SuccessRule::kScoreSeparation;
  throw std::invalid_argument("unknown success rule '" + std::string(s) + "'");
}

SuccessRule default_success_rule(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kNoiseSweep: return SuccessRule::kResidualSeparation;
    case ExperimentKind::kSeparation: return SuccessRule::kScoreSeparation;
    default: return SuccessRule::kExactRecovery;
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.success_rule = default_success_rule(kind);
  switch (kind) {
    case ExperimentKind::kPhase:
      cfg.params = {{"m1", 50}, {"r", 4}};
      cfg.grid = {{"n_i", {8, 16, 24, 32, 40}}, {"n_o", {100, 500, 1000, 2000}}};
      cfg.methods = {Method::kAncp, Method::kSncp};
      cfg.trials = 20;
      break;
    case ExperimentKind::kNoiseSweep:
      cfg.params = {{"m1", 200}, {"r", 5}, {"r_o", 10}, {"n_i", 100}, {"n_o", 100}, {"gamma", 0},
                    {"keep_fraction", 0.5}};
      cfg.grid = {{"snr", {0.25, 1, 4, 16, 100}}};
      cfg.methods = {Method::kAncp, Method::kSncp, Method::kCop};
      cfg.trials = 20;
      break;
    case ExperimentKind::kSeparation:
      cfg.params = {{"m1", 100}, {"r", 8}, {"n_i", 180}, {"h_dim", 4}};
      cfg.grid = {{"n_o", {40}}};
      cfg.methods = {Method::kAncp, Method::kSncp, Method::kCop};
      cfg.trials = 50;
      break;
    case ExperimentKind::kPermReg:
      cfg.params = {{"d", 10}, {"m", 10}, {"n_i", 200}};
      cfg.grid = {{"n_o", {20, 50, 100}}};
      cfg.methods = {Method::kAncp, Method::kSncp, Method::kCop};
      cfg.trials = 50;
      break;
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (cfg.methods.empty()) throw std::invalid_argument("at least one method is required");
  if (cfg.grid.empty()) throw std::invalid_argument("grid must have at least one axis");
  const auto& known = known_params().at(cfg.kind);
  std::set<std::string> seen;
  for (const auto& axis : cfg.grid) {
    if (axis.values.empty()) throw std::invalid_argument("grid axis '" + axis.name + "' is empty");
    if (!known.count(axis.name)) {
      throw std::invalid_argument("grid axis '" + axis.name + "' is not a parameter of " +
                                  std::string(to_string(cfg.kind)));
    }
    if (!seen.insert(axis.name).second) throw std::invalid_argument("duplicate grid axis '" + axis.name + "'");
  }
  for (const auto& [name, value] : cfg.params) {
    if (!known.count(name)) {
      throw std::invalid_argument("parameter '" + name + "' is not used by " + std::string(to_string(cfg.kind)));
    }
    if (!std::isfinite(value)) throw std::invalid_argument("parameter '" + name + "' must be finite");
  }
  if (cfg.rank_ratio && !(*cfg.rank_ratio > 0.0 && *cfg.rank_ratio < 1.0)) {
    throw std::invalid_argument("rank_ratio must lie in (0, 1)");
  }
  std::vector<double> coords;
  const auto values = grid_values(cfg, 0, coords);
  for (const auto& name : known) {
    if (name == "gamma" || name == "h_dim" || name == "keep_fraction") continue;
    if (!values.count(name)) throw std::invalid_argument("missing experiment parameter '" + name + "'");
  }
}

std::uint64_t trial_seed(std::uint64_t master_seed, const std::vector<double>& grid_point,
                         Method method, std::size_t trial) {
  std::uint64_t key = derive_key(master_seed, {static_cast<std::uint64_t>(grid_point.size())});
  for (double v : grid_point) key = derive_key(key, {std::bit_cast<std::uint64_t>(v)});
  return derive_key(key, {static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(trial)});
}

ModelSpec model_for(const ExperimentConfig& cfg, const std::map<std::string, double>& v) {
  switch (cfg.kind) {
    case ExperimentKind::kPhase:
      return ModelSpec{Unstructured{count_param(v, "m1"), count_param(v, "r"), count_param(v, "n_i"),
                                    count_param(v, "n_o")}};
    case ExperimentKind::kNoiseSweep: {
      const double snr = real_param(v, "snr");
      if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
      const double gamma = v.count("gamma") ? real_param(v, "gamma") : 0.0;
      ModelSpec base;
      if (gamma > 0.0) {
        base.model = ClusteredInliers{count_param(v, "m1"), count_param(v, "r"), count_param(v, "n_i"),
                                      gamma, count_param(v, "n_o"), count_param(v, "r_o")};
      } else {
        base.model = OutlierSubspace{count_param(v, "m1"), count_param(v, "r"), count_param(v, "r_o"),
                                     count_param(v, "n_i"), count_param(v, "n_o")};
      }
      // SNR = ||A||_F^2 / ||E||_F^2 = 1 / sigma_n^2 for unit-norm A and N columns.
      return ModelSpec{NoisyInliers{std::make_shared<const ModelSpec>(std::move(base)), 1.0 / std::sqrt(snr)}};
    }
    case ExperimentKind::kSeparation: {
      NearSubspaceOutliers s{count_param(v, "m1"), count_param(v, "r"), count_param(v, "n_i"),
                             count_param(v, "n_o")};
      if (v.count("h_dim")) s.h_dim = count_param(v, "h_dim");
      return ModelSpec{s};
    }
    case ExperimentKind::kPermReg:
      return ModelSpec{PermutedRegression{count_param(v, "d"), count_param(v, "m"), count_param(v, "n_i"),
                                          count_param(v, "n_o")}};
  }
  throw std::invalid_argument("unknown experiment kind");
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const std::map<std::string, double>& values,
                       Method method, std::uint64_t seed) {
  const Dataset ds = generate(model_for(cfg, values), seed);
  const SelectionStrategy strategy = strategy_for(cfg, values);

  const auto start = std::chrono::steady_clock::now();
  const DataMatrix normalized = normalize_columns(ds.d);
  const ScoreVector x = score(normalized, method, rank_cut(cfg));
  const RecoveryResult rec = select_columns(normalized, x, strategy);
  const auto stop = std::chrono::steady_clock::now();

  TrialOutcome out;
  out.ms = std::chrono::duration<double, std::milli>(stop - start).count();
  out.error = recovery_error(ds.u_true, rec.basis);
  switch (cfg.success_rule) {
    case SuccessRule::kExactRecovery: out.success = out.error < kExactRecoveryThreshold; break;
    case SuccessRule::kResidualSeparation:
      out.success = trial_success_residual(normalized, rec.basis, ds.outlier_mask);
      break;
    case SuccessRule::kScoreSeparation: out.success = separation_holds(x.values, ds.outlier_mask); break;
  }
  return out;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::size_t points = grid_size(cfg);
  const std::size_t per_point = cfg.methods.size() * cfg.trials;
  const std::size_t total = points * per_point;

  struct Slot {
    TrialOutcome outcome;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::vector<double> coords;
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t point = task / per_point;
      const std::size_t method_index = (task % per_point) / cfg.trials;
      const std::size_t trial = task % cfg.trials;
      const auto values = grid_values(cfg, point, coords);
      const Method method = cfg.methods[method_index];
      try {
        slots[task].outcome = run_trial(cfg, values, method, trial_seed(cfg.master_seed, coords, method, trial));
      } catch (const std::exception& e) {
        slots[task].error = e.what();
      }
    }
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ResultTable table;
  table.master_seed = cfg.master_seed;
  table.config_hash = config_hash(cfg);
  for (const auto& axis : cfg.grid) table.grid_names.push_back(axis.name);

  std::vector<double> coords;
  for (std::size_t point = 0; point < points; ++point) {
    grid_values(cfg, point, coords);
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      ResultRow row;
      row.grid_values = coords;
      row.method = cfg.methods[mi];
      row.trials = cfg.trials;
      std::size_t successes = 0;
      double err_sum = 0.0, ms_sum = 0.0;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const Slot& s = slots[point * per_point + mi * cfg.trials + t];
        if (s.error && !row.error) row.error = "trial " + std::to_string(t) + ": " + *s.error;
        successes += s.outcome.success ? 1 : 0;
        err_sum += s.outcome.error;
        ms_sum += s.outcome.ms;
      }
      if (row.error) {
        row.success_rate = 0.0;
        row.mean_error = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.success_rate = static_cast<double>(successes) / static_cast<double>(cfg.trials);
        row.mean_error = err_sum / static_cast<double>(cfg.trials);
      }
      row.mean_ms = ms_sum / static_cast<double>(cfg.trials);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string canonical = experiment_config_to_json(cfg).dump();
  return derive_key(0, canonical);
}

void write_result_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& name : table.grid_names) out << "grid_" << name << ',';
  out << "method,success_rate,mean_error,mean_ms,trials,seed\n";
  for (const auto& row : table.rows) {
    for (double v : row.grid_values) out << format_double(v) << ',';
    char ms[32];
    std::snprintf(ms, sizeof(ms), "%.3f", row.mean_ms);
    out << to_string(row.method) << ',' << format_double(row.success_rate) << ','
        << (std::isnan(row.mean_error) ? std::string("nan") : format_double(row.mean_error)) << ',' << ms
        << ',' << row.trials << ',' << table.master_seed << '\n';
  }
}

}  // namespace ncp
