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

#include "ncp/scoring.hpp"
#include "ncp/synthgen.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncp {

enum class ExperimentKind { kPhase, kNoiseSweep, kSeparation, kPermReg };
enum class SuccessRule { kExactRecovery, kResidualSeparation, kScoreSeparation };

std::string_view to_string(ExperimentKind k);
std::string_view to_string(SuccessRule r);
ExperimentKind parse_experiment_kind(std::string_view s);
SuccessRule parse_success_rule(std::string_view s);
SuccessRule default_success_rule(ExperimentKind k);

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// Model parameters by kind (fixed in `params` or swept in `grid`):
///   phase        m1, r, n_i, n_o
///   noise-sweep  m1, r, r_o, n_i, n_o, snr, gamma (0 = uniform inliers),
///                keep_fraction (share of top-scored columns spanned)
///   separation   m1, r, n_i, n_o, h_dim
///   perm-reg     d, m, n_i, n_o
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kPhase;
  std::vector<GridAxis> grid;  // cartesian product, first axis varies slowest
  std::map<std::string, double> params;
  std::vector<Method> methods;
  std::size_t trials = 20;
  std::uint64_t master_seed = 1;
  SuccessRule success_rule = SuccessRule::kExactRecovery;
  std::optional<double> rank_ratio;  // r_d cut; defaults depend on kind
  std::size_t threads = 0;           // 0 = hardware concurrency
};

/// Defaults for a kind: parameters, trial count, success rule.
ExperimentConfig default_config(ExperimentKind kind);

void validate(const ExperimentConfig& cfg);

struct ResultRow {
  std::vector<double> grid_values;
  Method method;
  double success_rate = 0.0;
  double mean_error = 0.0;  // mean recovery_error over trials
  double mean_ms = 0.0;     // scoring + selection wall time
  std::size_t trials = 0;
  std::optional<std::string> error;  // set when the grid point aborted
};

struct ResultTable {
  std::vector<std::string> grid_names;
  std::vector<ResultRow> rows;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
};

/// Per-trial dataset seed: depends on every grid coordinate, the method and
/// the trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, const std::vector<double>& grid_point,
                         Method method, std::size_t trial);

/// ModelSpec for one grid point.
ModelSpec model_for(const ExperimentConfig& cfg, const std::map<std::string, double>& values);

/// Outcome of a single trial.
struct TrialOutcome {
  bool success = false;
  double error = 0.0;
  double ms = 0.0;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, const std::map<std::string, double>& values,
                       Method method, std::uint64_t seed);

ResultTable run_experiment(const ExperimentConfig& cfg);

std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Header: grid_<p1>,...,method,success_rate,mean_error,mean_ms,trials,seed
void write_result_csv(std::ostream& out, const ResultTable& table);

/// Grayscale SVG: one cell per (x, y) grid point, luminance = success rate.
/// Throws std::invalid_argument unless the grid is exactly two-dimensional
/// over x_param and y_param and fully populated for `method`.
std::string render_heatmap(const ResultTable& table, const std::string& x_param,
                           const std::string& y_param, Method method);

}  // namespace ncp
