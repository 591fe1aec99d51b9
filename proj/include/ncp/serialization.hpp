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

#include "ncp/harness.hpp"
#include "ncp/recovery.hpp"
#include "ncp/synthgen.hpp"
#include "ncp/theory.hpp"

#include <json.hpp>

#include <iosfwd>

namespace ncp {

using Json = nlohmann::ordered_json;

Json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const Json& j);

/// { "mask", "U" (list of columns), "spec", "seed", "psi", "snr", ... }
Json truth_to_json(const Dataset& ds);
/// Reads "U" back as a basis.
SubspaceBasis truth_basis_from_json(const Json& j);
std::vector<bool> truth_mask_from_json(const Json& j);

/// { "selected", "dim", "basis" (list of columns), "method", "strategy" }
Json recovery_to_json(const RecoveryResult& r, const SelectionStrategy& strategy);

/// Accepts either {"theorem": "T1", ...} or {"T1": {...}}.
ConditionParams condition_params_from_json(const Json& j);
Json condition_report_to_json(const ConditionReport& r);

Json experiment_config_to_json(const ExperimentConfig& cfg);
/// Fields absent from `j` keep the defaults for its kind.
ExperimentConfig experiment_config_from_json(const Json& j);

/// Header "index,score,method"; one row per column, 0-based.
void write_scores_csv(std::ostream& out, const ScoreVector& x);

}  // namespace ncp
