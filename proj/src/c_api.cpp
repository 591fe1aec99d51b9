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

#include "ncp/ncp.h"

#include "ncp/harness.hpp"
#include "ncp/matrix_io.hpp"
#include "ncp/recovery.hpp"
#include "ncp/scoring.hpp"
#include "ncp/serialization.hpp"
#include "ncp/synthgen.hpp"
#include "ncp/theory.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

struct ncp_matrix {
  ncp::DataMatrix value;
};
struct ncp_scores {
  ncp::ScoreVector value;
};
struct ncp_recovery {
  ncp::RecoveryResult value;
  ncp::SelectionStrategy strategy;
};
struct ncp_dataset {
  ncp::Dataset value;
};
struct ncp_table {
  ncp::ResultTable value;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_error_line = 0;

ncp_status fail(ncp_status code, const std::string& msg) {
  g_error = msg;
  return code;
}

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
ncp_status guard(F&& f) {
  g_error_line = 0;
  try {
    f();
    return NCP_OK;
  } catch (const ncp::ParseError& e) {
    g_error_line = e.line();
    return fail(NCP_ERR_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(NCP_ERR_PARSE, std::string("json: ") + e.what());
  } catch (const IoError& e) {
    return fail(NCP_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NCP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(NCP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(NCP_ERR_NUMERIC, e.what());
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    if (msg == "insufficient rank") return fail(NCP_ERR_INSUFFICIENT_RANK, msg);
    if (msg.rfind("cannot ", 0) == 0 || msg.rfind("write failed", 0) == 0) return fail(NCP_ERR_IO, msg);
    return fail(NCP_ERR_INTERNAL, msg);
  } catch (const std::exception& e) {
    return fail(NCP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NCP_ERR_INTERNAL, "unknown error");
  }
}

#define NCP_REQUIRE(cond, what)                                        \
  do {                                                                 \
    if (!(cond)) return fail(NCP_ERR_INVALID_ARGUMENT, what);          \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ncp::Method to_method(ncp_method m) {
  switch (m) {
    case NCP_METHOD_ANCP: return ncp::Method::kAncp;
    case NCP_METHOD_SNCP: return ncp::Method::kSncp;
    case NCP_METHOD_COP: return ncp::Method::kCop;
  }
  throw std::invalid_argument("unknown method code");
}

ncp::Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ncp::Json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

extern "C" {

const char* ncp_version(void) { return "0.1.0"; }
const char* ncp_last_error(void) { return g_error.c_str(); }
size_t ncp_last_error_line(void) { return g_error_line; }
void ncp_string_free(char* s) { std::free(s); }

ncp_status ncp_method_from_string(const char* name, ncp_method* out) {
  NCP_REQUIRE(name && out, "null argument");
  return guard([&] {
    switch (ncp::parse_method(name)) {
      case ncp::Method::kAncp: *out = NCP_METHOD_ANCP; break;
      case ncp::Method::kSncp: *out = NCP_METHOD_SNCP; break;
      case ncp::Method::kCop: *out = NCP_METHOD_COP; break;
    }
  });
}

ncp_status ncp_matrix_create(size_t rows, size_t cols, const double* values, ncp_matrix** out) {
  NCP_REQUIRE(out && (values || rows * cols == 0), "null argument");
  return guard([&] {
    ncp::Matrix m = Eigen::Map<const ncp::Matrix>(values, static_cast<Eigen::Index>(rows),
                                                  static_cast<Eigen::Index>(cols));
    *out = new ncp_matrix{ncp::DataMatrix(std::move(m))};
  });
}

ncp_status ncp_matrix_read_csv(const char* path, ncp_matrix** out) {
  NCP_REQUIRE(path && out, "null argument");
  return guard([&] {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open ") + path);
    *out = new ncp_matrix{ncp::DataMatrix(ncp::read_matrix_csv(in))};
  });
}

ncp_status ncp_matrix_write_csv(const ncp_matrix* m, const char* path) {
  NCP_REQUIRE(m && path, "null argument");
  return guard([&] {
    std::ostringstream text;
    ncp::write_matrix_csv(text, m->value.values());
    write_text(path, text.str());
  });
}

size_t ncp_matrix_rows(const ncp_matrix* m) { return m ? m->value.rows() : 0; }
size_t ncp_matrix_cols(const ncp_matrix* m) { return m ? m->value.cols() : 0; }

ncp_status ncp_matrix_copy_values(const ncp_matrix* m, double* out, size_t len) {
  NCP_REQUIRE(m && out, "null argument");
  const auto& v = m->value.values();
  NCP_REQUIRE(len >= static_cast<size_t>(v.size()), "output buffer too small");
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
  return NCP_OK;
}

void ncp_matrix_free(ncp_matrix* m) { delete m; }

ncp_status ncp_score(const ncp_matrix* d, ncp_method method, double rank_tol, ncp_scores** out) {
  NCP_REQUIRE(d && out, "null argument");
  return guard([&] {
    const double tol = rank_tol > 0.0 ? rank_tol : ncp::kDefaultRankTol;
    *out = new ncp_scores{ncp::score(d->value, to_method(method), tol)};
  });
}

size_t ncp_scores_size(const ncp_scores* s) { return s ? static_cast<size_t>(s->value.values.size()) : 0; }

ncp_status ncp_scores_copy(const ncp_scores* s, double* out, size_t len) {
  NCP_REQUIRE(s && out, "null argument");
  const auto n = static_cast<size_t>(s->value.values.size());
  NCP_REQUIRE(len >= n, "output buffer too small");
  std::memcpy(out, s->value.values.data(), sizeof(double) * n);
  return NCP_OK;
}

ncp_status ncp_scores_write_csv(const ncp_scores* s, const char* path) {
  NCP_REQUIRE(s && path, "null argument");
  return guard([&] {
    std::ostringstream text;
    ncp::write_scores_csv(text, s->value);
    write_text(path, text.str());
  });
}

void ncp_scores_free(ncp_scores* s) { delete s; }

ncp_status ncp_recover(const ncp_matrix* d, const ncp_scores* s, const ncp_selection* sel, ncp_recovery** out) {
  NCP_REQUIRE(d && s && sel && out, "null argument");
  return guard([&] {
    const double tol = sel->tol > 0.0 ? sel->tol : ncp::kSelectionRankTol;
    ncp::SelectionStrategy strategy;
    switch (sel->kind) {
      case NCP_STRATEGY_RANK_GREEDY: strategy = ncp::RankGreedy{sel->target_rank, tol}; break;
      case NCP_STRATEGY_FIXED_FRACTION:
        strategy = ncp::FixedFraction{sel->keep_fraction > 0.0 ? sel->keep_fraction : 0.5, sel->target_rank};
        break;
      case NCP_STRATEGY_ADAPTIVE_PROJECTION: strategy = ncp::AdaptiveProjection{sel->target_rank, tol}; break;
      default: throw std::invalid_argument("unknown selection strategy");
    }
    *out = new ncp_recovery{ncp::select_columns(d->value, s->value, strategy), strategy};
  });
}

size_t ncp_recovery_dim(const ncp_recovery* r) { return r ? r->value.basis.dim() : 0; }

ncp_status ncp_recovery_to_json(const ncp_recovery* r, char** out_json) {
  NCP_REQUIRE(r && out_json, "null argument");
  return guard([&] { *out_json = dup_string(ncp::recovery_to_json(r->value, r->strategy).dump()); });
}

ncp_status ncp_recovery_error_vs_truth(const ncp_recovery* r, const char* truth_path, double* out) {
  NCP_REQUIRE(r && truth_path && out, "null argument");
  return guard([&] {
    const ncp::SubspaceBasis truth = ncp::truth_basis_from_json(read_json_file(truth_path));
    *out = ncp::recovery_error(truth, r->value.basis);
  });
}

void ncp_recovery_free(ncp_recovery* r) { delete r; }

ncp_status ncp_dataset_generate(const char* spec_json, uint64_t seed, ncp_dataset** out) {
  NCP_REQUIRE(spec_json && out, "null argument");
  return guard([&] {
    const ncp::ModelSpec spec = ncp::model_spec_from_json(ncp::Json::parse(spec_json));
    *out = new ncp_dataset{ncp::generate(spec, seed)};
  });
}

ncp_status ncp_dataset_write(const ncp_dataset* ds, const char* data_csv_path, const char* truth_json_path) {
  NCP_REQUIRE(ds && data_csv_path && truth_json_path, "null argument");
  return guard([&] {
    std::ostringstream data;
    ncp::write_matrix_csv(data, ds->value.d.values());
    write_text(data_csv_path, data.str());
    write_text(truth_json_path, ncp::truth_to_json(ds->value).dump(2) + "\n");
  });
}

ncp_status ncp_dataset_matrix(const ncp_dataset* ds, ncp_matrix** out) {
  NCP_REQUIRE(ds && out, "null argument");
  return guard([&] { *out = new ncp_matrix{ds->value.d}; });
}

ncp_status ncp_dataset_truth_json(const ncp_dataset* ds, char** out_json) {
  NCP_REQUIRE(ds && out_json, "null argument");
  return guard([&] { *out_json = dup_string(ncp::truth_to_json(ds->value).dump()); });
}

void ncp_dataset_free(ncp_dataset* ds) { delete ds; }

ncp_status ncp_experiment_run(const char* config_json, ncp_table** out) {
  NCP_REQUIRE(config_json && out, "null argument");
  return guard([&] {
    const ncp::ExperimentConfig cfg = ncp::experiment_config_from_json(ncp::Json::parse(config_json));
    *out = new ncp_table{ncp::run_experiment(cfg)};
  });
}

ncp_status ncp_table_to_csv(const ncp_table* t, char** out_csv) {
  NCP_REQUIRE(t && out_csv, "null argument");
  return guard([&] {
    std::ostringstream text;
    ncp::write_result_csv(text, t->value);
    *out_csv = dup_string(text.str());
  });
}

ncp_status ncp_table_write_csv(const ncp_table* t, const char* path) {
  NCP_REQUIRE(t && path, "null argument");
  return guard([&] {
    std::ostringstream text;
    ncp::write_result_csv(text, t->value);
    write_text(path, text.str());
  });
}

ncp_status ncp_table_render_svg(const ncp_table* t, const char* x_param, const char* y_param, ncp_method method,
                                char** out_svg) {
  NCP_REQUIRE(t && x_param && y_param && out_svg, "null argument");
  return guard([&] { *out_svg = dup_string(ncp::render_heatmap(t->value, x_param, y_param, to_method(method))); });
}

ncp_status ncp_table_errors(const ncp_table* t, char** out_text) {
  NCP_REQUIRE(t && out_text, "null argument");
  return guard([&] {
    std::ostringstream text;
    for (const auto& row : t->value.rows) {
      if (!row.error) continue;
      text << "grid";
      for (std::size_t a = 0; a < row.grid_values.size(); ++a) {
        text << ' ' << t->value.grid_names[a] << '=' << ncp::format_double(row.grid_values[a]);
      }
      text << " method=" << ncp::to_string(row.method) << ": " << *row.error << '\n';
    }
    *out_text = dup_string(text.str());
  });
}

uint64_t ncp_table_config_hash(const ncp_table* t) { return t ? t->value.config_hash : 0; }

void ncp_table_free(ncp_table* t) { delete t; }

ncp_status ncp_theory_evaluate(const char* params_json, char** out_report_json) {
  NCP_REQUIRE(params_json && out_report_json, "null argument");
  return guard([&] {
    const ncp::ConditionParams p = ncp::condition_params_from_json(ncp::Json::parse(params_json));
    *out_report_json = dup_string(ncp::condition_report_to_json(ncp::evaluate_condition(p)).dump(2));
  });
}

}  // extern "C"
