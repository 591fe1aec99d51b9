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

// Command-line front end. Talks to the library only through ncp.h.

#include "ncp/ncp.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure {
  std::string message;
};

// Flag combinations CLI11 cannot express; reported like parse errors.
struct Usage {
  std::string message;
};

void check(ncp_status st, const std::string& context = {}) {
  if (st == NCP_OK) return;
  std::string msg = ncp_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw Failure{msg};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using MatrixPtr = std::unique_ptr<ncp_matrix, Deleter<ncp_matrix, ncp_matrix_free>>;
using ScoresPtr = std::unique_ptr<ncp_scores, Deleter<ncp_scores, ncp_scores_free>>;
using RecoveryPtr = std::unique_ptr<ncp_recovery, Deleter<ncp_recovery, ncp_recovery_free>>;
using DatasetPtr = std::unique_ptr<ncp_dataset, Deleter<ncp_dataset, ncp_dataset_free>>;
using TablePtr = std::unique_ptr<ncp_table, Deleter<ncp_table, ncp_table_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  ncp_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{"cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw Failure{"cannot write " + *path};
  out << text;
  if (!out) throw Failure{"write failed: " + *path};
}

ncp_method method_code(const std::string& name) {
  ncp_method m{};
  check(ncp_method_from_string(name.c_str(), &m));
  return m;
}

const std::vector<std::string> kMethods{"ancp", "sncp", "cop"};
const std::vector<std::string> kStrategies{"rank-greedy", "fixed-fraction", "adaptive-projection"};
const std::vector<std::string> kModels{"unstructured",     "outlier-subspace", "noisy-inliers", "clustered-outliers",
                                       "union-inliers",    "clustered-inliers", "near-subspace", "perm-reg"};

// ---- score --------------------------------------------------------------

struct ScoreArgs {
  std::string input;
  std::string method = "sncp";
  std::string out;
  double rank_tol = 0.0;
};

int run_score(const ScoreArgs& a) {
  ncp_matrix* raw = nullptr;
  check(ncp_matrix_read_csv(a.input.c_str(), &raw), a.input);
  MatrixPtr d(raw);
  ncp_scores* s = nullptr;
  check(ncp_score(d.get(), method_code(a.method), a.rank_tol, &s));
  ScoresPtr scores(s);
  check(ncp_scores_write_csv(scores.get(), a.out.c_str()));
  return kExitOk;
}

// ---- recover ------------------------------------------------------------

struct RecoverArgs {
  std::string input;
  std::string method = "sncp";
  std::string strategy = "rank-greedy";
  std::size_t dim = 0;
  double keep_fraction = 0.5;
  double tol = 0.0;
  double rank_tol = 0.0;
  std::optional<std::string> truth;
  std::optional<std::string> out;
};

int run_recover(const RecoverArgs& a) {
  if (a.strategy != "fixed-fraction" && a.dim == 0) throw Usage{"--dim is required for " + a.strategy};
  ncp_matrix* raw = nullptr;
  check(ncp_matrix_read_csv(a.input.c_str(), &raw), a.input);
  MatrixPtr d(raw);
  ncp_scores* s = nullptr;
  check(ncp_score(d.get(), method_code(a.method), a.rank_tol, &s));
  ScoresPtr scores(s);

  ncp_selection sel{};
  sel.kind = a.strategy == "fixed-fraction"        ? NCP_STRATEGY_FIXED_FRACTION
             : a.strategy == "adaptive-projection" ? NCP_STRATEGY_ADAPTIVE_PROJECTION
                                                   : NCP_STRATEGY_RANK_GREEDY;
  sel.target_rank = a.dim;
  sel.tol = a.tol;
  sel.keep_fraction = a.keep_fraction;
  ncp_recovery* r = nullptr;
  check(ncp_recover(d.get(), scores.get(), &sel, &r));
  RecoveryPtr rec(r);

  char* text = nullptr;
  check(ncp_recovery_to_json(rec.get(), &text));
  Json j = Json::parse(take(text));
  if (a.truth) {
    double err = 0.0;
    check(ncp_recovery_error_vs_truth(rec.get(), a.truth->c_str(), &err), *a.truth);
    j["recovery_error"] = err;
  }
  write_output(a.out, j.dump(2) + "\n");
  return kExitOk;
}

// ---- synth --------------------------------------------------------------

struct SynthArgs {
  std::string model = "unstructured";
  std::size_t m1 = 50, r = 4, n_i = 100, n_o = 500;
  std::optional<std::size_t> r_o, m, d, h_dim;
  std::optional<double> sigma_n, eta, gamma;
  std::vector<std::size_t> n_i_k;
  std::string base = "outlier-subspace";
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

Json base_spec(const std::string& model, const SynthArgs& a) {
  Json j;
  j["model"] = model;
  auto need = [&](const auto& opt, const char* flag) {
    if (!opt) throw Usage{model + " needs " + flag};
    return *opt;
  };
  if (model == "unstructured") {
    j["m1"] = a.m1; j["r"] = a.r; j["n_i"] = a.n_i; j["n_o"] = a.n_o;
  } else if (model == "outlier-subspace") {
    j["m1"] = a.m1; j["r"] = a.r; j["r_o"] = need(a.r_o, "--ro"); j["n_i"] = a.n_i; j["n_o"] = a.n_o;
  } else if (model == "clustered-outliers") {
    j["m1"] = a.m1; j["r"] = a.r; j["n_i"] = a.n_i; j["n_o"] = a.n_o; j["eta"] = need(a.eta, "--eta");
  } else if (model == "union-inliers") {
    if (a.n_i_k.empty()) throw Usage{"union-inliers needs --nik"};
    j["m1"] = a.m1; j["m"] = need(a.m, "--m"); j["d"] = need(a.d, "--d"); j["n_i_k"] = a.n_i_k; j["n_o"] = a.n_o;
  } else if (model == "clustered-inliers") {
    j["m1"] = a.m1; j["r"] = a.r; j["n_i"] = a.n_i; j["gamma"] = need(a.gamma, "--gamma");
    j["n_o"] = a.n_o;
    if (a.r_o) j["r_o"] = *a.r_o;
  } else if (model == "near-subspace") {
    j["m1"] = a.m1; j["r"] = a.r; j["n_i"] = a.n_i; j["n_o"] = a.n_o;
    if (a.h_dim) j["h_dim"] = *a.h_dim;
  } else if (model == "perm-reg") {
    j["d"] = need(a.d, "--d"); j["m"] = need(a.m, "--m"); j["n_i"] = a.n_i; j["n_o"] = a.n_o;
  } else {
    throw Failure{"unsupported base model " + model};
  }
  return j;
}

int run_synth(const SynthArgs& a) {
  Json spec;
  if (a.model == "noisy-inliers") {
    if (a.base == "noisy-inliers") throw Usage{"--base cannot be noisy-inliers"};
    spec["model"] = "noisy-inliers";
    spec["sigma_n"] = a.sigma_n ? *a.sigma_n : throw Usage{"noisy-inliers needs --sigma"};
    spec["base"] = base_spec(a.base, a);
  } else {
    spec = base_spec(a.model, a);
  }
  ncp_dataset* raw = nullptr;
  check(ncp_dataset_generate(spec.dump().c_str(), a.seed, &raw));
  DatasetPtr ds(raw);
  std::filesystem::create_directories(a.out_dir);
  const auto dir = std::filesystem::path(a.out_dir);
  check(ncp_dataset_write(ds.get(), (dir / "data.csv").string().c_str(), (dir / "truth.json").string().c_str()));
  return kExitOk;
}

// ---- sweeps -------------------------------------------------------------

struct SweepArgs {
  std::string kind;
  std::optional<std::string> config;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::optional<std::string> success_rule;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<std::string> x_axis, y_axis;
};

std::string svg_path_for(const std::string& base, const std::string& method, bool several) {
  if (!several) return base;
  std::filesystem::path p(base);
  const std::string stem = p.stem().string() + "_" + method;
  return (p.parent_path() / (stem + (p.has_extension() ? p.extension().string() : ".svg"))).string();
}

int run_sweep(const SweepArgs& a) {
  Json cfg = a.config ? Json::parse(read_file(*a.config)) : Json::object();
  if (!cfg.is_object()) throw Failure{"config must be a JSON object"};
  if (cfg.contains("kind") && cfg.at("kind") != a.kind) {
    throw Failure{"config kind '" + cfg.at("kind").get<std::string>() + "' does not match subcommand " + a.kind};
  }
  cfg["kind"] = a.kind;
  if (a.trials) cfg["trials"] = *a.trials;
  if (a.seed) cfg["master_seed"] = *a.seed;
  if (!a.methods.empty()) cfg["methods"] = a.methods;
  if (a.success_rule) cfg["success_rule"] = *a.success_rule;
  if (a.threads) cfg["threads"] = *a.threads;

  ncp_table* raw = nullptr;
  check(ncp_experiment_run(cfg.dump().c_str(), &raw));
  TablePtr table(raw);

  char* errs = nullptr;
  check(ncp_table_errors(table.get(), &errs));
  const std::string errors = take(errs);
  if (!errors.empty()) std::cerr << errors;

  char* csv = nullptr;
  check(ncp_table_to_csv(table.get(), &csv));
  write_output(a.out, take(csv));

  if (a.svg) {
    // Axis names come from the CSV header: grid_<name> columns in order.
    char* head = nullptr;
    check(ncp_table_to_csv(table.get(), &head));
    const std::string text = take(head);
    std::vector<std::string> axes;
    std::stringstream header(text.substr(0, text.find('\n')));
    for (std::string col; std::getline(header, col, ',');) {
      if (col.rfind("grid_", 0) == 0) axes.push_back(col.substr(5));
    }
    if (axes.size() != 2 && !(a.x_axis && a.y_axis)) {
      throw Failure{"--svg needs a two-parameter grid"};
    }
    const std::string x = a.x_axis ? *a.x_axis : axes[0];
    const std::string y = a.y_axis ? *a.y_axis : axes[1];
    std::vector<std::string> methods = a.methods;
    if (methods.empty()) {
      Json parsed = cfg.contains("methods") ? cfg.at("methods") : Json();
      if (parsed.is_array()) {
        for (const auto& m : parsed) methods.push_back(m.get<std::string>());
      }
    }
    if (methods.empty()) {
      // Defaults of the kind: recover them from the method column.
      std::stringstream rows(text);
      std::string line;
      std::getline(rows, line);
      while (std::getline(rows, line)) {
        std::stringstream fields(line);
        std::string f;
        for (std::size_t i = 0; i <= axes.size(); ++i) std::getline(fields, f, ',');
        if (std::find(methods.begin(), methods.end(), f) == methods.end()) methods.push_back(f);
      }
    }
    for (const auto& m : methods) {
      char* svg = nullptr;
      check(ncp_table_render_svg(table.get(), x.c_str(), y.c_str(), method_code(m), &svg));
      write_output(svg_path_for(*a.svg, m, methods.size() > 1), take(svg));
    }
  }
  return kExitOk;
}

// ---- theory -------------------------------------------------------------

struct TheoryArgs {
  std::string params;
  std::optional<double> delta;
  std::optional<std::string> out;
};

int run_theory(const TheoryArgs& a) {
  Json p = Json::parse(read_file(a.params));
  if (a.delta) {
    if (p.contains("theorem")) {
      p["delta"] = *a.delta;
    } else if (p.is_object() && p.size() == 1 && p.begin().value().is_object()) {
      p.begin().value()["delta"] = *a.delta;
    }
  }
  char* report = nullptr;
  check(ncp_theory_evaluate(p.dump().c_str(), &report));
  write_output(a.out, take(report) + "\n");
  return kExitOk;
}

void add_sweep(CLI::App& app, const std::string& name, const std::string& about, SweepArgs& a,
               CLI::App*& sub) {
  sub = app.add_subcommand(name, about);
  a.kind = name;
  sub->add_option("--config", a.config, "JSON experiment config")->check(CLI::ExistingFile);
  sub->add_option("--trials", a.trials, "trials per grid point and method")->check(CLI::PositiveNumber);
  sub->add_option("--seed", a.seed, "master seed");
  sub->add_option("--methods", a.methods, "methods to run")->check(CLI::IsMember(kMethods))->delimiter(',');
  sub->add_option("--success-rule", a.success_rule, "exact, residual or score")
      ->check(CLI::IsMember({"exact", "residual", "score"}));
  sub->add_option("--threads", a.threads, "worker threads, 0 = hardware");
  sub->add_option("--out", a.out, "result CSV path (default stdout)");
  sub->add_option("--svg", a.svg, "heatmap SVG path; one file per method when several");
  sub->add_option("--x", a.x_axis, "heatmap x parameter");
  sub->add_option("--y", a.y_axis, "heatmap y parameter");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalized coherence pursuit: robust subspace recovery tools", "ncp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ncp_version()));

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "score the columns of a matrix CSV");
  score->add_option("--input,-i", score_args.input, "matrix CSV")->required();
  score->add_option("--method,-m", score_args.method, "ancp, sncp or cop")->check(CLI::IsMember(kMethods));
  score->add_option("--out,-o", score_args.out, "score CSV path")->required();
  score->add_option("--rank-tol", score_args.rank_tol, "relative singular value cutoff");

  RecoverArgs rec_args;
  auto* recover = app.add_subcommand("recover", "recover the inlier subspace from a matrix CSV");
  recover->add_option("--input,-i", rec_args.input, "matrix CSV")->required();
  recover->add_option("--dim,-r", rec_args.dim, "target subspace dimension (optional for fixed-fraction)");
  recover->add_option("--method,-m", rec_args.method, "ancp, sncp or cop")->check(CLI::IsMember(kMethods));
  recover->add_option("--strategy", rec_args.strategy, "column selection")->check(CLI::IsMember(kStrategies));
  recover->add_option("--keep-fraction", rec_args.keep_fraction, "fixed-fraction share")
      ->check(CLI::Range(0.0, 1.0));
  recover->add_option("--tol", rec_args.tol, "selection tolerance");
  recover->add_option("--rank-tol", rec_args.rank_tol, "relative singular value cutoff for scoring");
  recover->add_option("--truth", rec_args.truth, "truth.json to report recovery_error")->check(CLI::ExistingFile);
  recover->add_option("--out,-o", rec_args.out, "JSON path (default stdout)");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--model", syn.model, "generator")->check(CLI::IsMember(kModels));
  synth->add_option("--m1", syn.m1, "ambient dimension");
  synth->add_option("--r", syn.r, "inlier subspace dimension");
  synth->add_option("--ni", syn.n_i, "number of inliers");
  synth->add_option("--no", syn.n_o, "number of outliers");
  synth->add_option("--ro", syn.r_o, "outlier subspace dimension");
  synth->add_option("--sigma", syn.sigma_n, "noise level (noisy-inliers)");
  synth->add_option("--eta", syn.eta, "cluster spread (clustered-outliers)");
  synth->add_option("--gamma", syn.gamma, "cluster spread (clustered-inliers)");
  synth->add_option("--m", syn.m, "subspace count (union-inliers) or response dimension (perm-reg)");
  synth->add_option("--d", syn.d, "per-subspace dimension (union-inliers) or regressor dimension (perm-reg)");
  synth->add_option("--nik", syn.n_i_k, "inliers per subspace (union-inliers)")->delimiter(',');
  synth->add_option("--h-dim", syn.h_dim, "extra outlier directions (near-subspace)");
  synth->add_option("--base", syn.base, "base model for noisy-inliers")->check(CLI::IsMember(kModels));
  synth->add_option("--seed", syn.seed, "seed");
  synth->add_option("--out-dir", syn.out_dir, "directory for data.csv and truth.json");

  SweepArgs phase_args, noise_args, sep_args, perm_args;
  CLI::App *phase = nullptr, *noise = nullptr, *sep = nullptr, *perm = nullptr;
  add_sweep(app, "phase", "phase-transition sweep over (n_i, n_o)", phase_args, phase);
  add_sweep(app, "noise-sweep", "success rate against SNR", noise_args, noise);
  add_sweep(app, "separation", "score separation under structured outliers", sep_args, sep);
  add_sweep(app, "perm-reg", "permuted-regression recovery", perm_args, perm);

  TheoryArgs th;
  auto* theory = app.add_subcommand("theory", "evaluate a sufficient condition");
  theory->add_option("--params", th.params, "JSON params keyed by theorem id")
      ->required()
      ->check(CLI::ExistingFile);
  theory->add_option("--delta", th.delta, "failure probability (default 0.05)")->check(CLI::Range(0.0, 1.0));
  theory->add_option("--out,-o", th.out, "JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*score) return run_score(score_args);
    if (*recover) return run_recover(rec_args);
    if (*synth) return run_synth(syn);
    if (*phase) return run_sweep(phase_args);
    if (*noise) return run_sweep(noise_args);
    if (*sep) return run_sweep(sep_args);
    if (*perm) return run_sweep(perm_args);
    if (*theory) return run_theory(th);
  } catch (const Usage& u) {
    std::cerr << "error: " << u.message << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return kExitRuntime;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: json: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
