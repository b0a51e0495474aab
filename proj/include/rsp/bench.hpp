// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Robust-QP benchmark: runs SGSP and the baselines on generated instances
// from a common start and records feasibility and optimality-gap traces.

#include <map>
#include <string>

#include "rsp/baselines.hpp"

namespace rsp {

struct QpRunOptions {
  long iter_budget = 20000;
  double eps = 1e-3;
  long checkpoint_every = 100;
  std::optional<double> time_budget_s;
  double step_base = 2.0;
  long oco_inner_budget = 2000;
};

// Fills obj (worst-case objective) and feas_gap for checkpoints whose x holds
// at least n entries; the remaining entries are ignored.
CheckpointObserver qp_observer(std::shared_ptr<const QpInstance> inst);

// Runs one of sgsp, cutting-planes, fo-pess or oco from x_start. Checkpoint
// x vectors are in the instance's n coordinates.
IterTrace run_qp_algorithm(const std::string& algo, std::shared_ptr<const QpInstance> inst,
                           ConstVec x_start, const QpRunOptions& opts,
                           double* lower_bound = nullptr);

// OGR for every checkpoint once the lower bound is known.
void fill_ogr(IterTrace& trace, double lb, double eps);

struct BenchConfig {
  std::vector<std::size_t> n{10};
  std::size_t K = 10;
  std::size_t L = 10;
  std::vector<std::size_t> m{0, 3};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<std::string> algorithms{"sgsp", "cutting-planes", "fo-pess"};
  QpRunOptions run;
  int jobs = 1;
  std::string out_dir;  // empty: no files
};

// Flat key=value settings: n, K, L, m, seeds, algorithms (comma lists),
// iter_budget, time_budget_s, eps, checkpoint_every, jobs, out_dir.
BenchConfig bench_config_from_kv(const std::map<std::string, std::string>& kv,
                                 BenchConfig base = {});
std::map<std::string, std::string> parse_kv_text(const std::string& text);

struct RunningMinimum {
  double elapsed_s = 0.0;
  long iter = 0;
  double min_fg = kInf;
  double min_ogr = kInf;
};

struct CellResult {
  std::string instance;
  std::string algorithm;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  IterTrace trace;
  double lower_bound = -kInf;
  double final_fg = kInf;
  double final_ogr = kInf;
  double final_gap = kInf;  // worst-case objective - LB
  // 1-based index of the first checkpoint with FG <= eps; 0 if never.
  std::size_t checkpoints_to_feasible = 0;
  std::vector<RunningMinimum> minima;
  std::string error;
};

struct BenchResult {
  std::vector<CellResult> cells;
};

BenchResult run_bench(const BenchConfig& cfg);
nlohmann::json bench_summary_json(const BenchResult& res, const BenchConfig& cfg);

}  // namespace rsp
