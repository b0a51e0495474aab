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

#include "rsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "rsp/error.hpp"
#include "rsp/io.hpp"
#include "rsp/sgsp.hpp"

namespace rsp {

CheckpointObserver qp_observer(std::shared_ptr<const QpInstance> inst) {
  return [inst](Checkpoint& cp) {
    if (cp.x.size() > inst->n) cp.x.resize(inst->n);
    cp.feas_gap = feasibility_gap(*inst, cp.x);
    cp.obj = worst_objective(*inst, cp.x);
    return false;
  };
}

namespace {

IterTrace run_sgsp_qp(std::shared_ptr<const QpInstance> inst, ConstVec x_start,
                      const QpRunOptions& opts) {
  const RobustProblem p = qp_epigraph_problem(inst);
  const std::size_t n = inst->n;
  // x = 0 gives g_i = c_i < 0 for every z; t = 1 clears the objective row.
  Vector x_hat(n + 1, 0.0);
  x_hat[n] = 1.0;
  const SlaterCertificate cert = make_certificate(p, x_hat, -1.1);
  const DualBounds bounds = dual_bounds(p, cert, uncertainty_radii(p));

  Vector y0(x_start.begin(), x_start.end());
  y0.push_back(std::clamp(worst_objective(*inst, x_start), -1.1, 3.1));
  SgspConfig cfg;
  cfg.n_iters = opts.iter_budget;
  cfg.steps = StepPolicy::adaptive(opts.step_base);
  cfg.averaging = Averaging::StepWeighted;
  cfg.checkpoint_every = opts.checkpoint_every;
  cfg.time_budget_s = opts.time_budget_s;
  cfg.certify = false;
  IterTrace tr = sgsp_run(p, bounds, cfg, initial_state(p, y0), qp_observer(inst));
  tr.algorithm = "sgsp";
  if (tr.x_avg.size() > n) tr.x_avg.resize(n);
  return tr;
}

}  // namespace

IterTrace run_qp_algorithm(const std::string& algo, std::shared_ptr<const QpInstance> inst,
                           ConstVec x_start, const QpRunOptions& opts, double* lower_bound) {
  require(x_start.size() == inst->n, ErrorCode::DimensionMismatch, "start point dimension");
  const QpModel model(inst);
  const CheckpointObserver obs = qp_observer(inst);
  if (algo == "sgsp") return run_sgsp_qp(inst, x_start, opts);
  if (algo == "cutting-planes") {
    CuttingPlaneOptions co;
    co.eps = opts.eps;
    co.max_rounds = std::min<long>(opts.iter_budget, 500);
    co.time_budget_s = opts.time_budget_s;
    CuttingPlaneResult res = cutting_planes(model, co, BarrierMaster{}, obs);
    if (lower_bound) *lower_bound = res.lower_bound;
    return std::move(res.trace);
  }
  if (algo == "fo-pess") {
    FoPessOptions fo;
    fo.eps = opts.eps;
    fo.base = opts.step_base;
    fo.checkpoint_every = opts.checkpoint_every;
    fo.time_budget_s = opts.time_budget_s;
    return fo_pess(model, x_start, opts.iter_budget, fo, obs);
  }
  if (algo == "oco") {
    OcoOptions oo;
    oo.eps = opts.eps;
    oo.base = opts.step_base;
    oo.inner_budget = opts.oco_inner_budget;
    oo.checkpoint_every = opts.checkpoint_every;
    oo.time_budget_s = opts.time_budget_s;
    return oco_ogd(model, x_start, opts.iter_budget, oo, obs);
  }
  fail(ErrorCode::InvalidArgument, "unknown QP algorithm '" + algo + "'");
}

void fill_ogr(IterTrace& trace, double lb, double eps) {
  for (auto& cp : trace.checkpoints) cp.ogr = ogr_from(cp.feas_gap, cp.obj, lb, eps);
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            "config line " + std::to_string(lineno) + " is not key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    const auto b = cur.find_first_not_of(' ');
    const auto e = cur.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
T parse_num(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>) out = static_cast<T>(std::stod(v, &pos));
    else out = static_cast<T>(std::stoull(v, &pos));
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "bad value for " + key + ": '" + v + "'");
  }
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  for (const auto& s : split_list(v)) out.push_back(parse_num<T>(key, s));
  require(!out.empty(), ErrorCode::InvalidArgument, key + " must not be empty");
  return out;
}

}  // namespace

BenchConfig bench_config_from_kv(const std::map<std::string, std::string>& kv, BenchConfig cfg) {
  for (const auto& [k, v] : kv) {
    if (k == "n") cfg.n = parse_list<std::size_t>(k, v);
    else if (k == "K") cfg.K = parse_num<std::size_t>(k, v);
    else if (k == "L") cfg.L = parse_num<std::size_t>(k, v);
    else if (k == "m") cfg.m = parse_list<std::size_t>(k, v);
    else if (k == "seeds") cfg.seeds = parse_list<std::uint64_t>(k, v);
    else if (k == "algorithms") cfg.algorithms = split_list(v);
    else if (k == "iter_budget") cfg.run.iter_budget = parse_num<long>(k, v);
    else if (k == "time_budget_s") cfg.run.time_budget_s = parse_num<double>(k, v);
    else if (k == "eps") cfg.run.eps = parse_num<double>(k, v);
    else if (k == "checkpoint_every") cfg.run.checkpoint_every = parse_num<long>(k, v);
    else if (k == "oco_inner_budget") cfg.run.oco_inner_budget = parse_num<long>(k, v);
    else if (k == "jobs") cfg.jobs = parse_num<int>(k, v);
    else if (k == "out_dir") cfg.out_dir = v;
    else fail(ErrorCode::InvalidArgument, "unknown bench key '" + k + "'");
  }
  require(cfg.run.iter_budget > 0 && cfg.run.checkpoint_every > 0, ErrorCode::InvalidArgument,
          "budgets must be positive");
  require(cfg.jobs >= 1, ErrorCode::InvalidArgument, "jobs must be at least 1");
  for (const auto& a : cfg.algorithms)
    require(a == "sgsp" || a == "cutting-planes" || a == "fo-pess" || a == "oco",
            ErrorCode::InvalidArgument, "unknown bench algorithm '" + a + "'");
  return cfg;
}

namespace {

struct InstanceJob {
  std::size_t n, m;
  std::uint64_t seed;
};

std::string instance_name(const InstanceJob& j, const BenchConfig& cfg) {
  return "n" + std::to_string(j.n) + "_K" + std::to_string(cfg.K) + "_L" +
         std::to_string(cfg.L) + "_m" + std::to_string(j.m) + "_s" + std::to_string(j.seed);
}

void summarize(CellResult& cell, double eps) {
  fill_ogr(cell.trace, cell.lower_bound, eps);
  RunningMinimum rm;
  for (std::size_t k = 0; k < cell.trace.checkpoints.size(); ++k) {
    const Checkpoint& cp = cell.trace.checkpoints[k];
    rm.elapsed_s = cp.elapsed_s;
    rm.iter = cp.iter;
    rm.min_fg = std::min(rm.min_fg, cp.feas_gap);
    rm.min_ogr = std::min(rm.min_ogr, cp.ogr);
    cell.minima.push_back(rm);
    if (cell.checkpoints_to_feasible == 0 && cp.feas_gap <= eps)
      cell.checkpoints_to_feasible = k + 1;
  }
  if (!cell.trace.checkpoints.empty()) {
    const Checkpoint& last = cell.trace.checkpoints.back();
    cell.final_fg = last.feas_gap;
    cell.final_ogr = last.ogr;
    cell.final_gap = last.obj - cell.lower_bound;
  }
}

std::vector<CellResult> run_instance(const InstanceJob& job, const BenchConfig& cfg) {
  const std::string name = instance_name(job, cfg);
  std::vector<CellResult> cells;
  for (const auto& a : cfg.algorithms) {
    CellResult c;
    c.instance = name;
    c.algorithm = a;
    c.m = job.m;
    c.seed = job.seed;
    cells.push_back(std::move(c));
  }
  try {
    auto inst = std::make_shared<const QpInstance>(gen_instance(job.n, cfg.K, cfg.L, job.m, job.seed));
    const Vector x0 = nominal_start(QpModel(inst), BarrierMaster{});
    double lb = -kInf;
    // Cutting planes first: its cuts give the lower bound for every cell.
    IterTrace cp_trace = run_qp_algorithm("cutting-planes", inst, x0, cfg.run, &lb);
    for (auto& c : cells) {
      c.lower_bound = lb;
      try {
        c.trace = c.algorithm == "cutting-planes" ? cp_trace
                                                  : run_qp_algorithm(c.algorithm, inst, x0, cfg.run);
      } catch (const std::exception& e) {
        c.error = e.what();
      }
      summarize(c, cfg.run.eps);
    }
  } catch (const std::exception& e) {
    for (auto& c : cells)
      if (c.error.empty()) c.error = e.what();
  }
  return cells;
}

nlohmann::json num_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  std::vector<InstanceJob> jobs;
  for (std::size_t n : cfg.n)
    for (std::size_t m : cfg.m)
      for (std::uint64_t s : cfg.seeds) jobs.push_back({n, m, s});
  std::vector<std::vector<CellResult>> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) out[k] = run_instance(jobs[k], cfg);
  };
  const int nthreads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  BenchResult res;
  for (auto& v : out)
    for (auto& c : v) res.cells.push_back(std::move(c));

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& c : res.cells) {
      const std::string path =
          (std::filesystem::path(cfg.out_dir) / (c.instance + "_" + c.algorithm + ".csv")).string();
      write_text_file(path, trace_to_csv(c.trace));
    }
    write_json_file((std::filesystem::path(cfg.out_dir) / "summary.json").string(),
                    bench_summary_json(res, cfg));
  }
  return res;
}

nlohmann::json bench_summary_json(const BenchResult& res, const BenchConfig& cfg) {
  nlohmann::json j;
  j["eps"] = cfg.run.eps;
  j["iter_budget"] = cfg.run.iter_budget;
  j["checkpoint_every"] = cfg.run.checkpoint_every;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : res.cells) {
    nlohmann::json cj;
    cj["instance"] = c.instance;
    cj["algorithm"] = c.algorithm;
    cj["m"] = c.m;
    cj["seed"] = c.seed;
    cj["lower_bound"] = num_or_string(c.lower_bound);
    cj["final_fg"] = num_or_string(c.final_fg);
    cj["final_ogr"] = num_or_string(c.final_ogr);
    cj["final_gap"] = num_or_string(c.final_gap);
    cj["iterations"] = c.trace.iterations;
    cj["checkpoints"] = c.trace.checkpoints.size();
    cj["checkpoints_to_feasible"] = c.checkpoints_to_feasible;
    if (!c.error.empty()) cj["error"] = c.error;
    nlohmann::json mins = nlohmann::json::array();
    for (const auto& rm : c.minima)
      mins.push_back({{"t", rm.elapsed_s},
                      {"iter", rm.iter},
                      {"min_fg", num_or_string(rm.min_fg)},
                      {"min_ogr", num_or_string(rm.min_ogr)}});
    cj["minima"] = mins;
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j;
}

}  // namespace rsp
